//! Partitions of the degree: the type invariant of an etale subalgebra.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A multiset of positive integers, stored in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Partition> {
        if parts.is_empty() {
            return Err(Error::invalid("empty partition"));
        }
        if parts.contains(&0) {
            return Err(Error::invalid("partition entries must be positive"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    /// `[1, 1, …, 1]` with `n` entries.
    pub fn ones(n: usize) -> Partition {
        Partition(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of occurrences of `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.0.iter().filter(|&&x| x == i).count()
    }

    /// The set of distinct entries.
    pub fn distinct_parts(&self) -> BTreeSet<usize> {
        self.0.iter().copied().collect()
    }

    /// Number of distinct entries.
    pub fn n_distinct(&self) -> usize {
        self.distinct_parts().len()
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the entries.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// All partitions of `n`, in descending lexicographic order.
    pub fn all_of(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            for k in (1..=max.min(n)).rev() {
                prefix.push(k);
                rec(n - k, k, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, n, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Accepts `2,1,1` with optional surrounding brackets.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Partition> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("partition entry {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}
