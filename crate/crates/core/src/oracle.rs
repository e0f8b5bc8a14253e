//! Brute-force oracles over small finite fields: etale subalgebras by
//! traversal of subspaces in reduced row echelon form, Frobenius-stable
//! ideal systems in a split matrix algebra, and the count comparison
//! between the two, including the explicit bijection.

use std::collections::BTreeMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Algebra, AlgebraKind, Element};
use crate::error::{Error, Result};
use crate::etale::{is_etale_subalgebra, EtaleSubalgebra};
use crate::field::{Field, Scalar};
use crate::ideal::RightIdeal;
use crate::linalg::{direct_sum_check, Subspace};
use crate::moduli::{
    ideal_system_from_subalgebra_over, in_u, subalgebra_from_ideal_system, IdealSystem,
};
use crate::partition::Partition;

/// Default cap on the number of candidate subspaces an oracle may visit.
pub const DEFAULT_BUDGET: u128 = 1 << 30;

/// Number of `k`-dimensional subspaces of `F_q^n`, saturating at
/// `u128::MAX`.
pub fn gaussian_binomial(n: usize, k: usize, q: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        let a = q.checked_pow((n - i) as u32).and_then(|x| x.checked_sub(1));
        let b = q.checked_pow((i + 1) as u32).map(|x| x - 1);
        match (a.and_then(|a| num.checked_mul(a)), b.and_then(|b| den.checked_mul(b))) {
            (Some(x), Some(y)) => {
                let g = gcd(x, y);
                num = x / g;
                den = y / g;
            }
            _ => return u128::MAX,
        }
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Visit every `k`-dimensional subspace of `F^n` once, as its RREF basis,
/// keeping the values `keep` returns. Work is split by pivot pattern; the
/// result order depends only on the pattern and the index within it.
fn traverse_rref<T, G>(f: &Field, n: usize, k: usize, keep: G) -> Vec<T>
where
    T: Send,
    G: Fn(Vec<Vec<Scalar>>) -> Option<T> + Sync,
{
    let q = f.order().expect("finite field");
    let patterns = combinations(n, k);
    let run = |pivots: &Vec<usize>| -> Vec<T> {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| ((pivots[i] + 1)..n).filter(|j| !pivots.contains(j)).map(move |j| (i, j)))
            .collect();
        let total = q.pow(free.len() as u32);
        let mut out = Vec::new();
        for idx in 0..total {
            let mut rows = vec![vec![f.zero(); n]; k];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = f.one();
            }
            let mut rest = idx;
            for &(i, j) in &free {
                rows[i][j] = f.element_from_index(rest % q);
                rest /= q;
            }
            if let Some(t) = keep(rows) {
                out.push(t);
            }
        }
        out
    };
    #[cfg(feature = "parallel")]
    let chunks: Vec<Vec<T>> = patterns.par_iter().map(run).collect();
    #[cfg(not(feature = "parallel"))]
    let chunks: Vec<Vec<T>> = patterns.iter().map(run).collect();
    chunks.into_iter().flatten().collect()
}

fn finite_order(f: &Field) -> Result<u128> {
    f.order()
        .ok_or_else(|| Error::invalid(format!("enumeration needs a finite field, got {f}")))
}

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// All `m`-dimensional etale subalgebras of `A` over a finite field, in
/// canonical order. Candidates are the `m`-dimensional subspaces containing
/// 1, obtained from `(m-1)`-dimensional subspaces of a hyperplane missing 1.
pub fn enum_etale_subalgebras(a: &Algebra, m: usize, budget: u128) -> Result<Vec<EtaleSubalgebra>> {
    let f = a.field();
    let q = finite_order(f)?;
    let d = a.dim();
    if m == 0 || m > d {
        return Ok(Vec::new());
    }
    check_budget(gaussian_binomial(d - 1, m - 1, q), budget)?;
    let unity = a.unity_coords().to_vec();
    // hyperplane x_p = 0 with p the first nonzero coordinate of 1
    let p = unity.iter().position(|x| !f.is_zero(x)).expect("unity is nonzero");
    let mut found = traverse_rref(f, d - 1, m - 1, |rows| {
        let mut gens: Vec<Vec<Scalar>> = rows
            .into_iter()
            .map(|mut r| {
                r.insert(p, f.zero());
                r
            })
            .collect();
        gens.push(unity.clone());
        let space = Subspace::span(f, d, &gens);
        is_etale_subalgebra(&space, a).then(|| EtaleSubalgebra::new_unchecked(a, space))
    });
    found.sort();
    found.dedup();
    Ok(found)
}

/// Every etale subalgebra of every dimension `1..=deg A`.
pub fn enum_all_etale_subalgebras(a: &Algebra, budget: u128) -> Result<Vec<EtaleSubalgebra>> {
    let n = a.degree().ok_or_else(|| Error::Structural("algebra has no degree".into()))?;
    let mut out = Vec::new();
    for m in 1..=n {
        out.extend(enum_etale_subalgebras(a, m, budget)?);
    }
    Ok(out)
}

/// Every element of `A` (over a finite field) lying in the open set `U`.
pub fn enum_generators(a: &Algebra, budget: u128) -> Result<Vec<Element>> {
    let f = a.field();
    let q = finite_order(f)?;
    let total = q.checked_pow(a.dim() as u32).unwrap_or(u128::MAX);
    check_budget(total, budget)?;
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rest = idx;
        let coords = (0..a.dim())
            .map(|_| {
                let c = f.element_from_index(rest % q);
                rest /= q;
                c
            })
            .collect();
        let x = a.element(coords)?;
        if in_u(&x)? {
            out.push(x);
        }
    }
    Ok(out)
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a as u128, b as u128) as usize * b
}

/// The extension `F_{q^M}` over which every Frobenius-stable system of
/// type `rho` splits: `M = lcm(1..=max multiplicity)`.
pub fn system_field(base: &Field, rho: &Partition) -> Result<Field> {
    let max_mult = rho.distinct_parts().iter().map(|&r| rho.multiplicity(r)).max().unwrap_or(1);
    let degree = (1..=max_mult).fold(1, lcm);
    if degree == 1 {
        Ok(base.clone())
    } else {
        Field::finite_extension(base, degree, "z")
    }
}

fn frobenius_subspace(u: &Subspace, base: &Field) -> Result<Subspace> {
    let k = u.field().clone();
    u.map_entries(&k, |x| k.galois_generator(x, base))
}

/// Frobenius orbits (sorted, each of size at most `max_size`) of
/// `r`-dimensional subspaces of `K^n`.
fn subspace_orbits(k: &Field, base: &Field, n: usize, r: usize, max_size: usize) -> Result<Vec<Vec<Subspace>>> {
    let all = traverse_rref(k, n, r, |rows| Some(Subspace::span(k, n, &rows)));
    let mut orbits: BTreeMap<Subspace, Vec<Subspace>> = BTreeMap::new();
    for u in all {
        let mut orbit = vec![u.clone()];
        let mut cur = frobenius_subspace(&u, base)?;
        while cur != u && orbit.len() <= max_size {
            orbit.push(cur.clone());
            cur = frobenius_subspace(&cur, base)?;
        }
        if orbit.len() <= max_size {
            orbit.sort();
            orbits.entry(orbit[0].clone()).or_insert(orbit);
        }
    }
    Ok(orbits.into_values().collect())
}

/// Ways to pick pairwise distinct orbits whose sizes add up to `target`.
fn orbit_selections(orbits: &[Vec<Subspace>], target: usize) -> Vec<Vec<Subspace>> {
    fn go(orbits: &[Vec<Subspace>], start: usize, left: usize, cur: &mut Vec<Subspace>, out: &mut Vec<Vec<Subspace>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..orbits.len() {
            if orbits[i].len() <= left {
                let before = cur.len();
                cur.extend(orbits[i].iter().cloned());
                go(orbits, i + 1, left - orbits[i].len(), cur, out);
                cur.truncate(before);
            }
        }
    }
    let mut out = Vec::new();
    go(orbits, 0, target, &mut Vec::new(), &mut out);
    out
}

/// The right ideal `{X : im X ⊆ U}` of `M_n(K)`.
fn column_ideal(alg: &Algebra, u: &Subspace) -> Result<RightIdeal> {
    let k = alg.field();
    let n = u.ambient();
    let gens: Vec<Vec<Scalar>> = u
        .basis()
        .iter()
        .flat_map(|v| {
            (0..n).map(move |j| {
                let mut x = vec![k.zero(); n * n];
                for (i, c) in v.iter().enumerate() {
                    x[i * n + j] = c.clone();
                }
                x
            })
        })
        .collect();
    RightIdeal::new(alg, Subspace::span(k, n * n, &gens))
}

fn matrix_degree(a: &Algebra) -> Result<usize> {
    match a.kind() {
        AlgebraKind::Matrix { n } => Ok(*n),
        _ => Err(Error::Unsupported(
            "ideal systems are enumerated in the matrix model only".into(),
        )),
    }
}

/// All Frobenius-stable ideal systems of type `rho` in `M_n(F_q)`, as
/// canonical systems over [`system_field`].
pub fn enum_ideal_systems(a: &Algebra, rho: &Partition, budget: u128) -> Result<Vec<IdealSystem>> {
    let n = matrix_degree(a)?;
    let f = a.field();
    finite_order(f)?;
    if rho.total() != n {
        return Err(Error::invalid(format!("partition {rho} does not sum to the degree {n}")));
    }
    let k = system_field(f, rho)?;
    let qk = k.order().expect("finite");
    let needed = rho
        .distinct_parts()
        .iter()
        .fold(0u128, |acc, &r| acc.saturating_add(gaussian_binomial(n, r, qk)));
    check_budget(needed, budget)?;
    let ak = a.base_change(&k)?;

    // per distinct rank, the possible unordered choices of ideals
    let mut per_rank: Vec<Vec<Vec<Subspace>>> = Vec::new();
    for r in rho.distinct_parts().into_iter().rev() {
        let mult = rho.multiplicity(r);
        let orbits = subspace_orbits(&k, f, n, r, mult)?;
        per_rank.push(orbit_selections(&orbits, mult));
    }
    let mut combos: Vec<Vec<Subspace>> = vec![Vec::new()];
    for choices in &per_rank {
        combos = combos
            .iter()
            .flat_map(|c| {
                choices.iter().map(move |s| {
                    let mut v = c.clone();
                    v.extend(s.iter().cloned());
                    v
                })
            })
            .collect();
    }
    let mut systems = Vec::new();
    for us in combos {
        if !direct_sum_check(&us, n) {
            continue;
        }
        let ideals = us.iter().map(|u| column_ideal(&ak, u)).collect::<Result<Vec<_>>>()?;
        let sys = IdealSystem::from_ideals(&ak, ideals)?;
        debug_assert_eq!(sys.galois_image(f)?, sys);
        systems.push(sys);
    }
    systems.sort_by(|x, y| system_key(x).cmp(&system_key(y)));
    systems.dedup();
    Ok(systems)
}

fn system_key(s: &IdealSystem) -> Vec<&Subspace> {
    s.ideals().iter().map(|i| i.space()).collect()
}

/// Outcome of comparing both sides of the moduli correspondence over a
/// finite field.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnumerationReport {
    pub algebra: String,
    pub rho: Vec<usize>,
    pub count_subalgebras: usize,
    pub count_systems: usize,
    #[serde(rename = "match")]
    pub counts_match: bool,
    /// The two explicit maps are mutually inverse on the enumerated sets.
    pub bijective: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

/// Etale subalgebras of type `rho` against Frobenius-stable ideal systems
/// of type `rho`, with the bijection checked in both directions.
pub fn verify_moduli_count(a: &Algebra, rho: &Partition, budget: u128) -> Result<EnumerationReport> {
    let start = Stopwatch::start();
    let systems = enum_ideal_systems(a, rho, budget)?;
    let candidates = enum_etale_subalgebras(a, rho.len(), budget)?;
    let mut subalgebras = Vec::new();
    for e in candidates {
        if e.type_of()? == *rho {
            subalgebras.push(e);
        }
    }
    let k = system_field(a.field(), rho)?;
    let ak = a.base_change(&k)?;
    let bijective = check_bijection(a, &ak, &subalgebras, &systems)?;
    Ok(EnumerationReport {
        algebra: a.to_string(),
        rho: rho.parts().to_vec(),
        count_subalgebras: subalgebras.len(),
        count_systems: systems.len(),
        counts_match: subalgebras.len() == systems.len(),
        bijective,
        seconds: start.seconds(),
    })
}

// wasm32-unknown-unknown has no clock; Instant::now panics there
struct Stopwatch(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Stopwatch {
    fn start() -> Stopwatch {
        #[cfg(not(target_arch = "wasm32"))]
        return Stopwatch(std::time::Instant::now());
        #[cfg(target_arch = "wasm32")]
        return Stopwatch();
    }

    fn seconds(&self) -> Option<f64> {
        #[cfg(not(target_arch = "wasm32"))]
        return Some(self.0.elapsed().as_secs_f64());
        #[cfg(target_arch = "wasm32")]
        return None;
    }
}

fn check_bijection(
    a: &Algebra,
    ak: &Algebra,
    subalgebras: &[EtaleSubalgebra],
    systems: &[IdealSystem],
) -> Result<bool> {
    if subalgebras.len() != systems.len() {
        return Ok(false);
    }
    let find = |s: &IdealSystem| systems.binary_search_by(|x| system_key(x).cmp(&system_key(s))).ok();
    let mut hit = vec![false; systems.len()];
    for e in subalgebras {
        let sys = ideal_system_from_subalgebra_over(e, ak)?;
        let Some(i) = find(&sys) else { return Ok(false) };
        if hit[i] {
            return Ok(false);
        }
        hit[i] = true;
        let back = subalgebra_from_ideal_system(&systems[i])?;
        if back.descend(a).as_ref() != Some(e) {
            return Ok(false);
        }
    }
    for sys in systems {
        let Some(e) = subalgebra_from_ideal_system(sys)?.descend(a) else { return Ok(false) };
        if subalgebras.binary_search(&e).is_err() || ideal_system_from_subalgebra_over(&e, ak)? != *sys {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: usize, p: u64) -> Algebra {
        Algebra::matrix(n, &Field::prime(p).unwrap()).unwrap()
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(3, 1, 2), 7);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(8, 2, 2), 10795);
        assert_eq!(gaussian_binomial(3, 0, 5), 1);
        assert_eq!(gaussian_binomial(2, 3, 5), 0);
        assert_eq!(gaussian_binomial(200, 100, 1 << 20), u128::MAX);
    }

    #[test]
    fn traversal_counts_match_gaussian_binomials() {
        let f3 = Field::prime(3).unwrap();
        for (n, k) in [(3, 1), (4, 2), (3, 3), (3, 0)] {
            let all = traverse_rref(&f3, n, k, |rows| Some(Subspace::span(&f3, n, &rows)));
            let mut uniq = all.clone();
            uniq.sort();
            uniq.dedup();
            assert_eq!(uniq.len(), all.len());
            assert_eq!(all.len() as u128, gaussian_binomial(n, k, 3));
        }
    }

    #[test]
    fn subalgebra_examples() {
        let m2 = m(2, 2);
        let ones = enum_etale_subalgebras(&m2, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(ones.len(), 1);
        assert_eq!(ones[0].space().basis(), &[m2.unity_coords().to_vec()]);
        assert_eq!(enum_etale_subalgebras(&m2, 2, DEFAULT_BUDGET).unwrap().len(), 4);
        assert_eq!(enum_etale_subalgebras(&m(2, 3), 2, DEFAULT_BUDGET).unwrap().len(), 9);
    }

    #[test]
    fn budget_is_enforced() {
        let err = enum_etale_subalgebras(&m(2, 3), 2, 3).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { needed: 13, budget: 3 });
        assert!(enum_ideal_systems(&m(2, 3), &Partition::ones(2), 5).is_err());
    }

    #[test]
    fn ideal_system_examples() {
        for p in [2, 3] {
            let sys = enum_ideal_systems(&m(2, p), &Partition::ones(2), DEFAULT_BUDGET).unwrap();
            assert_eq!(sys.len() as u64, p * p);
            let whole = enum_ideal_systems(&m(2, p), &Partition::new(vec![2]).unwrap(), DEFAULT_BUDGET).unwrap();
            assert_eq!(whole.len(), 1);
        }
    }

    #[test]
    fn split_and_nonsplit_systems() {
        // q(q+1)/2 systems defined over F_q and q(q-1)/2 conjugate pairs
        let f = Field::prime(3).unwrap();
        let sys = enum_ideal_systems(&m(2, 3), &Partition::ones(2), DEFAULT_BUDGET).unwrap();
        let rational = sys
            .iter()
            .filter(|s| s.ideals().iter().all(|i| i.space().descend(&f).is_some()))
            .count();
        assert_eq!(rational, 6);
        assert_eq!(sys.len() - rational, 3);
    }

    #[test]
    fn moduli_reports() {
        let r = verify_moduli_count(&m(2, 2), &Partition::ones(2), DEFAULT_BUDGET).unwrap();
        assert_eq!((r.count_subalgebras, r.count_systems, r.counts_match, r.bijective), (4, 4, true, true));
        let r = verify_moduli_count(&m(2, 2), &Partition::new(vec![2]).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!((r.count_subalgebras, r.count_systems, r.bijective), (1, 1, true));
        let json = serde_json::to_value(EnumerationReport { seconds: None, ..r }).unwrap();
        assert_eq!(json["match"], true);
        assert!(json.get("seconds").is_none());
    }

    #[test]
    fn quaternions_are_rejected_by_the_system_oracle() {
        let f = Field::prime(3).unwrap();
        let h = Algebra::quaternion(&f.from_i64(-1), &f.from_i64(-1), &f).unwrap();
        assert!(matches!(enum_ideal_systems(&h, &Partition::ones(2), DEFAULT_BUDGET), Err(Error::Unsupported(_))));
    }
}
