//! Etale subalgebras: recognition, primitive elements, minimal idempotents
//! over a splitting field, and the type invariant.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::factor::{find_roots, is_irreducible, splitting_extension};
use crate::field::{Field, Scalar};
use crate::ideal::idempotent_rank;
use crate::linalg::{Matrix, Subspace};
use crate::moduli::lagrange_idempotents;
use crate::partition::Partition;

/// Largest `q^dim` for which a primitive element is searched exhaustively.
const EXHAUSTIVE_LIMIT: u128 = 1 << 16;

/// A commutative separable unital subalgebra of an [`Algebra`].
///
/// The primitive element and the type are computed lazily; concurrent
/// first calls may both compute them, which is harmless since the results
/// are deterministic.
#[derive(Clone)]
pub struct EtaleSubalgebra {
    algebra: Algebra,
    space: Subspace,
    primitive: OnceLock<Element>,
    partition: OnceLock<Partition>,
}

impl fmt::Debug for EtaleSubalgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EtaleSubalgebra({:?} in {:?})", self.space, self.algebra)
    }
}

impl PartialEq for EtaleSubalgebra {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.space == other.space
    }
}

impl Eq for EtaleSubalgebra {}

impl PartialOrd for EtaleSubalgebra {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EtaleSubalgebra {
    fn cmp(&self, other: &Self) -> Ordering {
        self.space.cmp(&other.space)
    }
}

/// Coordinates of `v_i v_j` in the RREF basis of `space`, or `None` if some
/// product leaves the space.
fn product_table(algebra: &Algebra, space: &Subspace) -> Option<Vec<Vec<Vec<Scalar>>>> {
    let basis = space.basis();
    basis
        .iter()
        .map(|vi| basis.iter().map(|vj| space.coordinates(&algebra.mul_raw(vi, vj))).collect())
        .collect()
}

/// True iff `space` contains 1, is closed under multiplication, is
/// commutative, and has a nondegenerate trace form.
pub fn is_etale_subalgebra(space: &Subspace, algebra: &Algebra) -> bool {
    if space.ambient() != algebra.dim() || space.field() != algebra.field() {
        return false;
    }
    if !space.contains(algebra.unity_coords()) {
        return false;
    }
    let Some(table) = product_table(algebra, space) else {
        return false;
    };
    let m = space.dim();
    for i in 0..m {
        for j in i + 1..m {
            if table[i][j] != table[j][i] {
                return false;
            }
        }
    }
    trace_form_nondegenerate(algebra.field(), &table)
}

fn trace_form_nondegenerate(f: &Field, table: &[Vec<Vec<Scalar>>]) -> bool {
    let m = table.len();
    // trace of left multiplication by v_k restricted to the subalgebra
    let traces: Vec<Scalar> =
        (0..m).map(|k| (0..m).fold(f.zero(), |acc, l| f.add(&acc, &table[k][l][l]))).collect();
    let mut gram = Matrix::zeros(f, m, m);
    for i in 0..m {
        for j in 0..m {
            let t = table[i][j]
                .iter()
                .zip(&traces)
                .fold(f.zero(), |acc, (c, t)| f.add(&acc, &f.mul(c, t)));
            gram.set(i, j, t);
        }
    }
    !f.is_zero(&gram.det())
}

impl EtaleSubalgebra {
    pub fn new(algebra: &Algebra, space: Subspace) -> Result<EtaleSubalgebra> {
        if !is_etale_subalgebra(&space, algebra) {
            return Err(Error::Structural(
                "subspace is not a commutative separable unital subalgebra".into(),
            ));
        }
        Ok(Self::new_unchecked(algebra, space))
    }

    pub(crate) fn new_unchecked(algebra: &Algebra, space: Subspace) -> EtaleSubalgebra {
        EtaleSubalgebra {
            algebra: algebra.clone(),
            space,
            primitive: OnceLock::new(),
            partition: OnceLock::new(),
        }
    }

    /// The subalgebra spanned by the given elements (which must already span
    /// an etale subalgebra).
    pub fn spanned_by(algebra: &Algebra, elements: &[Element]) -> Result<EtaleSubalgebra> {
        let rows: Vec<Vec<Scalar>> = elements.iter().map(|e| e.coords().to_vec()).collect();
        EtaleSubalgebra::new(algebra, Subspace::span(algebra.field(), algebra.dim(), &rows))
    }

    pub(crate) fn set_primitive(&self, a: Element) {
        let _ = self.primitive.set(a);
    }

    pub(crate) fn set_partition(&self, p: Partition) {
        let _ = self.partition.set(p);
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn field(&self) -> &Field {
        self.algebra.field()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis_elements(&self) -> Vec<Element> {
        self.space
            .basis()
            .iter()
            .map(|v| self.algebra.element(v.clone()).expect("basis vector in the algebra"))
            .collect()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.space.contains(x.coords())
    }

    /// `E ⊗ K` inside `A ⊗ K`.
    pub fn base_change(&self, target: &Field) -> Result<EtaleSubalgebra> {
        let alg = self.algebra.base_change(target)?;
        let space = self.space.base_change(target)?;
        Ok(EtaleSubalgebra::new_unchecked(&alg, space))
    }

    /// Same as [`EtaleSubalgebra::base_change`] but reusing an already
    /// base-changed algebra.
    pub fn base_change_into(&self, target: &Algebra) -> Result<EtaleSubalgebra> {
        let space = self.space.base_change(target.field())?;
        Ok(EtaleSubalgebra::new_unchecked(target, space))
    }

    /// The subalgebra over a subfield, when its canonical basis is defined
    /// there.
    pub fn descend(&self, base: &Algebra) -> Option<EtaleSubalgebra> {
        let space = self.space.descend(base.field())?;
        Some(EtaleSubalgebra::new_unchecked(base, space))
    }

    fn generates(&self, a: &Element) -> bool {
        a.min_poly().degree() == Some(self.dim())
    }

    /// Deterministic candidate search. `Ok(None)` means an exhaustive search
    /// proved that no primitive element exists over the base field.
    fn search_primitive(&self) -> Result<Option<Element>> {
        let f = self.field();
        let basis = self.basis_elements();
        let m = basis.len();
        for b in &basis {
            if self.generates(b) {
                return Ok(Some(b.clone()));
            }
        }
        let small: Vec<Scalar> = match f.order() {
            Some(q) => (1..q.min(5)).map(|i| f.element_from_index(i)).collect(),
            None => (1..=4).map(|i| f.from_i64(i)).collect(),
        };
        for i in 0..m {
            for j in i + 1..m {
                for c in &small {
                    let cand = &basis[i] + &basis[j].scale(c);
                    if self.generates(&cand) {
                        return Ok(Some(cand));
                    }
                }
            }
        }
        // moment curve sum t^k v_k: only finitely many t fail over a large field
        let bound = (m * m * m + 2) as u128;
        let ts: Vec<Scalar> = match f.order() {
            Some(q) => (2..q.min(bound)).map(|i| f.element_from_index(i)).collect(),
            None => (2..bound as i64).map(|t| f.from_i64(t)).collect(),
        };
        for t in &ts {
            let mut power = f.one();
            let mut cand = self.algebra.zero();
            for b in &basis {
                cand = &cand + &b.scale(&power);
                power = f.mul(&power, t);
            }
            if self.generates(&cand) {
                return Ok(Some(cand));
            }
        }
        if let Some(q) = f.order() {
            if let Some(total) = q.checked_pow(m as u32).filter(|&t| t <= EXHAUSTIVE_LIMIT) {
                for idx in 0..total {
                    let mut rest = idx;
                    let mut cand = self.algebra.zero();
                    for b in &basis {
                        cand = &cand + &b.scale(&f.element_from_index(rest % q));
                        rest /= q;
                    }
                    if self.generates(&cand) {
                        return Ok(Some(cand));
                    }
                }
                return Ok(None);
            }
        }
        Err(Error::Exhausted(format!(
            "no primitive element found for a {m}-dimensional subalgebra over {f}"
        )))
    }

    /// An element whose minimal polynomial has degree `dim E`.
    pub fn primitive_element(&self) -> Result<Element> {
        if let Some(a) = self.primitive.get() {
            return Ok(a.clone());
        }
        let a = self.search_primitive()?.ok_or_else(|| {
            Error::Exhausted(format!(
                "no primitive element exists over {}; extend scalars",
                self.field()
            ))
        })?;
        let _ = self.primitive.set(a.clone());
        Ok(a)
    }

    /// Minimal idempotents of `E ⊗ K` for a splitting field `K`, in the
    /// canonical order of the roots they come from.
    ///
    /// When the base field is too small for a primitive element, scalars are
    /// first extended to `F_{q^k}` with `q^k >= dim E`.
    pub fn minimal_idempotents(&self) -> Result<(Field, Vec<Element>)> {
        match self.primitive_element() {
            Ok(a) => split_by(&a),
            Err(Error::Exhausted(msg)) => {
                let f = self.field();
                let Some(q) = f.order() else {
                    return Err(Error::Exhausted(msg));
                };
                let m = self.dim() as u128;
                let mut k = 1u32;
                while q.pow(k) < m.max(2) {
                    k += 1;
                }
                loop {
                    let k0 = Field::finite_extension(f, k as usize, "u")?;
                    let ek = self.base_change(&k0)?;
                    match ek.primitive_element() {
                        Ok(a) => return split_by(&a),
                        Err(Error::Exhausted(_)) if k < 8 => k += 1,
                        Err(e) => return Err(e),
                    }
                }
            }
            Err(e) => Err(e),
        }
    }

    /// Minimal idempotents of `E ⊗ K` for a given extension `K` in which
    /// `E` splits.
    pub fn minimal_idempotents_over(&self, target: &Algebra) -> Result<Vec<Element>> {
        let ek = self.base_change_into(target)?;
        let a = ek.primitive_element()?;
        let f = a.min_poly();
        let roots = find_roots(&f, target.field())?;
        if roots.len() != self.dim() {
            return Err(Error::Unsupported(format!(
                "subalgebra does not split over {}",
                target.field()
            )));
        }
        lagrange_idempotents(&a, &roots)
    }

    /// Multiset of reduced ranks of the minimal idempotents.
    pub fn type_of(&self) -> Result<Partition> {
        if let Some(p) = self.partition.get() {
            return Ok(p.clone());
        }
        let (_, idems) = self.minimal_idempotents()?;
        let ranks = idems.iter().map(idempotent_rank).collect::<Result<Vec<_>>>()?;
        let p = Partition::new(ranks)?;
        let _ = self.partition.set(p.clone());
        Ok(p)
    }

    /// True iff `E` is a field: it has a primitive element whose minimal
    /// polynomial is irreducible over the base.
    pub fn is_subfield(&self) -> Result<bool> {
        let a = match self.primitive.get() {
            Some(a) => a.clone(),
            None => match self.search_primitive()? {
                Some(a) => {
                    let _ = self.primitive.set(a.clone());
                    a
                }
                // every finite field extension has a primitive element
                None => return Ok(false),
            },
        };
        is_irreducible(&a.min_poly())
    }
}

fn split_by(a: &Element) -> Result<(Field, Vec<Element>)> {
    let f = a.min_poly();
    let (ext, roots) = splitting_extension(&f)?;
    let alg = a.algebra().base_change(&ext)?;
    let ak = a.base_change(&alg)?;
    Ok((ext, lagrange_idempotents(&ak, &roots)?))
}

/// Orbits of the Galois generator of `K / over` on a set of idempotents
/// (indices into `idems`).
pub fn idempotent_orbits(idems: &[Element], over: &Field) -> Result<Vec<Vec<usize>>> {
    let Some(first) = idems.first() else { return Ok(Vec::new()) };
    let k = first.field().clone();
    let alg = first.algebra().clone();
    let images = idems
        .iter()
        .map(|e| {
            let coords =
                e.coords().iter().map(|c| k.galois_generator(c, over)).collect::<Result<Vec<_>>>()?;
            let img = alg.element(coords)?;
            idems.iter().position(|x| *x == img).ok_or_else(|| {
                Error::Structural("Galois image of an idempotent is not in the set".into())
            })
        })
        .collect::<Result<Vec<usize>>>()?;
    let mut seen = vec![false; idems.len()];
    let mut orbits = Vec::new();
    for start in 0..idems.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut cur = images[start];
        while cur != start {
            seen[cur] = true;
            orbit.push(cur);
            cur = images[cur];
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    Ok(orbits)
}
