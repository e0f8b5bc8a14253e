//! Lagrange idempotents, the generator map `psi` with its inverse `phi`, and
//! the correspondence between etale subalgebras and systems of right ideals.

use std::cmp::Reverse;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::etale::EtaleSubalgebra;
use crate::factor::squarefree_test;
use crate::field::{Field, Scalar};
use crate::ideal::{ideal_from_idempotent, RightIdeal};
use crate::linalg::{direct_sum_check, solve_affine, AffineSolution, Matrix, Subspace};
use crate::partition::Partition;

/// `e_i = prod_{j != i} (a - r_j) / (r_i - r_j)`, in the order of `roots`.
pub fn lagrange_idempotents(a: &Element, roots: &[Scalar]) -> Result<Vec<Element>> {
    let f = a.field();
    let mp = a.min_poly();
    let deg = mp.degree().unwrap_or(0);
    if roots.len() != deg {
        return Err(Error::invalid(format!(
            "{} roots given for a minimal polynomial of degree {deg}",
            roots.len()
        )));
    }
    for (i, r) in roots.iter().enumerate() {
        if !f.contains(r) {
            return Err(Error::invalid(format!("root {r} is not in {f}")));
        }
        if roots[..i].contains(r) {
            return Err(Error::invalid(format!("repeated root {r}")));
        }
        if !f.is_zero(&mp.eval(r)) {
            return Err(Error::invalid(format!("{r} is not a root of {mp}")));
        }
    }
    let alg = a.algebra();
    let shifted: Vec<Element> = roots.iter().map(|r| a - &alg.one().scale(r)).collect();
    let mut out = Vec::with_capacity(roots.len());
    for (i, ri) in roots.iter().enumerate() {
        let mut e = alg.one();
        let mut denom = f.one();
        for (j, rj) in roots.iter().enumerate() {
            if i != j {
                e = &e * &shifted[j];
                denom = f.mul(&denom, &f.sub(ri, rj));
            }
        }
        out.push(e.scale(&f.inv(&denom).expect("distinct roots")));
    }
    Ok(out)
}

fn degree_of(alg: &Algebra) -> Result<usize> {
    alg.degree()
        .ok_or_else(|| Error::Structural("the algebra has no degree certificate".into()))
}

/// True iff the minimal polynomial of `a` is squarefree of degree `deg A`.
pub fn in_u(a: &Element) -> Result<bool> {
    let n = degree_of(a.algebra())?;
    let mp = a.min_poly();
    Ok(mp.degree() == Some(n) && squarefree_test(&mp)?)
}

/// The subalgebra generated by `a`, for `a` in the open set `U`.
pub fn psi(a: &Element) -> Result<EtaleSubalgebra> {
    let alg = a.algebra();
    let n = degree_of(alg)?;
    if !in_u(a)? {
        return Err(Error::NotInU(format!(
            "minimal polynomial {} is not squarefree of degree {n}",
            a.min_poly()
        )));
    }
    let mut powers = Vec::with_capacity(n);
    let mut p = alg.one();
    for _ in 0..n {
        powers.push(p.coords().to_vec());
        p = &p * a;
    }
    let e = EtaleSubalgebra::new_unchecked(alg, Subspace::span(alg.field(), alg.dim(), &powers));
    e.set_primitive(a.clone());
    e.set_partition(Partition::ones(n));
    Ok(e)
}

/// Reference data for the inverse of `psi`: a maximal etale subalgebra
/// `E`, a generator `a` of it, and a complement `L` to `E`.
#[derive(Clone, Debug)]
pub struct PsiConfig {
    reference: EtaleSubalgebra,
    generator: Element,
    complement: Subspace,
}

impl PsiConfig {
    pub fn new(reference: EtaleSubalgebra, generator: Element, complement: Subspace) -> Result<PsiConfig> {
        let alg = reference.algebra();
        let n = degree_of(alg)?;
        if reference.dim() != n {
            return Err(Error::invalid(format!(
                "reference subalgebra has dimension {}, expected {n}",
                reference.dim()
            )));
        }
        if !reference.contains(&generator) || psi(&generator)? != reference {
            return Err(Error::invalid("generator does not generate the reference subalgebra"));
        }
        if complement.ambient() != alg.dim()
            || complement.dim() != alg.dim() - n
            || complement.intersection_dim(reference.space()) != 0
        {
            return Err(Error::invalid("complement is not complementary to the reference subalgebra"));
        }
        Ok(PsiConfig { reference, generator, complement })
    }

    /// `L` spanned by the standard basis vectors at the non-pivot columns of
    /// the reference subalgebra.
    pub fn standard(reference: EtaleSubalgebra, generator: Element) -> Result<PsiConfig> {
        let alg = reference.algebra();
        let f = alg.field();
        let pivots = reference.space().pivots();
        let rows: Vec<Vec<Scalar>> = (0..alg.dim())
            .filter(|k| !pivots.contains(k))
            .map(|k| {
                let mut v = vec![f.zero(); alg.dim()];
                v[k] = f.one();
                v
            })
            .collect();
        let complement = Subspace::span(f, alg.dim(), &rows);
        PsiConfig::new(reference, generator, complement)
    }

    pub fn reference(&self) -> &EtaleSubalgebra {
        &self.reference
    }

    pub fn generator(&self) -> &Element {
        &self.generator
    }

    pub fn complement(&self) -> &Subspace {
        &self.complement
    }

    /// True iff `b - a` lies in `L`.
    pub fn in_affine_slice(&self, b: &Element) -> bool {
        self.complement.contains((b - &self.generator).coords())
    }
}

/// The unique `b` in `E'` with `b - a` in `L`.
pub fn phi(e: &EtaleSubalgebra, cfg: &PsiConfig) -> Result<Element> {
    let alg = cfg.reference.algebra();
    if e.algebra() != alg {
        return Err(Error::invalid("subalgebra and configuration live in different algebras"));
    }
    let n = degree_of(alg)?;
    if e.dim() != n {
        return Err(Error::invalid(format!("subalgebra has dimension {}, expected {n}", e.dim())));
    }
    let f = alg.field();
    let d = alg.dim();
    let eb = e.space().basis();
    let lb = cfg.complement.basis();
    // columns: basis of E' then minus basis of L
    let mut m = Matrix::zeros(f, d, eb.len() + lb.len());
    for (c, v) in eb.iter().enumerate() {
        for r in 0..d {
            m.set(r, c, v[r].clone());
        }
    }
    for (c, v) in lb.iter().enumerate() {
        for r in 0..d {
            m.set(r, eb.len() + c, f.neg(&v[r]));
        }
    }
    let x = match solve_affine(&m, cfg.generator.coords())? {
        AffineSolution::Unique(x) => x,
        _ => {
            return Err(Error::Transversality(
                "subalgebra meets the complement nontrivially".into(),
            ))
        }
    };
    let mut b = vec![f.zero(); d];
    for (c, v) in x.iter().zip(eb) {
        for (acc, t) in b.iter_mut().zip(v) {
            *acc = f.add(acc, &f.mul(c, t));
        }
    }
    let b = alg.element(b)?;
    if !in_u(&b)? {
        return Err(Error::Boundary(format!(
            "intersection point has minimal polynomial {}, outside U",
            b.min_poly()
        )));
    }
    Ok(b)
}

/// A decomposition `A = I_1 + ... + I_l` into right ideals with
/// `1 = e_1 + ... + e_l`, `e_i` in `I_i` and `I_i = e_i A`. Stored in
/// canonical order: reduced rank descending, then by RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSystem {
    algebra: Algebra,
    ideals: Vec<RightIdeal>,
    idempotents: Vec<Element>,
}

impl IdealSystem {
    /// From a complete set of pairwise orthogonal idempotents.
    pub fn from_idempotents(algebra: &Algebra, idempotents: Vec<Element>) -> Result<IdealSystem> {
        let mut total = algebra.zero();
        for (i, e) in idempotents.iter().enumerate() {
            if e.algebra() != algebra {
                return Err(Error::invalid("idempotent from a different algebra"));
            }
            if !e.is_idempotent() || e.is_zero() {
                return Err(Error::invalid(format!("element {i} is not a nonzero idempotent")));
            }
            for g in &idempotents[..i] {
                if !(e * g).is_zero() || !(g * e).is_zero() {
                    return Err(Error::invalid("idempotents are not orthogonal"));
                }
            }
            total = &total + e;
        }
        if total != algebra.one() {
            return Err(Error::invalid("idempotents do not sum to 1"));
        }
        let ideals = idempotents.iter().map(ideal_from_idempotent).collect::<Result<Vec<_>>>()?;
        IdealSystem::canonical(algebra, ideals, idempotents)
    }

    /// From right ideals whose direct sum is `A`; the idempotents come from
    /// decomposing 1.
    pub fn from_ideals(algebra: &Algebra, ideals: Vec<RightIdeal>) -> Result<IdealSystem> {
        let spaces: Vec<Subspace> = ideals.iter().map(|i| i.space().clone()).collect();
        if ideals.iter().any(|i| i.algebra() != algebra) {
            return Err(Error::invalid("ideal from a different algebra"));
        }
        if !direct_sum_check(&spaces, algebra.dim()) {
            return Err(Error::Structural("ideals do not form a direct sum equal to A".into()));
        }
        let f = algebra.field();
        let d = algebra.dim();
        let cols: Vec<&Vec<Scalar>> = spaces.iter().flat_map(|s| s.basis()).collect();
        let mut m = Matrix::zeros(f, d, cols.len());
        for (c, v) in cols.iter().enumerate() {
            for r in 0..d {
                m.set(r, c, v[r].clone());
            }
        }
        let AffineSolution::Unique(x) = solve_affine(&m, algebra.unity_coords())? else {
            return Err(Error::Structural("unity has no unique decomposition".into()));
        };
        let mut idempotents = Vec::with_capacity(ideals.len());
        let mut offset = 0;
        for s in &spaces {
            let mut e = vec![f.zero(); d];
            for (c, v) in x[offset..offset + s.dim()].iter().zip(s.basis()) {
                for (acc, t) in e.iter_mut().zip(v) {
                    *acc = f.add(acc, &f.mul(c, t));
                }
            }
            offset += s.dim();
            idempotents.push(algebra.element(e)?);
        }
        for (e, i) in idempotents.iter().zip(&ideals) {
            if ideal_from_idempotent(e)? != *i {
                return Err(Error::Structural("ideal is not generated by its idempotent".into()));
            }
        }
        IdealSystem::canonical(algebra, ideals, idempotents)
    }

    fn canonical(
        algebra: &Algebra,
        ideals: Vec<RightIdeal>,
        idempotents: Vec<Element>,
    ) -> Result<IdealSystem> {
        let mut pairs = ideals
            .into_iter()
            .zip(idempotents)
            .map(|(i, e)| Ok((i.reduced_rank()?, i, e)))
            .collect::<Result<Vec<_>>>()?;
        pairs.sort_by(|a, b| (Reverse(a.0), a.1.space()).cmp(&(Reverse(b.0), b.1.space())));
        let (ideals, idempotents) = pairs.into_iter().map(|(_, i, e)| (i, e)).unzip();
        Ok(IdealSystem { algebra: algebra.clone(), ideals, idempotents })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn field(&self) -> &Field {
        self.algebra.field()
    }

    pub fn ideals(&self) -> &[RightIdeal] {
        &self.ideals
    }

    pub fn idempotents(&self) -> &[Element] {
        &self.idempotents
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.ideals.iter().map(|i| i.reduced_rank().expect("checked at construction")).collect()
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.ranks()).expect("ranks are positive")
    }

    /// Image under the generator of `Gal(K / over)` applied entrywise.
    pub fn galois_image(&self, over: &Field) -> Result<IdealSystem> {
        let k = self.field();
        let idempotents = self
            .idempotents
            .iter()
            .map(|e| {
                let c = e.coords().iter().map(|x| k.galois_generator(x, over)).collect::<Result<_>>()?;
                self.algebra.element(c)
            })
            .collect::<Result<Vec<_>>>()?;
        IdealSystem::from_idempotents(&self.algebra, idempotents)
    }
}

/// `E = e_1 F + ... + e_l F`, with the type read off the ranks.
pub fn subalgebra_from_ideal_system(sys: &IdealSystem) -> Result<EtaleSubalgebra> {
    let rows: Vec<Vec<Scalar>> = sys.idempotents.iter().map(|e| e.coords().to_vec()).collect();
    let alg = &sys.algebra;
    let e = EtaleSubalgebra::new(alg, Subspace::span(alg.field(), alg.dim(), &rows))?;
    e.set_partition(sys.partition());
    Ok(e)
}

/// The system `(e_i A)` over a splitting field of `E`.
pub fn ideal_system_from_subalgebra(e: &EtaleSubalgebra) -> Result<IdealSystem> {
    let (_, idems) = e.minimal_idempotents()?;
    let alg = idems[0].algebra().clone();
    IdealSystem::from_idempotents(&alg, idems)
}

/// Same as [`ideal_system_from_subalgebra`] over a prescribed splitting
/// algebra `A ⊗ K`.
pub fn ideal_system_from_subalgebra_over(e: &EtaleSubalgebra, target: &Algebra) -> Result<IdealSystem> {
    let idems = e.minimal_idempotents_over(target)?;
    IdealSystem::from_idempotents(target, idems)
}

pub fn underlying_subspace(e: &EtaleSubalgebra) -> Subspace {
    e.space().clone()
}
