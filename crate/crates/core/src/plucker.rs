//! Plücker coordinates of 2-planes in a 4-dimensional space, the wedge
//! pairing on the second exterior power, and lines meeting a quadric.

use std::fmt;

use crate::error::{Error, Result};
use crate::factor::splitting_extension;
use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, Subspace};
use crate::poly::Poly;

/// Index pairs in coordinate order 12, 13, 14, 23, 24, 34 (zero based).
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pair_index(i: usize, j: usize) -> usize {
    PAIRS.iter().position(|&p| p == (i, j)).expect("i < j < 4")
}

/// Scale so that the first nonzero entry is 1. `None` for the zero vector.
pub fn normalize_projective(f: &Field, v: &[Scalar]) -> Option<Vec<Scalar>> {
    let lead = v.iter().find(|x| !f.is_zero(x))?;
    let inv = f.inv(lead).expect("nonzero");
    Some(v.iter().map(|x| f.mul(x, &inv)).collect())
}

/// A point of P^5 in Plücker coordinates, first nonzero coordinate 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PluckerPoint {
    field: Field,
    coords: Vec<Scalar>,
}

impl fmt::Debug for PluckerPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "PluckerPoint({})", cs.join(", "))
    }
}

impl PluckerPoint {
    pub fn new(field: &Field, coords: Vec<Scalar>) -> Result<PluckerPoint> {
        if coords.len() != 6 {
            return Err(Error::invalid(format!("expected 6 coordinates, got {}", coords.len())));
        }
        if let Some(bad) = coords.iter().find(|c| !field.contains(c)) {
            return Err(Error::invalid(format!("coordinate {bad} is not in {field}")));
        }
        let coords = normalize_projective(field, &coords)
            .ok_or_else(|| Error::invalid("all Plücker coordinates are zero"))?;
        Ok(PluckerPoint { field: field.clone(), coords })
    }

    pub fn from_i64s(field: &Field, coords: &[i64]) -> Result<PluckerPoint> {
        PluckerPoint::new(field, coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// `p12 p34 - p13 p24 + p14 p23`
    pub fn relation(&self) -> Scalar {
        plucker_relation(&self.field, &self.coords)
    }

    pub fn is_decomposable(&self) -> bool {
        self.field.is_zero(&self.relation())
    }
}

pub fn plucker_relation(f: &Field, p: &[Scalar]) -> Scalar {
    let a = f.mul(&p[0], &p[5]);
    let b = f.mul(&p[1], &p[4]);
    let c = f.mul(&p[2], &p[3]);
    f.add(&f.sub(&a, &b), &c)
}

/// Coefficient of `e1^e2^e3^e4` in `w1 ^ w2` for bivectors in Plücker
/// coordinates.
pub fn wedge_form(f: &Field, w1: &[Scalar], w2: &[Scalar]) -> Result<Scalar> {
    if w1.len() != 6 || w2.len() != 6 {
        return Err(Error::invalid("bivectors need 6 coordinates"));
    }
    let t = |i: usize, j: usize| f.add(&f.mul(&w1[i], &w2[j]), &f.mul(&w1[j], &w2[i]));
    Ok(f.add(&f.sub(&t(0, 5), &t(1, 4)), &t(2, 3)))
}

/// The six 2x2 minors of the basis of a 2-plane in `F^4`.
pub fn plucker_embed(w: &Subspace) -> Result<PluckerPoint> {
    if w.ambient() != 4 || w.dim() != 2 {
        return Err(Error::invalid(format!(
            "expected a 2-plane in a 4-dimensional space, got dimension {} in {}",
            w.dim(),
            w.ambient()
        )));
    }
    let f = w.field();
    let (u, v) = (&w.basis()[0], &w.basis()[1]);
    let coords = PAIRS
        .iter()
        .map(|&(i, j)| f.sub(&f.mul(&u[i], &v[j]), &f.mul(&u[j], &v[i])))
        .collect();
    PluckerPoint::new(f, coords)
}

/// The 2-plane with the given Plücker coordinates, spanned by the
/// contractions of the bivector with the coordinate covectors.
pub fn plucker_inverse(p: &PluckerPoint) -> Result<Subspace> {
    let f = p.field();
    let rel = p.relation();
    if !f.is_zero(&rel) {
        return Err(Error::NotDecomposable(rel.to_string()));
    }
    let entry = |i: usize, j: usize| -> Scalar {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => p.coords[pair_index(i, j)].clone(),
            std::cmp::Ordering::Greater => f.neg(&p.coords[pair_index(j, i)]),
            std::cmp::Ordering::Equal => f.zero(),
        }
    };
    let rows: Vec<Vec<Scalar>> = (0..4).map(|k| (0..4).map(|j| entry(k, j)).collect()).collect();
    let w = Subspace::span(f, 4, &rows);
    debug_assert_eq!(w.dim(), 2);
    Ok(w)
}

/// Matrix of the induced action of `g` on the second exterior power, in the
/// Plücker coordinate order.
pub fn wedge2_matrix(g: &Matrix) -> Result<Matrix> {
    if g.shape() != (4, 4) {
        return Err(Error::invalid("expected a 4x4 matrix"));
    }
    let f = g.field();
    let mut out = Matrix::zeros(f, 6, 6);
    for (col, &(i, j)) in PAIRS.iter().enumerate() {
        for (row, &(k, l)) in PAIRS.iter().enumerate() {
            let minor =
                f.sub(&f.mul(g.get(k, i), g.get(l, j)), &f.mul(g.get(l, i), g.get(k, j)));
            out.set(row, col, minor);
        }
    }
    Ok(out)
}

/// A quadratic form `q(x) = x^T G x` with symmetric Gram matrix `G`, over a
/// field of characteristic other than 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpace {
    gram: Matrix,
}

impl QuadraticSpace {
    pub fn new(gram: Matrix) -> Result<QuadraticSpace> {
        let f = gram.field();
        if f.characteristic() == 2 {
            return Err(Error::Characteristic2);
        }
        let (r, c) = gram.shape();
        if r != c || r == 0 {
            return Err(Error::invalid("Gram matrix must be square and nonempty"));
        }
        if gram.transpose() != gram {
            return Err(Error::invalid("Gram matrix is not symmetric"));
        }
        Ok(QuadraticSpace { gram })
    }

    /// `x1 x4 - x2 x3` on `F^4`.
    pub fn split4(f: &Field) -> Result<QuadraticSpace> {
        if f.characteristic() == 2 {
            return Err(Error::Characteristic2);
        }
        let half = f.inv(&f.from_i64(2)).expect("odd characteristic");
        let mut g = Matrix::zeros(f, 4, 4);
        for (i, j, s) in [(0, 3, half.clone()), (1, 2, f.neg(&half))] {
            g.set(i, j, s.clone());
            g.set(j, i, s);
        }
        QuadraticSpace::new(g)
    }

    /// `x1^2 + ... + xn^2`.
    pub fn sum_of_squares(f: &Field, n: usize) -> Result<QuadraticSpace> {
        QuadraticSpace::new(Matrix::identity(f, n))
    }

    /// The wedge pairing on the second exterior power of `F^4`, whose
    /// quadric is the image of the Plücker embedding.
    pub fn wedge_space(f: &Field) -> Result<QuadraticSpace> {
        let mut g = Matrix::zeros(f, 6, 6);
        for (i, j, s) in [(0, 5, f.one()), (1, 4, f.from_i64(-1)), (2, 3, f.one())] {
            g.set(i, j, s.clone());
            g.set(j, i, s);
        }
        QuadraticSpace::new(g)
    }

    pub fn field(&self) -> &Field {
        self.gram.field()
    }

    pub fn dim(&self) -> usize {
        self.gram.shape().0
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.field().is_zero(&self.gram.det())
    }

    /// `x^T G y`
    pub fn bilinear(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let f = self.field();
        let n = self.dim();
        let mut acc = f.zero();
        for i in 0..n {
            for j in 0..n {
                let g = self.gram.get(i, j);
                if !f.is_zero(g) {
                    acc = f.add(&acc, &f.mul(g, &f.mul(&x[i], &y[j])));
                }
            }
        }
        acc
    }

    pub fn value(&self, x: &[Scalar]) -> Scalar {
        self.bilinear(x, x)
    }
}

/// How a line meets the quadric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairKind {
    /// Two distinct points, possibly conjugate.
    Secant,
    /// A double point.
    Tangent,
    /// The line lies on the quadric.
    Contained,
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairKind::Secant => "secant",
            PairKind::Tangent => "tangent",
            PairKind::Contained => "contained",
        })
    }
}

/// An unordered pair of points on a quadric, stored as the line through
/// them and the restricted binary form `c0 s^2 + c1 s t + c2 t^2` on the
/// line's canonical basis, scaled so that its first nonzero coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointPairOnQuadric {
    plane: Subspace,
    form: [Scalar; 3],
    kind: PairKind,
}

impl PointPairOnQuadric {
    /// The pair through two given points of the quadric. Points may have
    /// coordinates in an extension field as long as the line they span is
    /// defined over the form's field.
    pub fn from_points(qs: &QuadraticSpace, p1: &[Scalar], p2: &[Scalar], over: &Field) -> Result<PointPairOnQuadric> {
        let f = qs.field();
        let n = qs.dim();
        if p1.len() != n || p2.len() != n {
            return Err(Error::invalid("point dimension does not match the quadratic space"));
        }
        let qk = qs.base_change(over)?;
        for p in [p1, p2] {
            if !over.is_zero(&qk.value(p)) {
                return Err(Error::invalid("point is not on the quadric"));
            }
        }
        let span = Subspace::span(over, n, &[p1.to_vec(), p2.to_vec()]);
        if span.dim() != 2 {
            return Err(Error::invalid("points are not distinct"));
        }
        let plane = span
            .descend(f)
            .ok_or_else(|| Error::invalid("the line through the points is not defined over the base field"))?;
        line_quadric_intersect(&plane, qs)
    }

    pub fn plane(&self) -> &Subspace {
        &self.plane
    }

    pub fn form(&self) -> &[Scalar; 3] {
        &self.form
    }

    pub fn kind(&self) -> PairKind {
        self.kind
    }

    /// The intersection points (projectively normalized, sorted) over a
    /// splitting field of the binary form. A tangent line gives one point.
    pub fn points(&self) -> Result<(Field, Vec<Vec<Scalar>>)> {
        let f = self.plane.field();
        if self.kind == PairKind::Contained {
            return Err(Error::Boundary("line lies on the quadric".into()));
        }
        let [c0, c1, c2] = &self.form;
        let (w1, w2) = (&self.plane.basis()[0], &self.plane.basis()[1]);
        // (s, t) coordinates of the zeros of the form
        let (k, st): (Field, Vec<(Scalar, Scalar)>) = if f.is_zero(c0) {
            // t (c1 s + c2 t)
            let mut st = vec![(f.one(), f.zero())];
            if !f.is_zero(c1) {
                st.push((f.neg(c2), c1.clone()));
            }
            (f.clone(), st)
        } else {
            let poly = Poly::new(f.clone(), vec![c2.clone(), c1.clone(), c0.clone()]);
            let (k, roots) = splitting_extension(&poly)?;
            (k.clone(), roots.into_iter().map(|s| (s, k.one())).collect())
        };
        let lift = |x: &Scalar| k.embed(x, f).expect("extension of the base field");
        let mut pts: Vec<Vec<Scalar>> = st
            .iter()
            .map(|(s, t)| {
                let v: Vec<Scalar> = w1
                    .iter()
                    .zip(w2)
                    .map(|(a, b)| k.add(&k.mul(s, &lift(a)), &k.mul(t, &lift(b))))
                    .collect();
                normalize_projective(&k, &v).expect("nonzero point")
            })
            .collect();
        pts.sort();
        pts.dedup();
        Ok((k, pts))
    }
}

impl QuadraticSpace {
    /// The same form over an extension field.
    pub fn base_change(&self, target: &Field) -> Result<QuadraticSpace> {
        let f = self.field();
        let n = self.dim();
        let data = self.gram.data().iter().map(|x| target.embed(x, f)).collect::<Result<Vec<_>>>()?;
        Ok(QuadraticSpace { gram: Matrix::new(target, n, n, data) })
    }
}

/// Restrict `q` to the line `W` and classify the intersection.
pub fn line_quadric_intersect(w: &Subspace, qs: &QuadraticSpace) -> Result<PointPairOnQuadric> {
    let f = qs.field();
    if w.field() != f {
        return Err(Error::FieldMismatch(format!("line over {}, form over {f}", w.field())));
    }
    if w.dim() != 2 || w.ambient() != qs.dim() {
        return Err(Error::invalid(format!(
            "expected a 2-plane in a {}-dimensional space",
            qs.dim()
        )));
    }
    if !qs.is_nondegenerate() {
        return Err(Error::invalid("quadratic form is degenerate"));
    }
    let (w1, w2) = (&w.basis()[0], &w.basis()[1]);
    let raw = vec![qs.value(w1), f.add(&qs.bilinear(w1, w2), &qs.bilinear(w2, w1)), qs.value(w2)];
    let (form, kind) = match normalize_projective(f, &raw) {
        None => ([f.zero(), f.zero(), f.zero()], PairKind::Contained),
        Some(c) => {
            let disc = f.sub(&f.mul(&c[1], &c[1]), &f.mul(&f.from_i64(4), &f.mul(&c[0], &c[2])));
            let kind = if f.is_zero(&disc) { PairKind::Tangent } else { PairKind::Secant };
            ([c[0].clone(), c[1].clone(), c[2].clone()], kind)
        }
    };
    Ok(PointPairOnQuadric { plane: w.clone(), form, kind })
}

/// The line through a secant pair, recovered from its two points over the
/// splitting field and descended to the base field.
pub fn pair_to_line(pp: &PointPairOnQuadric) -> Result<Subspace> {
    if pp.kind != PairKind::Secant {
        return Err(Error::Boundary(format!("{} line does not determine two points", pp.kind)));
    }
    let (k, pts) = pp.points()?;
    if pts.len() != 2 {
        return Err(Error::Boundary("expected two distinct points".into()));
    }
    let span = Subspace::span(&k, pp.plane.ambient(), &pts);
    span.descend(pp.plane.field())
        .ok_or_else(|| Error::Structural("span of a conjugate pair did not descend".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn plane(f: &Field, rows: &[[i64; 4]]) -> Subspace {
        let rows: Vec<Vec<Scalar>> =
            rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
        Subspace::span(f, 4, &rows)
    }

    fn bivector(f: &Field, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| f.from_i64(x)).collect()
    }

    #[test]
    fn embed_examples() {
        let f = q();
        let e12 = plane(&f, &[[1, 0, 0, 0], [0, 1, 0, 0]]);
        assert_eq!(plucker_embed(&e12).unwrap(), PluckerPoint::from_i64s(&f, &[1, 0, 0, 0, 0, 0]).unwrap());
        let w = plane(&f, &[[1, 0, 1, 0], [0, 1, 0, 1]]);
        let p = plucker_embed(&w).unwrap();
        assert_eq!(p, PluckerPoint::from_i64s(&f, &[1, 0, 1, -1, 0, 1]).unwrap());
        assert!(p.is_decomposable());
        let e34 = plane(&f, &[[0, 0, 1, 0], [0, 0, 0, 1]]);
        assert_eq!(plucker_embed(&e34).unwrap().coords(), bivector(&f, &[0, 0, 0, 0, 0, 1]).as_slice());
        assert!(plucker_embed(&plane(&f, &[[1, 0, 0, 0]])).is_err());
    }

    #[test]
    fn embedding_ignores_basis_choice() {
        let f = q();
        // the same plane given by a different basis before reduction
        let a = plucker_embed(&plane(&f, &[[1, 2, 3, 4], [0, 1, -1, 2]])).unwrap();
        let b = plucker_embed(&plane(&f, &[[1, 3, 2, 6], [2, 5, 5, 10]])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wedge_examples() {
        let f = q();
        let e12 = bivector(&f, &[1, 0, 0, 0, 0, 0]);
        let e34 = bivector(&f, &[0, 0, 0, 0, 0, 1]);
        let e13 = bivector(&f, &[0, 1, 0, 0, 0, 0]);
        assert_eq!(wedge_form(&f, &e12, &e34).unwrap(), f.one());
        assert_eq!(wedge_form(&f, &e12, &e13).unwrap(), f.zero());
        let w = bivector(&f, &[1, 0, 0, 0, 0, 1]);
        assert_eq!(wedge_form(&f, &w, &w).unwrap(), f.from_i64(2));
        let ws = QuadraticSpace::wedge_space(&f).unwrap();
        assert_eq!(ws.value(&w), f.from_i64(2));
    }

    #[test]
    fn inverse_examples() {
        let f = q();
        let p = PluckerPoint::from_i64s(&f, &[1, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(plucker_inverse(&p).unwrap(), plane(&f, &[[1, 0, 0, 0], [0, 1, 0, 0]]));
        let p = PluckerPoint::from_i64s(&f, &[0, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(plucker_inverse(&p).unwrap(), plane(&f, &[[0, 0, 1, 0], [0, 0, 0, 1]]));
        let p = PluckerPoint::from_i64s(&f, &[1, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(plucker_inverse(&p), Err(Error::NotDecomposable("1/1".into())));
        let w = plane(&f, &[[1, 0, 1, 0], [0, 1, 0, 1]]);
        assert_eq!(plucker_inverse(&plucker_embed(&w).unwrap()).unwrap(), w);
    }

    #[test]
    fn wedge2_scales_form_by_determinant() {
        let f = q();
        let g = Matrix::from_i64s(&f, 4, 4, &[1, 2, 0, 1, 0, 1, 3, 0, 2, 0, 1, 1, 1, 1, 0, 2]);
        let h = wedge2_matrix(&g).unwrap();
        let x = bivector(&f, &[1, 2, -1, 0, 3, 1]);
        let y = bivector(&f, &[0, 1, 1, 2, -2, 5]);
        let lhs = wedge_form(&f, &h.mul_vec(&x), &h.mul_vec(&y)).unwrap();
        let rhs = f.mul(&g.det(), &wedge_form(&f, &x, &y).unwrap());
        assert_eq!(lhs, rhs);
        // and it sends decomposable points to the embedding of the image plane
        let w = plane(&f, &[[1, 0, 1, 0], [0, 1, 0, 1]]);
        let image: Vec<Vec<Scalar>> = w.basis().iter().map(|v| g.mul_vec(v)).collect();
        let moved = PluckerPoint::new(&f, h.mul_vec(plucker_embed(&w).unwrap().coords())).unwrap();
        assert_eq!(moved, plucker_embed(&Subspace::span(&f, 4, &image)).unwrap());
    }

    #[test]
    fn intersect_examples() {
        let f = q();
        let split = QuadraticSpace::split4(&f).unwrap();
        let w = plane(&f, &[[1, 0, 0, 0], [0, 0, 0, 1]]);
        let pp = line_quadric_intersect(&w, &split).unwrap();
        assert_eq!(pp.kind(), PairKind::Secant);
        assert_eq!(pp.form().to_vec(), bivector(&f, &[0, 1, 0]));
        let (k, pts) = pp.points().unwrap();
        assert!(k.is_rationals());
        assert_eq!(pts, vec![bivector(&f, &[0, 0, 0, 1]), bivector(&f, &[1, 0, 0, 0])]);
        assert_eq!(pair_to_line(&pp).unwrap(), w);

        let t = plane(&f, &[[1, 0, 0, 0], [0, 1, 1, 0]]);
        let pp = line_quadric_intersect(&t, &split).unwrap();
        assert_eq!(pp.kind(), PairKind::Tangent);
        assert_eq!(pp.form().to_vec(), bivector(&f, &[0, 0, 1]));
        assert_eq!(pp.points().unwrap().1, vec![bivector(&f, &[1, 0, 0, 0])]);
        assert!(matches!(pair_to_line(&pp), Err(Error::Boundary(_))));

        let c = plane(&f, &[[1, 0, 0, 0], [0, 1, 0, 0]]);
        assert_eq!(line_quadric_intersect(&c, &split).unwrap().kind(), PairKind::Contained);

        let sos = QuadraticSpace::sum_of_squares(&f, 4).unwrap();
        let pp = line_quadric_intersect(&c, &sos).unwrap();
        assert_eq!(pp.form().to_vec(), bivector(&f, &[1, 0, 1]));
        let (k, pts) = pp.points().unwrap();
        assert_eq!(k.modulus().unwrap(), Poly::from_i64s(&f, &[1, 0, 1]));
        assert_eq!(pts.len(), 2);
        assert_eq!(pair_to_line(&pp).unwrap(), c);
    }

    #[test]
    fn pair_from_points() {
        let f = q();
        let split = QuadraticSpace::split4(&f).unwrap();
        let pp = PointPairOnQuadric::from_points(
            &split,
            &bivector(&f, &[1, 0, 0, 0]),
            &bivector(&f, &[0, 0, 0, 1]),
            &f,
        )
        .unwrap();
        assert_eq!(pair_to_line(&pp).unwrap(), plane(&f, &[[1, 0, 0, 0], [0, 0, 0, 1]]));
        assert!(PointPairOnQuadric::from_points(&split, &bivector(&f, &[1, 0, 0, 1]), &bivector(&f, &[0, 0, 0, 1]), &f).is_err());

        // the conjugate pair (1, ±i, 0, 0) on the sum of squares
        let sos = QuadraticSpace::sum_of_squares(&f, 4).unwrap();
        let k = Field::extension(&f, &Poly::from_i64s(&f, &[1, 0, 1]), "i").unwrap();
        let i = k.generator().unwrap();
        let p1 = vec![k.one(), i.clone(), k.zero(), k.zero()];
        let p2 = vec![k.one(), k.neg(&i), k.zero(), k.zero()];
        let pp = PointPairOnQuadric::from_points(&sos, &p1, &p2, &k).unwrap();
        assert_eq!(pair_to_line(&pp).unwrap(), plane(&f, &[[1, 0, 0, 0], [0, 1, 0, 0]]));
    }

    #[test]
    fn rejects_characteristic_two() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(QuadraticSpace::split4(&f2), Err(Error::Characteristic2));
        assert_eq!(QuadraticSpace::new(Matrix::identity(&f2, 4)), Err(Error::Characteristic2));
    }
}
