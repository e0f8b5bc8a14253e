//! Finite-dimensional unital associative algebras given by structure
//! constants, and their elements.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{solve_affine, AffineSolution, Matrix};
use crate::poly::Poly;

/// How the algebra was constructed; used for descriptors and by the
/// enumeration oracle, which needs the matrix model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    Matrix { n: usize },
    Quaternion { a: Scalar, b: Scalar },
    StructureConstants,
}

struct AlgebraData {
    field: Field,
    dim: usize,
    /// Sparse products: `table[i * dim + j]` lists `(k, c)` with
    /// `b_i b_j = sum c b_k`.
    table: Vec<Vec<(usize, Scalar)>>,
    one: Vec<Scalar>,
    degree: Option<usize>,
    kind: AlgebraKind,
}

/// A unital associative algebra over a field. Cloning is cheap.
#[derive(Clone)]
pub struct Algebra(Arc<AlgebraData>);

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            AlgebraKind::Matrix { n } => write!(f, "M_{n}({})", self.0.field),
            AlgebraKind::Quaternion { a, b } => write!(f, "({a}, {b})_{}", self.0.field),
            AlgebraKind::StructureConstants => {
                write!(f, "Algebra(dim {} over {})", self.0.dim, self.0.field)
            }
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field
                && self.0.dim == other.0.dim
                && self.0.table == other.0.table
                && self.0.one == other.0.one)
    }
}

impl Eq for Algebra {}

impl Algebra {
    /// `M_n(F)` with basis `e_ij` in row-major order; degree `n`.
    pub fn matrix(n: usize, field: &Field) -> Result<Algebra> {
        if n == 0 {
            return Err(Error::invalid("matrix algebra needs n >= 1"));
        }
        let dim = n * n;
        let mut table = vec![Vec::new(); dim * dim];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    // e_ij e_jl = e_il
                    table[(i * n + j) * dim + (j * n + l)].push((i * n + l, field.one()));
                }
            }
        }
        let mut one = vec![field.zero(); dim];
        for i in 0..n {
            one[i * n + i] = field.one();
        }
        Ok(Algebra(Arc::new(AlgebraData {
            field: field.clone(),
            dim,
            table,
            one,
            degree: Some(n),
            kind: AlgebraKind::Matrix { n },
        })))
    }

    /// Quaternion algebra `(a, b)_F` with basis `1, i, j, k`, `i^2 = a`,
    /// `j^2 = b`, `ij = k = -ji`; degree 2.
    pub fn quaternion(a: &Scalar, b: &Scalar, field: &Field) -> Result<Algebra> {
        if field.characteristic() == 2 {
            return Err(Error::Characteristic2);
        }
        if !field.contains(a) || !field.contains(b) {
            return Err(Error::FieldMismatch(format!("quaternion parameters outside {field}")));
        }
        if field.is_zero(a) || field.is_zero(b) {
            return Err(Error::invalid("quaternion parameters must be nonzero"));
        }
        let f = field;
        let ab = f.mul(a, b);
        let entries: [(usize, usize, usize, Scalar); 9] = [
            (1, 1, 0, a.clone()),
            (1, 2, 3, f.one()),
            (1, 3, 2, a.clone()),
            (2, 1, 3, f.neg(&f.one())),
            (2, 2, 0, b.clone()),
            (2, 3, 1, f.neg(b)),
            (3, 1, 2, f.neg(a)),
            (3, 2, 1, b.clone()),
            (3, 3, 0, f.neg(&ab)),
        ];
        let mut table = vec![Vec::new(); 16];
        for x in 0..4 {
            table[x].push((x, f.one()));
            if x > 0 {
                table[x * 4].push((x, f.one()));
            }
        }
        for (i, j, k, c) in entries {
            table[i * 4 + j].push((k, c));
        }
        let mut one = vec![f.zero(); 4];
        one[0] = f.one();
        let alg = Algebra(Arc::new(AlgebraData {
            field: f.clone(),
            dim: 4,
            table,
            one,
            degree: Some(2),
            kind: AlgebraKind::Quaternion { a: a.clone(), b: b.clone() },
        }));
        Ok(alg)
    }

    /// Algebra from a dense table `table[i][j][k]`, checked for
    /// associativity and for the unit. The optional degree certificate must
    /// satisfy `dim = degree^2`.
    pub fn from_structure_constants(
        field: &Field,
        table: &[Vec<Vec<Scalar>>],
        one: &[Scalar],
        degree: Option<usize>,
    ) -> Result<Algebra> {
        let dim = table.len();
        if dim == 0 {
            return Err(Error::invalid("algebra of dimension 0"));
        }
        if one.len() != dim {
            return Err(Error::invalid("unity has the wrong length"));
        }
        let mut sparse = vec![Vec::new(); dim * dim];
        for (i, row) in table.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::invalid("structure constant table is not dim x dim x dim"));
            }
            for (j, prod) in row.iter().enumerate() {
                if prod.len() != dim {
                    return Err(Error::invalid("structure constant table is not dim x dim x dim"));
                }
                for (k, c) in prod.iter().enumerate() {
                    if !field.contains(c) {
                        return Err(Error::FieldMismatch(format!("structure constant outside {field}")));
                    }
                    if !field.is_zero(c) {
                        sparse[i * dim + j].push((k, c.clone()));
                    }
                }
            }
        }
        if let Some(n) = degree {
            if n * n != dim {
                return Err(Error::invalid(format!("degree {n} does not square to dimension {dim}")));
            }
        }
        let alg = Algebra(Arc::new(AlgebraData {
            field: field.clone(),
            dim,
            table: sparse,
            one: one.to_vec(),
            degree,
            kind: AlgebraKind::StructureConstants,
        }));
        alg.check_axioms()?;
        Ok(alg)
    }

    fn check_axioms(&self) -> Result<()> {
        let d = self.dim();
        let basis: Vec<Vec<Scalar>> = (0..d).map(|i| self.basis_vec(i)).collect();
        for x in &basis {
            if self.mul_raw(&self.0.one, x) != *x || self.mul_raw(x, &self.0.one) != *x {
                return Err(Error::Structural("unity is not a two-sided identity".into()));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij = self.mul_raw(&basis[i], &basis[j]);
                for k in 0..d {
                    let jk = self.mul_raw(&basis[j], &basis[k]);
                    if self.mul_raw(&ij, &basis[k]) != self.mul_raw(&basis[i], &jk) {
                        return Err(Error::Structural(format!(
                            "associativity fails on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `A ⊗ K` for an extension `K` of the base field; structure constants
    /// are embedded, so the axioms carry over without re-checking.
    pub fn base_change(&self, target: &Field) -> Result<Algebra> {
        if target == &self.0.field {
            return Ok(self.clone());
        }
        let from = &self.0.field;
        let emb = |c: &Scalar| target.embed(c, from);
        let table = self
            .0
            .table
            .iter()
            .map(|entries| {
                entries.iter().map(|(k, c)| Ok((*k, emb(c)?))).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let one = self.0.one.iter().map(emb).collect::<Result<Vec<_>>>()?;
        let kind = match &self.0.kind {
            AlgebraKind::Quaternion { a, b } => AlgebraKind::Quaternion { a: emb(a)?, b: emb(b)? },
            other => other.clone(),
        };
        Ok(Algebra(Arc::new(AlgebraData {
            field: target.clone(),
            dim: self.0.dim,
            table,
            one,
            degree: self.0.degree,
            kind,
        })))
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.degree
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.0.kind
    }

    /// Dense structure constants `c[i][j][k]`.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<Scalar>>> {
        let d = self.dim();
        let f = self.field();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut v = vec![f.zero(); d];
                        for (k, c) in &self.0.table[i * d + j] {
                            v[*k] = c.clone();
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    }

    pub fn unity_coords(&self) -> &[Scalar] {
        &self.0.one
    }

    pub(crate) fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        let f = self.field();
        let mut v = vec![f.zero(); self.dim()];
        v[i] = f.one();
        v
    }

    /// Product of coordinate vectors.
    pub fn mul_raw(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let d = self.dim();
        let f = self.field();
        let mut out = vec![f.zero(); d];
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if f.is_zero(yj) {
                    continue;
                }
                let xy = f.mul(xi, yj);
                for (k, c) in &self.0.table[i * d + j] {
                    out[*k] = f.add(&out[*k], &f.mul(&xy, c));
                }
            }
        }
        out
    }

    pub fn element(&self, coords: Vec<Scalar>) -> Result<Element> {
        if coords.len() != self.dim() {
            return Err(Error::invalid(format!(
                "element has {} coordinates, algebra has dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        if let Some(bad) = coords.iter().find(|c| !self.field().contains(c)) {
            return Err(Error::FieldMismatch(format!("coordinate {bad} outside {}", self.field())));
        }
        Ok(Element { algebra: self.clone(), coords })
    }

    pub fn element_from_i64s(&self, coords: &[i64]) -> Result<Element> {
        self.element(coords.iter().map(|&c| self.field().from_i64(c)).collect())
    }

    pub fn zero(&self) -> Element {
        Element { algebra: self.clone(), coords: vec![self.field().zero(); self.dim()] }
    }

    pub fn one(&self) -> Element {
        Element { algebra: self.clone(), coords: self.0.one.clone() }
    }

    pub fn basis_element(&self, i: usize) -> Element {
        Element { algebra: self.clone(), coords: self.basis_vec(i) }
    }
}

/// An element of an [`Algebra`], as coordinates in its basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Element {
    algebra: Algebra,
    coords: Vec<Scalar>,
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}] in {:?}", cs.join(", "), self.algebra)
    }
}

impl Element {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn field(&self) -> &Field {
        self.algebra.field()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| self.field().is_zero(c))
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        let f = self.field();
        Element {
            algebra: self.algebra.clone(),
            coords: self.coords.iter().map(|x| f.mul(x, c)).collect(),
        }
    }

    pub fn pow(&self, mut k: u64) -> Element {
        let mut base = self.clone();
        let mut acc = self.algebra.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn is_idempotent(&self) -> bool {
        &(self * self) == self
    }

    /// Matrix of `x -> self * x` in the algebra basis (column `j` is
    /// `self * b_j`).
    pub fn left_mul_matrix(&self) -> Matrix {
        let d = self.algebra.dim();
        let cols: Vec<Vec<Scalar>> =
            (0..d).map(|j| self.algebra.mul_raw(&self.coords, &self.algebra.basis_vec(j))).collect();
        Matrix::from_rows(self.field(), d, &cols).transpose()
    }

    /// Evaluate a polynomial (over this algebra's field) at the element.
    pub fn eval_poly(&self, p: &Poly) -> Element {
        let mut acc = self.algebra.zero();
        for c in p.coeffs().iter().rev() {
            acc = &(&acc * self) + &self.algebra.one().scale(c);
        }
        acc
    }

    /// The element viewed in `A ⊗ K`.
    pub fn base_change(&self, target: &Algebra) -> Result<Element> {
        let from = self.field();
        let coords = self
            .coords
            .iter()
            .map(|c| target.field().embed(c, from))
            .collect::<Result<Vec<_>>>()?;
        target.element(coords)
    }

    /// Minimal polynomial: the first linear dependence among `1, a, a^2, …`.
    pub fn min_poly(&self) -> Poly {
        let f = self.field().clone();
        let d = self.algebra.dim();
        let mut powers = vec![self.algebra.one().coords];
        loop {
            let next = self.algebra.mul_raw(powers.last().expect("nonempty"), &self.coords);
            let k = powers.len();
            let m = Matrix::from_rows(&f, d, &powers).transpose();
            match solve_affine(&m, &next).expect("consistent shapes") {
                AffineSolution::Inconsistent => powers.push(next),
                AffineSolution::Unique(c) | AffineSolution::Family { particular: c, .. } => {
                    let mut coeffs: Vec<Scalar> = c.iter().map(|x| f.neg(x)).collect();
                    coeffs.push(f.one());
                    debug_assert_eq!(coeffs.len(), k + 1);
                    return Poly::new(f, coeffs);
                }
            }
        }
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let f = self.field();
        Element {
            algebra: self.algebra.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| f.add(a, b)).collect(),
        }
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let f = self.field();
        Element {
            algebra: self.algebra.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| f.sub(a, b)).collect(),
        }
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        let f = self.field();
        Element { algebra: self.algebra.clone(), coords: self.coords.iter().map(|a| f.neg(a)).collect() }
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        Element {
            algebra: self.algebra.clone(),
            coords: self.algebra.mul_raw(&self.coords, &rhs.coords),
        }
    }
}
