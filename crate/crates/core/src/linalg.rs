//! Dense exact linear algebra: row reduction, affine solving, and canonical
//! subspaces.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::Poly;

/// Row-major matrix over a [`Field`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix::new(field, rows, cols, vec![field.zero(); rows * cols])
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<Scalar>]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length");
            data.extend(r.iter().cloned());
        }
        Matrix::new(field, rows.len(), cols, data)
    }

    pub fn from_i64s(field: &Field, rows: usize, cols: usize, vals: &[i64]) -> Matrix {
        Matrix::new(field, rows, cols, vals.iter().map(|&v| field.from_i64(v)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shapes");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "matrix-vector shapes");
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form and its pivot columns. Zero rows are dropped.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut rows = self.rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
                continue;
            };
            rows.swap(r, p);
            let inv = f.inv(&rows[r][c]).expect("nonzero pivot");
            for x in rows[r].iter_mut() {
                *x = f.mul(x, &inv);
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || f.is_zero(&row[c]) {
                    continue;
                }
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        (Matrix::from_rows(f, self.cols, &rows), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let f = &self.field;
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(red.get(i, fc));
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let f = &self.field;
        let mut m = self.rows();
        let n = self.rows;
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !f.is_zero(&m[i][c])) else {
                return f.zero();
            };
            if p != c {
                m.swap(p, c);
                det = f.neg(&det);
            }
            det = f.mul(&det, &m[c][c]);
            let inv = f.inv(&m[c][c]).expect("nonzero pivot");
            for i in c + 1..n {
                if f.is_zero(&m[i][c]) {
                    continue;
                }
                let factor = f.mul(&m[i][c], &inv);
                for j in c..n {
                    let t = f.mul(&factor, &m[c][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(x I - M)` via reduction to upper
    /// Hessenberg form; valid in every characteristic.
    pub fn charpoly(&self) -> Poly {
        assert_eq!(self.rows, self.cols, "characteristic polynomial of a non-square matrix");
        let f = &self.field;
        let n = self.rows;
        let mut h = self.rows();
        // similarity transforms to Hessenberg form
        for m in 1..n.saturating_sub(1) {
            let Some(p) = (m..n).find(|&i| !f.is_zero(&h[i][m - 1])) else {
                continue;
            };
            if p != m {
                h.swap(p, m);
                for row in h.iter_mut() {
                    row.swap(p, m);
                }
            }
            let inv = f.inv(&h[m][m - 1]).expect("nonzero pivot");
            for i in m + 1..n {
                let u = f.mul(&h[i][m - 1], &inv);
                if f.is_zero(&u) {
                    continue;
                }
                for j in 0..n {
                    let t = f.mul(&u, &h[m][j]);
                    h[i][j] = f.sub(&h[i][j], &t);
                }
                for row in h.iter_mut() {
                    let t = f.mul(&u, &row[i]);
                    row[m] = f.add(&row[m], &t);
                }
            }
        }
        // p_k = (x - h_kk) p_{k-1} - sum_i h_ik prod_{j=i+1..k} h_{j,j-1} p_{i-1}
        let mut ps = vec![Poly::one(f)];
        for k in 0..n {
            let x_minus = Poly::new(f.clone(), vec![f.neg(&h[k][k]), f.one()]);
            let mut pk = x_minus.mul(&ps[k]);
            let mut prod = f.one();
            for i in (0..k).rev() {
                prod = f.mul(&prod, &h[i + 1][i]);
                let coeff = f.mul(&h[i][k], &prod);
                pk = pk.sub(&ps[i].scale(&coeff));
            }
            ps.push(pk);
        }
        ps.pop().expect("nonempty")
    }
}

/// Outcome of [`solve_affine`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution {
    Unique(Vec<Scalar>),
    /// A particular solution (free variables set to zero) plus a kernel basis.
    Family { particular: Vec<Scalar>, kernel: Vec<Vec<Scalar>> },
    Inconsistent,
}

/// Solve `M x = b` exactly by Gaussian elimination.
pub fn solve_affine(m: &Matrix, b: &[Scalar]) -> Result<AffineSolution> {
    let (rows, cols) = m.shape();
    if b.len() != rows {
        return Err(Error::invalid(format!(
            "right-hand side has length {}, matrix has {rows} rows",
            b.len()
        )));
    }
    let f = m.field();
    let mut aug = Matrix::zeros(f, rows, cols + 1);
    for r in 0..rows {
        for c in 0..cols {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, cols, b[r].clone());
    }
    let (red, pivots) = aug.rref();
    if pivots.last() == Some(&cols) {
        return Ok(AffineSolution::Inconsistent);
    }
    let mut particular = vec![f.zero(); cols];
    for (i, &pc) in pivots.iter().enumerate() {
        particular[pc] = red.get(i, cols).clone();
    }
    let kernel = m.kernel();
    if kernel.is_empty() {
        Ok(AffineSolution::Unique(particular))
    } else {
        Ok(AffineSolution::Family { particular, kernel })
    }
}

/// A linear subspace of `F^ambient`, stored as its RREF basis. Two subspaces
/// are equal exactly when their RREF bases coincide.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "Subspace<{}^{}>{{[{}]}}", self.field, self.ambient, rows.join("], ["))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the RREF basis rows (same field assumed).
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then_with(|| self.basis.cmp(&other.basis))
    }
}

impl Subspace {
    pub fn span(field: &Field, ambient: usize, vectors: &[Vec<Scalar>]) -> Subspace {
        if vectors.is_empty() {
            return Subspace::zero(field, ambient);
        }
        let (red, pivots) = Matrix::from_rows(field, ambient, vectors).rref();
        Subspace { field: field.clone(), ambient, basis: red.rows(), pivots }
    }

    pub fn zero(field: &Field, ambient: usize) -> Subspace {
        Subspace { field: field.clone(), ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &Field, ambient: usize) -> Subspace {
        Subspace::span(field, ambient, &Matrix::identity(field, ambient).rows())
    }

    /// Wrap rows already in RREF (checked).
    pub fn from_rref(field: &Field, ambient: usize, rows: Vec<Vec<Scalar>>) -> Result<Subspace> {
        let s = Subspace::span(field, ambient, &rows);
        if s.basis != rows {
            return Err(Error::invalid("rows are not in reduced row echelon form"));
        }
        Ok(s)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the RREF basis, `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let f = &self.field;
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = vec![f.zero(); self.ambient];
        for (c, row) in coords.iter().zip(&self.basis) {
            if f.is_zero(c) {
                continue;
            }
            for (x, y) in rebuilt.iter_mut().zip(row) {
                *x = f.add(x, &f.mul(c, y));
            }
        }
        (rebuilt == v).then_some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(&self.field, self.ambient, &rows)
    }

    /// Dimension of the intersection, via `dim U + dim W - dim (U + W)`.
    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }

    /// Apply an entrywise map (a field automorphism, an embedding) and
    /// re-canonicalize.
    pub fn map_entries(
        &self,
        target: &Field,
        mut f: impl FnMut(&Scalar) -> Result<Scalar>,
    ) -> Result<Subspace> {
        let rows = self
            .basis
            .iter()
            .map(|r| r.iter().map(&mut f).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span(target, self.ambient, &rows))
    }

    /// The same subspace after extending scalars.
    pub fn base_change(&self, target: &Field) -> Result<Subspace> {
        let from = self.field.clone();
        self.map_entries(target, |x| target.embed(x, &from))
    }

    /// The subspace over a subfield, when its RREF basis has entries there.
    pub fn descend(&self, to: &Field) -> Option<Subspace> {
        let rows = self
            .basis
            .iter()
            .map(|r| r.iter().map(|x| self.field.restrict(x, to)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(Subspace { field: to.clone(), ambient: self.ambient, basis: rows, pivots: self.pivots.clone() })
    }
}

/// True iff the subspaces are linearly independent and fill the ambient
/// space.
pub fn direct_sum_check(subspaces: &[Subspace], ambient: usize) -> bool {
    let Some(first) = subspaces.first() else {
        return ambient == 0;
    };
    let total: usize = subspaces.iter().map(Subspace::dim).sum();
    if total != ambient {
        return false;
    }
    let rows: Vec<Vec<Scalar>> = subspaces.iter().flat_map(|s| s.basis().iter().cloned()).collect();
    Subspace::span(first.field(), ambient, &rows).dim() == total
}
