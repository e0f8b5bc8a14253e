//! Right ideals, reduced rank, and idempotent generators.

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{solve_affine, AffineSolution, Matrix, Subspace};

/// A subspace of an algebra closed under right multiplication.
#[derive(Clone, PartialEq, Eq)]
pub struct RightIdeal {
    algebra: Algebra,
    space: Subspace,
}

impl std::fmt::Debug for RightIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RightIdeal({:?})", self.space)
    }
}

impl RightIdeal {
    /// Checks closure under right multiplication by every basis element.
    pub fn new(algebra: &Algebra, space: Subspace) -> Result<RightIdeal> {
        if space.ambient() != algebra.dim() || space.field() != algebra.field() {
            return Err(Error::invalid("subspace does not live in the algebra"));
        }
        for x in space.basis() {
            for j in 0..algebra.dim() {
                let prod = algebra.mul_raw(x, &algebra.basis_vec(j));
                if !space.contains(&prod) {
                    return Err(Error::Structural(format!(
                        "subspace is not closed under right multiplication by basis element {j}"
                    )));
                }
            }
        }
        Ok(RightIdeal { algebra: algebra.clone(), space })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `dim(I) / deg(A)`.
    pub fn reduced_rank(&self) -> Result<usize> {
        let n = self
            .algebra
            .degree()
            .ok_or_else(|| Error::Structural("reduced rank needs a degree certificate".into()))?;
        if self.dim() % n != 0 {
            return Err(Error::Structural(format!(
                "ideal dimension {} is not divisible by the degree {n}",
                self.dim()
            )));
        }
        Ok(self.dim() / n)
    }

    /// An idempotent `e` in the ideal acting as a left identity on it, so
    /// that `eA` is the ideal. `None` when the ideal is not generated by an
    /// idempotent.
    pub fn summand_generator(&self) -> Option<Element> {
        let alg = &self.algebra;
        let f = alg.field();
        let basis = self.space.basis();
        let m = basis.len();
        if m == 0 {
            return Some(alg.zero());
        }
        let d = alg.dim();
        // unknowns c_k with e = sum c_k x_k; equations e * x_j = x_j
        let mut rows = Vec::with_capacity(m * d);
        let mut rhs = Vec::with_capacity(m * d);
        let products: Vec<Vec<Vec<Scalar>>> =
            basis.iter().map(|xk| basis.iter().map(|xj| alg.mul_raw(xk, xj)).collect()).collect();
        for (j, xj) in basis.iter().enumerate() {
            for t in 0..d {
                rows.push((0..m).map(|k| products[k][j][t].clone()).collect::<Vec<_>>());
                rhs.push(xj[t].clone());
            }
        }
        let mat = Matrix::from_rows(f, m, &rows);
        let coeffs = match solve_affine(&mat, &rhs).expect("consistent shapes") {
            AffineSolution::Inconsistent => return None,
            AffineSolution::Unique(c) | AffineSolution::Family { particular: c, .. } => c,
        };
        let mut e = vec![f.zero(); d];
        for (c, x) in coeffs.iter().zip(basis) {
            for (acc, v) in e.iter_mut().zip(x) {
                *acc = f.add(acc, &f.mul(c, v));
            }
        }
        alg.element(e).ok()
    }
}

/// The right ideal `eA` of an idempotent.
pub fn ideal_from_idempotent(e: &Element) -> Result<RightIdeal> {
    if !e.is_idempotent() {
        return Err(Error::invalid("element is not idempotent"));
    }
    let alg = e.algebra();
    let gens: Vec<Vec<Scalar>> =
        (0..alg.dim()).map(|j| alg.mul_raw(e.coords(), &alg.basis_vec(j))).collect();
    let space = Subspace::span(alg.field(), alg.dim(), &gens);
    Ok(RightIdeal { algebra: alg.clone(), space })
}

/// Reduced rank of the idempotent `e`, i.e. of `eA`.
pub fn idempotent_rank(e: &Element) -> Result<usize> {
    ideal_from_idempotent(e)?.reduced_rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::linalg::direct_sum_check;

    #[test]
    fn ideal_of_matrix_unit() {
        let q = Field::rationals();
        let m2 = Algebra::matrix(2, &q).unwrap();
        let e11 = m2.basis_element(0);
        let i = ideal_from_idempotent(&e11).unwrap();
        assert_eq!(i.dim(), 2);
        assert_eq!(i.space(), &Subspace::span(&q, 4, &[m2.basis_vec(0), m2.basis_vec(1)]));
        assert_eq!(i.reduced_rank().unwrap(), 1);
        assert_eq!(i.summand_generator().unwrap(), e11);
    }

    #[test]
    fn unit_and_zero_ideals() {
        let q = Field::rationals();
        let m3 = Algebra::matrix(3, &q).unwrap();
        let full = ideal_from_idempotent(&m3.one()).unwrap();
        assert_eq!(full.dim(), 9);
        assert_eq!(full.reduced_rank().unwrap(), 3);
        let zero = ideal_from_idempotent(&m3.zero()).unwrap();
        assert_eq!(zero.dim(), 0);
        assert!(zero.summand_generator().unwrap().is_zero());
        let e = m3.element_from_i64s(&[1, 0, 0, 0, 1, 0, 0, 0, 0]).unwrap();
        let i = ideal_from_idempotent(&e).unwrap();
        assert_eq!(i.dim(), 6);
        assert_eq!(i.reduced_rank().unwrap(), 2);
    }

    #[test]
    fn complementary_ranks_sum_to_degree() {
        let f = Field::prime(3).unwrap();
        let m3 = Algebra::matrix(3, &f).unwrap();
        // a non-diagonal idempotent: projection onto span(e1 + e2) along span(e2, e3)
        let e = m3.element_from_i64s(&[1, 0, 0, 1, 0, 0, 0, 0, 0]).unwrap();
        assert!(e.is_idempotent());
        let comp = &m3.one() - &e;
        let i = ideal_from_idempotent(&e).unwrap();
        let j = ideal_from_idempotent(&comp).unwrap();
        assert_eq!(i.reduced_rank().unwrap() + j.reduced_rank().unwrap(), 3);
        assert!(direct_sum_check(&[i.space().clone(), j.space().clone()], 9));
    }

    #[test]
    fn non_ideal_rejected() {
        let f2 = Field::prime(2).unwrap();
        let m2 = Algebra::matrix(2, &f2).unwrap();
        let span = Subspace::span(&f2, 4, &[m2.basis_vec(1)]);
        assert!(matches!(RightIdeal::new(&m2, span), Err(Error::Structural(_))));
    }

    #[test]
    fn non_idempotent_rejected() {
        let q = Field::rationals();
        let m2 = Algebra::matrix(2, &q).unwrap();
        let a = m2.element_from_i64s(&[2, 0, 0, 0]).unwrap();
        assert!(matches!(ideal_from_idempotent(&a), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn non_divisible_dimension_is_structural() {
        let q = Field::rationals();
        // commutative algebra Q x Q x Q x Q with a (fake) degree certificate 2
        let z = q.zero();
        let o = q.one();
        let mut table = vec![vec![vec![z.clone(); 4]; 4]; 4];
        for i in 0..4 {
            table[i][i][i] = o.clone();
        }
        let alg = Algebra::from_structure_constants(&q, &table, &[o.clone(), o.clone(), o.clone(), o], Some(2)).unwrap();
        let i = ideal_from_idempotent(&alg.basis_element(0)).unwrap();
        assert!(matches!(i.reduced_rank(), Err(Error::Structural(_))));
    }
}
