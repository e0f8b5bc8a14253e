//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Coefficients lowest degree first, no trailing zeros (the zero polynomial
/// has no coefficients).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

/// Schoolbook product of raw coefficient vectors.
pub(crate) fn mul_raw(field: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = field.add(&out[i + j], &field.mul(x, y));
        }
    }
    out
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_i64s(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field.clone(), coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, field.one())
    }

    pub fn constant(field: &Field, c: Scalar) -> Poly {
        Poly::new(field.clone(), vec![c])
    }

    /// `x - r`
    pub fn linear_root(field: &Field, r: &Scalar) -> Poly {
        Poly::new(field.clone(), vec![field.neg(r), field.one()])
    }

    pub fn monomial(field: &Field, c: Scalar, k: usize) -> Poly {
        let mut cs = vec![field.zero(); k];
        cs.push(c);
        Poly::new(field.clone(), cs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient. Panics on the zero polynomial.
    pub fn leading(&self) -> &Scalar {
        self.coeffs.last().expect("leading coefficient of the zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.field.is_one(self.leading())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let cs = (0..n).map(|k| f.add(&self.coeff(k), &other.coeff(k))).collect();
        Poly::new(f.clone(), cs)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.field.clone(), self.coeffs.iter().map(|c| self.field.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        Poly::new(self.field.clone(), mul_raw(&self.field, &self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.field.clone(), self.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    /// Scale to leading coefficient 1. The zero polynomial is returned as is.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Euclidean division. Panics when `divisor` is zero.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        let f = &self.field;
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Poly::zero(f), self.clone());
        }
        let mut quot = vec![f.zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = f.mul(&rem[k + d], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, m) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(&rem[k + j], &f.mul(&c, m));
            }
            quot[k] = c;
        }
        rem.truncate(d);
        (Poly::new(f.clone(), quot), Poly::new(f.clone(), rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.divrem(divisor).1
    }

    /// True when `divisor` divides `self` exactly.
    pub fn divisible_by(&self, divisor: &Poly) -> bool {
        self.rem(divisor).is_zero()
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: `(g, s, t)` with `s*self + t*other = g`, `g` not
    /// normalized.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        (r0, s0, t0)
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let cs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| f.mul(c, &f.from_i64(k as i64)))
            .collect();
        Poly::new(f.clone(), cs)
    }

    /// Horner evaluation at a point of this field.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let f = &self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// `self^e mod modulus`.
    pub fn powmod(&self, mut e: u128, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus);
        let mut acc = Poly::one(&self.field).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(modulus);
            }
        }
        acc
    }

    /// The same polynomial with coefficients lifted to an extension.
    pub fn embed(&self, target: &Field) -> Result<Poly> {
        if target == &self.field {
            return Ok(self.clone());
        }
        if !target.contains_subfield(&self.field) {
            return Err(Error::FieldMismatch(format!(
                "{} is not a subfield of {target}",
                self.field
            )));
        }
        let cs = self
            .coeffs
            .iter()
            .map(|c| target.embed(c, &self.field))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(target.clone(), cs))
    }

    /// Product of `(x - r)` over `roots`, times `lead`.
    pub fn from_roots(field: &Field, lead: &Scalar, roots: &[Scalar]) -> Poly {
        roots
            .iter()
            .fold(Poly::constant(field, lead.clone()), |acc, r| acc.mul(&Poly::linear_root(field, r)))
    }

    pub(crate) fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let (negative, text) = coefficient_text(f, c);
            let term = match (k, text.as_str()) {
                (0, _) => text,
                (_, "1") => mono,
                _ if text.contains(' ') => format!("({text})*{mono}"),
                _ => format!("{text}*{mono}"),
            };
            match (out.is_empty(), negative) {
                (true, true) => out.push_str(&format!("-{term}")),
                (true, false) => out.push_str(&term),
                (false, true) => out.push_str(&format!(" - {term}")),
                (false, false) => out.push_str(&format!(" + {term}")),
            }
        }
        out
    }
}

/// Sign and magnitude of a coefficient for display; integers drop the
/// denominator and extension elements print as polynomials in their
/// generator.
fn coefficient_text(f: &Field, c: &Scalar) -> (bool, String) {
    match c {
        Scalar::Rational(r) => {
            let neg = r.numer().sign() == num_bigint::Sign::Minus;
            let a = if neg { -r.clone() } else { r.clone() };
            let t = if a.is_integer() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
            (neg, t)
        }
        Scalar::Residue(r) => (false, r.to_string()),
        Scalar::Poly(cs) => {
            let base = f.base().expect("extension field");
            let name = f.generator_name().unwrap_or("w");
            (false, Poly::new(base.clone(), cs.clone()).display_with(name))
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("x"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.field, self)
    }
}
