//! Exact fields: the rationals, prime fields, and towers of simple
//! extensions `base[x]/(f)`.
//!
//! A [`Field`] is a cheap handle (reference counted) and carries all the
//! arithmetic. Values are plain [`Scalar`]s; the container that holds them
//! (polynomial, matrix, algebra element) records which field they live in.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// A field element in canonical form.
///
/// * rationals are reduced fractions with positive denominator,
/// * prime-field residues lie in `[0, p)`,
/// * extension elements are coefficient vectors over the base of length
///   exactly `deg(modulus)`, lowest degree first.
///
/// The derived ordering is the canonical total order used for sorting roots:
/// fractions by value, residues as integers, coefficient vectors
/// lexicographically from the constant term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u64),
    Poly(Vec<Scalar>),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Residue(r) => write!(f, "{r}"),
            Scalar::Poly(cs) => {
                write!(f, "[")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[derive(Debug)]
enum Kind {
    Rationals,
    Prime(u64),
    Extension(Extension),
}

#[derive(Debug)]
struct Extension {
    base: Field,
    /// Monic, lowest degree first, `len == degree + 1`.
    modulus: Vec<Scalar>,
    name: String,
    order: Option<u128>,
}

/// Handle to an exact field. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Kind>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&*self.0, &*other.0) {
            (Kind::Rationals, Kind::Rationals) => true,
            (Kind::Prime(p), Kind::Prime(q)) => p == q,
            // generator names are cosmetic
            (Kind::Extension(a), Kind::Extension(b)) => a.base == b.base && a.modulus == b.modulus,
            _ => false,
        }
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &*self.0 {
            Kind::Rationals => 0u8.hash(state),
            Kind::Prime(p) => {
                1u8.hash(state);
                p.hash(state);
            }
            Kind::Extension(e) => {
                2u8.hash(state);
                e.base.hash(state);
                e.modulus.hash(state);
            }
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Kind::Rationals => write!(f, "Q"),
            Kind::Prime(p) => write!(f, "GF({p})"),
            Kind::Extension(e) => {
                write!(f, "{}[{}]/(", e.base, e.name)?;
                let base_poly = Poly::new(e.base.clone(), e.modulus.clone());
                write!(f, "{})", base_poly.display_with(&e.name))
            }
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(Kind::Rationals))
    }

    /// The prime field of characteristic `p`. Only `p < 2^32` is accepted so
    /// residue products fit in a `u64`.
    pub fn prime(p: u64) -> Result<Field> {
        if p >= 1 << 32 {
            return Err(Error::invalid(format!("prime {p} exceeds 2^32")));
        }
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        Ok(Field(Arc::new(Kind::Prime(p))))
    }

    /// Simple extension `base[x]/(modulus)` with the modulus checked for
    /// irreducibility.
    ///
    /// Over a finite base the check is exact. Over the rationals only
    /// quadratics (discriminant not a square) and linear moduli are decided;
    /// anything else needs [`Field::extension_trusted`].
    pub fn extension(base: &Field, modulus: &Poly, name: &str) -> Result<Field> {
        Self::check_modulus(base, modulus)?;
        let irreducible = match crate::factor::is_irreducible(modulus) {
            Ok(b) => b,
            Err(Error::Unsupported(msg)) => {
                return Err(Error::Unsupported(format!(
                    "cannot certify irreducibility ({msg}); use a trusted extension"
                )))
            }
            Err(e) => return Err(e),
        };
        if !irreducible {
            return Err(Error::invalid(format!("modulus {modulus} is reducible over {base}")));
        }
        Ok(Self::build_extension(base, modulus, name))
    }

    /// Extension whose modulus is accepted without an irreducibility proof.
    pub fn extension_trusted(base: &Field, modulus: &Poly, name: &str) -> Result<Field> {
        Self::check_modulus(base, modulus)?;
        Ok(Self::build_extension(base, modulus, name))
    }

    fn check_modulus(base: &Field, modulus: &Poly) -> Result<()> {
        if modulus.field() != base {
            return Err(Error::FieldMismatch(format!(
                "modulus lives over {}, base is {base}",
                modulus.field()
            )));
        }
        match modulus.degree() {
            Some(d) if d >= 1 => {}
            _ => return Err(Error::invalid("extension modulus must have degree >= 1")),
        }
        if !base.is_one(modulus.leading()) {
            return Err(Error::invalid("extension modulus must be monic"));
        }
        Ok(())
    }

    fn build_extension(base: &Field, modulus: &Poly, name: &str) -> Field {
        let degree = modulus.degree().unwrap_or(0) as u32;
        let order = base.order().and_then(|q| q.checked_pow(degree));
        Field(Arc::new(Kind::Extension(Extension {
            base: base.clone(),
            modulus: modulus.coeffs().to_vec(),
            name: name.to_string(),
            order,
        })))
    }

    /// `F_{q^degree}` over a finite `base` of order `q`, using the first monic
    /// irreducible polynomial of that degree in enumeration order.
    pub fn finite_extension(base: &Field, degree: usize, name: &str) -> Result<Field> {
        if degree == 1 {
            return Ok(base.clone());
        }
        let modulus = crate::factor::first_irreducible(base, degree)?;
        Ok(Self::build_extension(base, &modulus, name))
    }

    pub fn is_rationals(&self) -> bool {
        matches!(&*self.0, Kind::Rationals)
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic() != 0
    }

    /// 0 for towers over the rationals.
    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            Kind::Rationals => 0,
            Kind::Prime(p) => *p,
            Kind::Extension(e) => e.base.characteristic(),
        }
    }

    /// Number of elements, `None` for infinite fields or orders beyond `u128`.
    pub fn order(&self) -> Option<u128> {
        match &*self.0 {
            Kind::Rationals => None,
            Kind::Prime(p) => Some(*p as u128),
            Kind::Extension(e) => e.order,
        }
    }

    /// Immediate base of an extension.
    pub fn base(&self) -> Option<&Field> {
        match &*self.0 {
            Kind::Extension(e) => Some(&e.base),
            _ => None,
        }
    }

    /// Degree over the immediate base (1 for prime fields and the rationals).
    pub fn relative_degree(&self) -> usize {
        match &*self.0 {
            Kind::Extension(e) => e.modulus.len() - 1,
            _ => 1,
        }
    }

    /// Degree over the prime field (or over the rationals).
    pub fn absolute_degree(&self) -> usize {
        match &*self.0 {
            Kind::Extension(e) => (e.modulus.len() - 1) * e.base.absolute_degree(),
            _ => 1,
        }
    }

    pub fn modulus(&self) -> Option<Poly> {
        match &*self.0 {
            Kind::Extension(e) => Some(Poly::new(e.base.clone(), e.modulus.clone())),
            _ => None,
        }
    }

    pub fn generator_name(&self) -> Option<&str> {
        match &*self.0 {
            Kind::Extension(e) => Some(&e.name),
            _ => None,
        }
    }

    /// The bottom of the tower.
    pub fn prime_field(&self) -> Field {
        match &*self.0 {
            Kind::Extension(e) => e.base.prime_field(),
            _ => self.clone(),
        }
    }

    /// True when `sub` is this field or appears in its tower below it.
    pub fn contains_subfield(&self, sub: &Field) -> bool {
        if self == sub {
            return true;
        }
        match &*self.0 {
            Kind::Extension(e) => e.base.contains_subfield(sub),
            _ => false,
        }
    }

    /// The extension generator as an element of this field.
    pub fn generator(&self) -> Option<Scalar> {
        match &*self.0 {
            Kind::Extension(e) => {
                let mut cs = vec![e.base.zero(); e.modulus.len() - 1];
                if cs.len() > 1 {
                    cs[1] = e.base.one();
                } else {
                    // degree-one extension: the generator is the root of x + c
                    cs[0] = e.base.neg(&e.modulus[0]);
                }
                Some(Scalar::Poly(cs))
            }
            _ => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        match &*self.0 {
            Kind::Rationals => Scalar::Rational(BigRational::zero()),
            Kind::Prime(_) => Scalar::Residue(0),
            Kind::Extension(e) => Scalar::Poly(vec![e.base.zero(); e.modulus.len() - 1]),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match &*self.0 {
            Kind::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Kind::Prime(p) => Scalar::Residue(v.rem_euclid(*p as i64) as u64),
            Kind::Extension(e) => {
                let mut cs = vec![e.base.zero(); e.modulus.len() - 1];
                cs[0] = e.base.from_i64(v);
                Scalar::Poly(cs)
            }
        }
    }

    /// Image of a rational number; fails when the denominator vanishes in
    /// positive characteristic.
    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar> {
        match &*self.0 {
            Kind::Rationals => Ok(Scalar::Rational(r.clone())),
            Kind::Prime(p) => {
                let p = BigInt::from(*p);
                let n = r.numer().mod_floor_big(&p);
                let d = r.denom().mod_floor_big(&p);
                let n = self.from_u64(n.to_u64().unwrap_or(0));
                let d = self.from_u64(d.to_u64().unwrap_or(0));
                let dinv = self
                    .inv(&d)
                    .ok_or_else(|| Error::invalid(format!("denominator of {r} vanishes mod {p}")))?;
                Ok(self.mul(&n, &dinv))
            }
            Kind::Extension(e) => {
                let mut cs = vec![e.base.zero(); e.modulus.len() - 1];
                cs[0] = e.base.from_rational(r)?;
                Ok(Scalar::Poly(cs))
            }
        }
    }

    fn from_u64(&self, v: u64) -> Scalar {
        match &*self.0 {
            Kind::Prime(p) => Scalar::Residue(v % p),
            _ => self.from_i64(v as i64),
        }
    }

    /// Membership check for values coming from outside (parsers, callers).
    pub fn contains(&self, x: &Scalar) -> bool {
        match (&*self.0, x) {
            (Kind::Rationals, Scalar::Rational(_)) => true,
            (Kind::Prime(p), Scalar::Residue(r)) => r < p,
            (Kind::Extension(e), Scalar::Poly(cs)) => {
                cs.len() == e.modulus.len() - 1 && cs.iter().all(|c| e.base.contains(c))
            }
            _ => false,
        }
    }

    pub fn is_zero(&self, x: &Scalar) -> bool {
        match x {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue(r) => *r == 0,
            Scalar::Poly(cs) => {
                let base = self.base().expect("polynomial scalar outside an extension");
                cs.iter().all(|c| base.is_zero(c))
            }
        }
    }

    pub fn is_one(&self, x: &Scalar) -> bool {
        *x == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (Kind::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (Kind::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue((x + y) % p)
            }
            (Kind::Extension(e), Scalar::Poly(x), Scalar::Poly(y)) => Scalar::Poly(
                x.iter().zip(y).map(|(u, v)| e.base.add(u, v)).collect(),
            ),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (&*self.0, a) {
            (Kind::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            (Kind::Prime(p), Scalar::Residue(x)) => Scalar::Residue((p - x) % p),
            (Kind::Extension(e), Scalar::Poly(x)) => {
                Scalar::Poly(x.iter().map(|u| e.base.neg(u)).collect())
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (Kind::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (Kind::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => Scalar::Residue(x * y % p),
            (Kind::Extension(e), Scalar::Poly(x), Scalar::Poly(y)) => {
                Scalar::Poly(e.reduce(crate::poly::mul_raw(&e.base, x, y)))
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        match (&*self.0, a) {
            (Kind::Rationals, Scalar::Rational(x)) => Some(Scalar::Rational(x.recip())),
            (Kind::Prime(p), Scalar::Residue(x)) => Some(Scalar::Residue(pow_mod(*x, p - 2, *p))),
            (Kind::Extension(e), Scalar::Poly(x)) => {
                let a = Poly::new(e.base.clone(), x.clone());
                let m = Poly::new(e.base.clone(), e.modulus.clone());
                // s*a + t*m = g, g a nonzero constant since m is irreducible
                let (g, s, _) = a.xgcd(&m);
                if g.degree() != Some(0) {
                    return None;
                }
                let ginv = e.base.inv(g.leading())?;
                let s = s.scale(&ginv);
                Some(Scalar::Poly(e.pad(s.coeffs().to_vec())))
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    pub fn pow(&self, a: &Scalar, mut e: u128) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Square root inside this field when one exists (finite fields by search
    /// of the roots of `x^2 - a`, rationals exactly).
    pub fn sqrt(&self, a: &Scalar) -> Result<Option<Scalar>> {
        if self.is_zero(a) {
            return Ok(Some(self.zero()));
        }
        if let Scalar::Rational(r) = a {
            return Ok(rational_sqrt(r).map(Scalar::Rational));
        }
        let f = Poly::new(self.clone(), vec![self.neg(a), self.zero(), self.one()]);
        let roots = crate::factor::find_roots(&f, self)?;
        Ok(roots.into_iter().next())
    }

    /// Lift an element of a subfield in this field's tower.
    pub fn embed(&self, x: &Scalar, from: &Field) -> Result<Scalar> {
        if self == from {
            return Ok(x.clone());
        }
        match &*self.0 {
            Kind::Extension(e) => {
                let inner = e.base.embed(x, from)?;
                let mut cs = vec![e.base.zero(); e.modulus.len() - 1];
                cs[0] = inner;
                Ok(Scalar::Poly(cs))
            }
            _ => Err(Error::FieldMismatch(format!("{from} is not a subfield of {self}"))),
        }
    }

    /// Inverse of [`Field::embed`]: `Some` when `x` lies in the subfield `to`.
    pub fn restrict(&self, x: &Scalar, to: &Field) -> Option<Scalar> {
        if self == to {
            return Some(x.clone());
        }
        match (&*self.0, x) {
            (Kind::Extension(e), Scalar::Poly(cs)) => {
                if cs[1..].iter().all(|c| e.base.is_zero(c)) {
                    e.base.restrict(&cs[0], to)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Generator of `Gal(self / over)` applied to `x`: the `|over|`-power
    /// Frobenius for finite fields, `sqrt(d) -> -sqrt(d)` for a quadratic
    /// extension of the rationals. Identity when `self == over`.
    pub fn galois_generator(&self, x: &Scalar, over: &Field) -> Result<Scalar> {
        if self == over {
            return Ok(x.clone());
        }
        if !self.contains_subfield(over) {
            return Err(Error::FieldMismatch(format!("{over} is not a subfield of {self}")));
        }
        if self.is_finite() {
            let q = over
                .order()
                .ok_or_else(|| Error::Unsupported("field order exceeds u128".into()))?;
            return Ok(self.pow(x, q));
        }
        match (&*self.0, x) {
            (Kind::Extension(e), Scalar::Poly(cs))
                if e.base == *over && e.modulus.len() == 3 && e.base.is_rationals() =>
            {
                // root r of x^2 + b x + c goes to -b - r
                let b = &e.modulus[1];
                let c0 = e.base.sub(&cs[0], &e.base.mul(&cs[1], b));
                Ok(Scalar::Poly(vec![c0, e.base.neg(&cs[1])]))
            }
            _ => Err(Error::Unsupported(format!(
                "Galois action of {self} over {over} is not available"
            ))),
        }
    }

    /// The `i`-th element of a finite field in base-`q` digit order.
    pub fn element_from_index(&self, mut i: u128) -> Scalar {
        match &*self.0 {
            Kind::Rationals => panic!("rationals are not enumerable"),
            Kind::Prime(p) => Scalar::Residue((i % *p as u128) as u64),
            Kind::Extension(e) => {
                let q = e.base.order().expect("finite base");
                let mut cs = Vec::with_capacity(e.modulus.len() - 1);
                for _ in 0..e.modulus.len() - 1 {
                    cs.push(e.base.element_from_index(i % q));
                    i /= q;
                }
                Scalar::Poly(cs)
            }
        }
    }

    /// All elements of a finite field, starting with zero.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        let q = self.order().expect("enumerating elements of an infinite field");
        (0..q).map(move |i| self.element_from_index(i))
    }
}

impl Extension {
    fn pad(&self, mut cs: Vec<Scalar>) -> Vec<Scalar> {
        cs.resize(self.modulus.len() - 1, self.base.zero());
        cs
    }

    /// Reduce a raw product modulo the monic modulus.
    fn reduce(&self, mut cs: Vec<Scalar>) -> Vec<Scalar> {
        let d = self.modulus.len() - 1;
        while cs.len() > d {
            let top = cs.pop().expect("nonempty");
            if self.base.is_zero(&top) {
                continue;
            }
            let shift = cs.len() - d;
            for (k, m) in self.modulus[..d].iter().enumerate() {
                let t = self.base.mul(&top, m);
                cs[shift + k] = self.base.sub(&cs[shift + k], &t);
            }
        }
        self.pad(cs)
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

trait ModFloorBig {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

/// Exact square root of a nonnegative rational, if it is a square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Remove square factors found by trial division up to `bound`; the result
/// differs from `v` by a rational square.
pub(crate) fn strip_squares(v: &BigInt, bound: u64) -> BigInt {
    let mut sign = BigInt::one();
    let mut n = v.clone();
    if n.is_negative() {
        sign = -sign;
        n = -n;
    }
    if n.is_zero() {
        return n;
    }
    let mut out = BigInt::one();
    let mut d = 2u64;
    while d <= bound {
        let dd = BigInt::from(d);
        if &dd * &dd > n {
            break;
        }
        let sq = &dd * &dd;
        while (&n % &sq).is_zero() {
            n /= &sq;
        }
        if (&n % &dd).is_zero() {
            n /= &dd;
            out *= &dd;
        }
        d += 1;
    }
    sign * out * n
}
