//! Square-free tests, irreducibility, root finding, and splitting fields.
//!
//! Finite fields use distinct-degree factorization and a deterministic
//! equal-degree split of the linear part; every root list is checked by
//! multiplying back. Over the rationals only rational roots and a single
//! quadratic extension are supported.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{rational_sqrt, strip_squares, Field, Scalar};
use crate::poly::Poly;

/// Distinct roots criterion: `gcd(f, f')` is a nonzero constant.
///
/// In positive characteristic the derivative can vanish identically; such a
/// polynomial is reported as not square-free unless it is constant.
pub fn squarefree_test(f: &Poly) -> Result<bool> {
    let Some(deg) = f.degree() else {
        return Err(Error::invalid("squarefree test of the zero polynomial"));
    };
    if deg == 0 {
        return Ok(true);
    }
    let d = f.derivative();
    if d.is_zero() {
        return Ok(false);
    }
    Ok(f.gcd(&d).degree() == Some(0))
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn field_order(field: &Field) -> Result<u128> {
    field
        .order()
        .ok_or_else(|| Error::Unsupported(format!("order of {field} is not representable")))
}

/// `x^(q^k) mod f`, iterating the `q`-power map `k` times.
fn frobenius_power(f: &Poly, q: u128, k: usize) -> Poly {
    let field = f.field();
    let mut h = Poly::monomial(field, field.one(), 1).rem(f);
    for _ in 0..k {
        h = h.powmod(q, f);
    }
    h
}

/// Irreducibility over the coefficient field.
///
/// Exact over finite fields (Rabin's test). Over the rationals, degrees up to
/// three are decided by the absence of rational roots; higher degrees and
/// other infinite fields report [`Error::Unsupported`].
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let Some(n) = f.degree() else { return Ok(false) };
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let field = f.field();
    if field.is_finite() {
        let q = field_order(field)?;
        let f = f.monic();
        let x = Poly::monomial(field, field.one(), 1);
        if frobenius_power(&f, q, n) != x.rem(&f) {
            return Ok(false);
        }
        for r in prime_factors(n) {
            let h = frobenius_power(&f, q, n / r).sub(&x);
            if f.gcd(&h).degree() != Some(0) {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    if field.is_rationals() && n <= 3 {
        return Ok(rational_roots(f).is_empty());
    }
    Err(Error::Unsupported(format!(
        "irreducibility of a degree {n} polynomial over {field}"
    )))
}

/// Distinct-degree factorization of a monic square-free polynomial over a
/// finite field: pairs `(g_d, d)` where `g_d` is the product of the
/// irreducible factors of degree `d`.
pub fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let field = f.field();
    let q = field_order(field)?;
    let x = Poly::monomial(field, field.one(), 1);
    let mut rest = f.monic();
    let mut h = x.rem(&rest);
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.powmod(q, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.divrem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    Ok(out)
}

/// First monic irreducible polynomial of the given degree over a finite
/// field, enumerating lower coefficients in base-`q` digit order.
pub fn first_irreducible(base: &Field, degree: usize) -> Result<Poly> {
    let q = field_order(base)?;
    let count = q
        .checked_pow(degree as u32)
        .ok_or_else(|| Error::Unsupported("irreducible search space too large".into()))?;
    for i in 0..count {
        let mut idx = i;
        let mut cs = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            cs.push(base.element_from_index(idx % q));
            idx /= q;
        }
        cs.push(base.one());
        let p = Poly::new(base.clone(), cs);
        if is_irreducible(&p)? {
            return Ok(p);
        }
    }
    Err(Error::Exhausted(format!("no irreducible polynomial of degree {degree} over {base}")))
}

fn lcm_denominators(f: &Poly) -> BigInt {
    f.coeffs().iter().fold(BigInt::one(), |acc, c| match c {
        Scalar::Rational(r) => acc.lcm(r.denom()),
        _ => acc,
    })
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Distinct rational roots of a polynomial over the rationals, sorted.
pub fn rational_roots(f: &Poly) -> Vec<BigRational> {
    assert!(f.field().is_rationals(), "rational roots need a polynomial over Q");
    let mut roots = Vec::new();
    if f.is_zero() {
        return roots;
    }
    let scale = lcm_denominators(f);
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| match c {
            Scalar::Rational(r) => (r * BigRational::from_integer(scale.clone())).to_integer(),
            _ => unreachable!("rational field holds rational scalars"),
        })
        .collect();
    let low = ints.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
    if low > 0 {
        roots.push(BigRational::zero());
    }
    let trimmed = &ints[low..];
    if trimmed.len() > 1 {
        let a0 = &trimmed[0];
        let an = trimmed.last().expect("nonempty");
        let field = f.field();
        for p in positive_divisors(a0) {
            for q in positive_divisors(an) {
                for sign in [1, -1] {
                    let r = BigRational::new(&p * sign, q.clone());
                    if !roots.contains(&r) && field.is_zero(&f.eval(&Scalar::Rational(r.clone()))) {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Divide out `(x - r)` as often as it divides `f`; returns the multiplicity
/// and the cofactor.
fn strip_root(f: &Poly, r: &Scalar) -> (usize, Poly) {
    let lin = Poly::linear_root(f.field(), r);
    let mut g = f.clone();
    let mut m = 0;
    loop {
        let (q, rem) = g.divrem(&lin);
        if !rem.is_zero() {
            return (m, g);
        }
        g = q;
        m += 1;
    }
}

fn with_multiplicity(f: &Poly, distinct: &[Scalar]) -> (Vec<Scalar>, Poly) {
    let mut out = Vec::new();
    let mut rest = f.clone();
    for r in distinct {
        let (m, cof) = strip_root(&rest, r);
        rest = cof;
        out.extend(std::iter::repeat_n(r.clone(), m));
    }
    out.sort();
    (out, rest)
}

/// Roots of a product of distinct linear factors over a finite field.
fn split_linear(r: &Poly, field: &Field, q: u128) -> Vec<Scalar> {
    let Some(deg) = r.degree() else { return Vec::new() };
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        let m = r.monic();
        return vec![field.neg(&m.coeff(0))];
    }
    let x = Poly::monomial(field, field.one(), 1);
    let char2 = field.characteristic() == 2;
    for c in field.elements() {
        let probe = if char2 {
            if field.is_zero(&c) {
                continue;
            }
            // trace of c*x down to F_2
            let k = 127 - q.leading_zeros();
            let mut term = x.scale(&c).rem(r);
            let mut acc = term.clone();
            for _ in 1..k {
                term = term.mul(&term).rem(r);
                acc = acc.add(&term);
            }
            acc
        } else {
            let shifted = x.add(&Poly::constant(field, c.clone()));
            shifted.powmod((q - 1) / 2, r).sub(&Poly::one(field))
        };
        let g = r.gcd(&probe);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < deg {
            let mut out = split_linear(&g, field, q);
            out.extend(split_linear(&r.divrem(&g).0, field, q));
            return out;
        }
    }
    // every shift failed to separate roots: fall back to evaluation
    field.elements().filter(|c| field.is_zero(&r.eval(c))).collect()
}

fn finite_roots(f: &Poly) -> Result<Vec<Scalar>> {
    let field = f.field();
    let q = field_order(field)?;
    let g = f.monic();
    let x = Poly::monomial(field, field.one(), 1);
    let linear_part = g.gcd(&x.powmod(q, &g).sub(&x));
    let distinct = split_linear(&linear_part, field, q);
    let (roots, _) = with_multiplicity(&g, &distinct);
    Ok(roots)
}

/// Roots of `f` in `target` (the coefficient field or an extension of it),
/// listed with multiplicity in canonical order.
pub fn find_roots(f: &Poly, target: &Field) -> Result<Vec<Scalar>> {
    if f.is_zero() {
        return Err(Error::invalid("roots of the zero polynomial"));
    }
    let g = f.embed(target)?;
    let roots = if target.is_finite() {
        finite_roots(&g)?
    } else if target.is_rationals() {
        let distinct: Vec<Scalar> = rational_roots(&g).into_iter().map(Scalar::Rational).collect();
        with_multiplicity(&g, &distinct).0
    } else {
        quadratic_tower_roots(f, target)?
    };
    verify_roots(&g, &roots)?;
    Ok(roots)
}

fn verify_roots(f: &Poly, roots: &[Scalar]) -> Result<()> {
    let field = f.field();
    let lin = Poly::from_roots(field, &field.one(), roots);
    if !f.divisible_by(&lin) {
        return Err(Error::Structural(format!("root list does not divide {f}")));
    }
    Ok(())
}

/// Roots in a quadratic extension `Q(t)`, `t^2 + b t + c = 0`.
fn quadratic_tower_roots(f: &Poly, target: &Field) -> Result<Vec<Scalar>> {
    let base = target.base().filter(|b| b.is_rationals()).ok_or_else(|| {
        Error::Unsupported(format!("root finding in {target}"))
    })?;
    let g = f.embed(target)?;
    if f.field() == target {
        // coefficients already in the extension: only linear factors
        return match g.degree() {
            Some(0) => Ok(Vec::new()),
            Some(1) => {
                let m = g.monic();
                Ok(vec![target.neg(&m.coeff(0))])
            }
            _ => Err(Error::Unsupported(format!("root finding of {g} over {target}"))),
        };
    }
    if f.field() != base {
        return Err(Error::FieldMismatch(format!("{} is not the base of {target}", f.field())));
    }
    let rational: Vec<Scalar> = rational_roots(f)
        .into_iter()
        .map(|r| target.embed(&Scalar::Rational(r), base))
        .collect::<Result<_>>()?;
    let (mut roots, rest) = with_multiplicity(&g, &rational);
    match rest.degree() {
        Some(0) => {}
        Some(2) => {
            let rest_q = descend_poly(&rest, base)?;
            if let Some((a, b)) = quadratic_roots_in(&rest_q, target)? {
                roots.push(a);
                roots.push(b);
                roots.sort();
            }
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "root finding of a degree {} factor over {target}",
                rest.degree().unwrap_or(0)
            )))
        }
    }
    Ok(roots)
}

fn descend_poly(p: &Poly, to: &Field) -> Result<Poly> {
    let cs = p
        .coeffs()
        .iter()
        .map(|c| {
            p.field()
                .restrict(c, to)
                .ok_or_else(|| Error::Structural("coefficient outside the base field".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(to.clone(), cs))
}

/// Both roots of a rational quadratic inside `Q(t)`, when they lie there.
fn quadratic_roots_in(p: &Poly, target: &Field) -> Result<Option<(Scalar, Scalar)>> {
    let base = p.field();
    let m = p.monic();
    let (Scalar::Rational(b), Scalar::Rational(c)) = (m.coeff(1), m.coeff(0)) else {
        unreachable!("rational coefficients")
    };
    let disc = &b * &b - BigRational::from_integer(4.into()) * &c;
    let modulus = target.modulus().expect("extension");
    let (Scalar::Rational(mb), Scalar::Rational(mc)) = (modulus.coeff(1), modulus.coeff(0)) else {
        unreachable!("rational coefficients")
    };
    // generator t satisfies (2t + mb)^2 = mb^2 - 4 mc =: delta
    let delta = &mb * &mb - BigRational::from_integer(4.into()) * &mc;
    let Some(s) = rational_sqrt(&(&disc / &delta)) else {
        return Ok(None);
    };
    // sqrt(disc) = s * (2t + mb)
    let t = target.generator().expect("extension");
    let two_t_plus = target.add(
        &target.mul(&target.from_i64(2), &t),
        &target.embed(&Scalar::Rational(mb), base)?,
    );
    let root_disc = target.mul(&target.embed(&Scalar::Rational(s), base)?, &two_t_plus);
    let half = target.embed(&Scalar::Rational(BigRational::new(1.into(), 2.into())), base)?;
    let minus_b = target.embed(&Scalar::Rational(-b), base)?;
    let r1 = target.mul(&target.add(&minus_b, &root_disc), &half);
    let r2 = target.mul(&target.sub(&minus_b, &root_disc), &half);
    Ok(Some((r1, r2)))
}

/// A field in which the square-free `f` splits, with its root list.
///
/// Finite coefficient fields get the minimal extension `F_{q^m}` (one
/// simple extension whose modulus is an irreducible factor of `f` when a
/// factor of the right degree is available). Over the rationals the
/// polynomial must split over `Q` or over one quadratic field `Q(sqrt d)`.
pub fn splitting_extension(f: &Poly) -> Result<(Field, Vec<Scalar>)> {
    if !squarefree_test(f)? {
        return Err(Error::invalid(format!("{f} is not square-free")));
    }
    let field = f.field();
    let deg = f.degree().expect("nonzero");
    if deg == 0 {
        return Ok((field.clone(), Vec::new()));
    }
    let (ext, roots) = if field.is_finite() {
        let parts = distinct_degree(f)?;
        let m = parts.iter().fold(1usize, |acc, (_, d)| acc.lcm(d));
        if m == 1 {
            (field.clone(), find_roots(f, field)?)
        } else {
            let modulus = match parts.iter().find(|(g, d)| *d == m && g.degree() == Some(m)) {
                Some((g, _)) => g.clone(),
                None => first_irreducible(field, m)?,
            };
            let ext = Field::extension_trusted(field, &modulus, &generator_name(field))?;
            let roots = find_roots(f, &ext)?;
            (ext, roots)
        }
    } else if field.is_rationals() {
        let rational: Vec<Scalar> = rational_roots(f).into_iter().map(Scalar::Rational).collect();
        let (_, rest) = with_multiplicity(f, &rational);
        match rest.degree() {
            Some(0) => (field.clone(), rational),
            Some(2) => {
                let ext = quadratic_field_for(&rest)?;
                let roots = find_roots(f, &ext)?;
                (ext, roots)
            }
            Some(d) => {
                return Err(Error::UnsupportedSplitting(format!(
                    "{f} leaves an irrational factor of degree {d} over Q"
                )))
            }
            None => unreachable!("cofactor of a nonzero polynomial"),
        }
    } else {
        let roots = find_roots(f, field).map_err(|e| match e {
            Error::Unsupported(m) => Error::UnsupportedSplitting(m),
            other => other,
        })?;
        if roots.len() != deg {
            return Err(Error::UnsupportedSplitting(format!(
                "{f} does not split over {field} and further towers are not supported"
            )));
        }
        (field.clone(), roots)
    };
    if roots.len() != deg {
        return Err(Error::Structural(format!(
            "splitting of {f} produced {} roots, expected {deg}",
            roots.len()
        )));
    }
    let lead = ext.embed(f.leading(), field)?;
    if Poly::from_roots(&ext, &lead, &roots) != f.embed(&ext)? {
        return Err(Error::Structural(format!("root product does not reproduce {f}")));
    }
    Ok((ext, roots))
}

fn generator_name(base: &Field) -> String {
    let mut depth = 0;
    let mut cur = base.clone();
    while let Some(b) = cur.base().cloned() {
        depth += 1;
        cur = b;
    }
    if depth == 0 {
        "w".to_string()
    } else {
        format!("w{}", depth + 1)
    }
}

/// `Q(sqrt d)` for the discriminant class of an irreducible rational
/// quadratic, with `d` stripped of small square factors.
pub fn quadratic_field_for(p: &Poly) -> Result<Field> {
    let q = p.field();
    let m = p.monic();
    let (Scalar::Rational(b), Scalar::Rational(c)) = (m.coeff(1), m.coeff(0)) else {
        return Err(Error::invalid("quadratic field needs a rational quadratic"));
    };
    let disc = &b * &b - BigRational::from_integer(4.into()) * &c;
    if rational_sqrt(&disc).is_some() {
        return Err(Error::invalid(format!("{p} splits over Q")));
    }
    let d = strip_squares(&(disc.numer() * disc.denom()), 10_000);
    let modulus = Poly::new(q.clone(), vec![Scalar::Rational(BigRational::from_integer(-&d)), q.zero(), q.one()]);
    Field::extension_trusted(q, &modulus, &format!("sqrt({d})"))
}
