//! JSON encodings of fields, scalars, algebras and the objects built on
//! them. Rationals are written as `"p/q"` strings, prime field residues as
//! numbers, and extension field elements as coefficient arrays (lowest
//! degree first).

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::algebra::{Algebra, AlgebraKind, Element};
use crate::error::{Error, Result};
use crate::etale::EtaleSubalgebra;
use crate::field::{is_prime, Field, Scalar};
use crate::linalg::{Matrix, Subspace};
use crate::moduli::IdealSystem;
use crate::partition::Partition;
use crate::plucker::{PluckerPoint, PointPairOnQuadric};
use crate::poly::Poly;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// `"Q"`, `"GF(p)"`, `"GF(p^k)"` / `"GF(q)"` (generator `w`), or
/// `{"base": .., "modulus": [..], "name": ..}`.
pub fn field_from_json(v: &Value) -> Result<Field> {
    match v {
        Value::String(s) => parse_field_name(s),
        Value::Object(o) => {
            let base = field_from_json(o.get("base").ok_or_else(|| parse_err("field needs \"base\""))?)?;
            let modulus = o
                .get("modulus")
                .and_then(Value::as_array)
                .ok_or_else(|| parse_err("field needs a \"modulus\" array"))?
                .iter()
                .map(|c| scalar_from_json(&base, c))
                .collect::<Result<Vec<_>>>()?;
            let name = o.get("name").and_then(Value::as_str).unwrap_or("w");
            Field::extension(&base, &Poly::new(base.clone(), modulus), name)
        }
        _ => Err(parse_err(format!("cannot read a field from {v}"))),
    }
}

fn parse_field_name(s: &str) -> Result<Field> {
    let t = s.trim();
    if t == "Q" || t == "QQ" {
        return Ok(Field::rationals());
    }
    let inner = t
        .strip_prefix("GF(")
        .or_else(|| t.strip_prefix("F("))
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| parse_err(format!("unknown field {s:?}")))?;
    let (p, k) = match inner.split_once('^') {
        Some((p, k)) => (
            p.trim().parse::<u64>().map_err(|e| parse_err(format!("field {s:?}: {e}")))?,
            k.trim().parse::<usize>().map_err(|e| parse_err(format!("field {s:?}: {e}")))?,
        ),
        None => {
            let q = inner.trim().parse::<u64>().map_err(|e| parse_err(format!("field {s:?}: {e}")))?;
            prime_power(q).ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?
        }
    };
    let fp = Field::prime(p)?;
    if k == 1 {
        Ok(fp)
    } else {
        Field::finite_extension(&fp, k, "w")
    }
}

fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1 && is_prime(p)).then_some((p, k))
}

pub fn field_to_json(f: &Field) -> Value {
    match (f.base(), f.modulus()) {
        (Some(base), Some(m)) => json!({
            "base": field_to_json(base),
            "modulus": m.coeffs().iter().map(|c| scalar_to_json(base, c)).collect::<Vec<_>>(),
            "name": f.generator_name().unwrap_or("w"),
        }),
        _ if f.is_rationals() => json!("Q"),
        _ => json!(format!("GF({})", f.characteristic())),
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |e: &dyn std::fmt::Display| parse_err(format!("rational {s:?}: {e}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|e| bad(&e))?;
            let d: BigInt = d.trim().parse().map_err(|e| bad(&e))?;
            if d == BigInt::from(0) {
                return Err(parse_err(format!("rational {s:?} has zero denominator")));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|e| bad(&e))?)),
    }
}

pub fn scalar_from_json(f: &Field, v: &Value) -> Result<Scalar> {
    if let (Some(base), Some(m)) = (f.base(), f.modulus()) {
        return match v {
            Value::Array(cs) => {
                let deg = m.degree().expect("nonzero modulus");
                if cs.len() > deg {
                    return Err(parse_err(format!("{} coefficients for a degree {deg} extension", cs.len())));
                }
                let mut coeffs = cs.iter().map(|c| scalar_from_json(base, c)).collect::<Result<Vec<_>>>()?;
                coeffs.resize(deg, base.zero());
                Ok(Scalar::Poly(coeffs))
            }
            // a base field value embeds as a constant
            _ => f.embed(&scalar_from_json(base, v)?, base),
        };
    }
    let r = match v {
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| parse_err(format!("non-integer number {n}; write rationals as \"p/q\"")))?;
            BigRational::from_integer(i.into())
        }
        Value::String(s) => parse_rational(s)?,
        _ => return Err(parse_err(format!("cannot read a scalar of {f} from {v}"))),
    };
    f.from_rational(&r)
}

pub fn scalar_to_json(f: &Field, x: &Scalar) -> Value {
    match x {
        Scalar::Rational(_) => json!(x.to_string()),
        Scalar::Residue(r) => json!(r),
        Scalar::Poly(cs) => {
            let base = f.base().expect("extension field");
            Value::Array(cs.iter().map(|c| scalar_to_json(base, c)).collect())
        }
    }
}

pub fn vector_from_json(f: &Field, v: &Value) -> Result<Vec<Scalar>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("expected an array, got {v}")))?
        .iter()
        .map(|c| scalar_from_json(f, c))
        .collect()
}

pub fn vector_to_json(f: &Field, v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|x| scalar_to_json(f, x)).collect())
}

pub fn vectors_from_json(f: &Field, v: &Value) -> Result<Vec<Vec<Scalar>>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("expected an array of vectors, got {v}")))?
        .iter()
        .map(|r| vector_from_json(f, r))
        .collect()
}

pub fn vectors_to_json(f: &Field, rows: &[Vec<Scalar>]) -> Value {
    Value::Array(rows.iter().map(|r| vector_to_json(f, r)).collect())
}

pub fn matrix_from_json(f: &Field, v: &Value) -> Result<Matrix> {
    let rows = vectors_from_json(f, v)?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(parse_err("matrix rows have different lengths"));
    }
    Ok(Matrix::from_rows(f, cols, &rows))
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    vectors_to_json(m.field(), &m.rows())
}

/// A subspace from a list of spanning vectors of the given length.
pub fn subspace_from_json(f: &Field, ambient: usize, v: &Value) -> Result<Subspace> {
    let rows = vectors_from_json(f, v)?;
    if let Some(r) = rows.iter().find(|r| r.len() != ambient) {
        return Err(Error::invalid(format!("vector of length {} in a space of dimension {ambient}", r.len())));
    }
    Ok(Subspace::span(f, ambient, &rows))
}

/// The RREF basis.
pub fn subspace_to_json(s: &Subspace) -> Value {
    vectors_to_json(s.field(), s.basis())
}

/// `"1,1"`, `"[2,1]"` or `[2, 1]`.
pub fn partition_from_json(v: &Value) -> Result<Partition> {
    match v {
        Value::String(s) => s.parse(),
        Value::Array(a) => Partition::new(
            a.iter()
                .map(|x| x.as_u64().map(|n| n as usize).ok_or_else(|| parse_err(format!("partition entry {x}"))))
                .collect::<Result<Vec<_>>>()?,
        ),
        _ => Err(parse_err(format!("cannot read a partition from {v}"))),
    }
}

/// `{"kind": "matrix", "n": 2, "field": "GF(3)"}`,
/// `{"kind": "quaternion", "a": -1, "b": -1, "field": "Q"}` or
/// `{"kind": "structure_constants", "field": .., "table": [[[..]]], "one": [..], "degree": n}`
/// where `table[i][j]` holds the coordinates of `b_i b_j`.
pub fn algebra_from_json(v: &Value) -> Result<Algebra> {
    let o = v.as_object().ok_or_else(|| parse_err("algebra descriptor must be an object"))?;
    let field = match o.get("field") {
        Some(f) => field_from_json(f)?,
        None => Field::rationals(),
    };
    let kind = o.get("kind").and_then(Value::as_str).ok_or_else(|| parse_err("algebra needs a \"kind\""))?;
    match kind {
        "matrix" => {
            let n = o.get("n").and_then(Value::as_u64).ok_or_else(|| parse_err("matrix algebra needs \"n\""))?;
            Algebra::matrix(n as usize, &field)
        }
        "quaternion" => {
            let get = |k: &str| {
                o.get(k)
                    .ok_or_else(|| parse_err(format!("quaternion algebra needs \"{k}\"")))
                    .and_then(|x| scalar_from_json(&field, x))
            };
            Algebra::quaternion(&get("a")?, &get("b")?, &field)
        }
        "structure_constants" => {
            let table = o
                .get("table")
                .and_then(Value::as_array)
                .ok_or_else(|| parse_err("structure constants need a \"table\""))?
                .iter()
                .map(|row| vectors_from_json(&field, row))
                .collect::<Result<Vec<_>>>()?;
            let one = vector_from_json(&field, o.get("one").ok_or_else(|| parse_err("structure constants need \"one\""))?)?;
            let degree = o.get("degree").and_then(Value::as_u64).map(|d| d as usize);
            Algebra::from_structure_constants(&field, &table, &one, degree)
        }
        other => Err(parse_err(format!("unknown algebra kind {other:?}"))),
    }
}

pub fn algebra_to_json(a: &Algebra) -> Value {
    let f = a.field();
    match a.kind() {
        AlgebraKind::Matrix { n } => json!({"kind": "matrix", "n": n, "field": field_to_json(f)}),
        AlgebraKind::Quaternion { a: x, b: y } => json!({
            "kind": "quaternion",
            "a": scalar_to_json(f, x),
            "b": scalar_to_json(f, y),
            "field": field_to_json(f),
        }),
        AlgebraKind::StructureConstants => json!({
            "kind": "structure_constants",
            "field": field_to_json(f),
            "table": a.structure_constants().iter().map(|row| vectors_to_json(f, row)).collect::<Vec<_>>(),
            "one": vector_to_json(f, a.unity_coords()),
            "degree": a.degree(),
        }),
    }
}

/// Coordinates, or for matrix algebras also a nested `n x n` array.
pub fn element_from_json(a: &Algebra, v: &Value) -> Result<Element> {
    let f = a.field();
    if let (AlgebraKind::Matrix { n }, Value::Array(rows)) = (a.kind(), v) {
        let n = *n;
        let nested = n > 1 && rows.len() == n && rows.iter().all(|r| r.as_array().is_some_and(|r| r.len() == n));
        if nested {
            let flat = rows
                .iter()
                .flat_map(|r| r.as_array().expect("checked").iter())
                .map(|c| scalar_from_json(f, c))
                .collect::<Result<Vec<_>>>()?;
            return a.element(flat);
        }
    }
    a.element(vector_from_json(f, v)?)
}

pub fn element_to_json(x: &Element) -> Value {
    vector_to_json(x.field(), x.coords())
}

pub fn subalgebra_to_json(e: &EtaleSubalgebra) -> Value {
    json!({"dim": e.dim(), "basis": subspace_to_json(e.space())})
}

pub fn ideal_system_to_json(s: &IdealSystem) -> Value {
    let f = s.field();
    json!({
        "field": field_to_json(f),
        "ranks": s.ranks(),
        "ideals": s.ideals().iter().map(|i| subspace_to_json(i.space())).collect::<Vec<_>>(),
        "idempotents": s.idempotents().iter().map(element_to_json).collect::<Vec<_>>(),
    })
}

pub fn plucker_to_json(p: &PluckerPoint) -> Value {
    vector_to_json(p.field(), p.coords())
}

pub fn plucker_from_json(f: &Field, v: &Value) -> Result<PluckerPoint> {
    PluckerPoint::new(f, vector_from_json(f, v)?)
}

pub fn point_pair_to_json(pp: &PointPairOnQuadric) -> Value {
    let f = pp.plane().field();
    json!({
        "plane": subspace_to_json(pp.plane()),
        "form": vector_to_json(f, pp.form()),
        "kind": pp.kind().to_string(),
    })
}
