//! Verb dispatch for the `etale` command-line tool. Every verb reads JSON
//! and produces JSON; see the README for the input shapes.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use etale_core::error::{Error, ErrorClass, Result};
use etale_core::etale::EtaleSubalgebra;
use etale_core::factor::splitting_extension;
use etale_core::moduli::{
    ideal_system_from_subalgebra, lagrange_idempotents, phi, psi, subalgebra_from_ideal_system,
    IdealSystem, PsiConfig,
};
use etale_core::oracle::{enum_all_etale_subalgebras, enum_etale_subalgebras, verify_moduli_count, DEFAULT_BUDGET};
use etale_core::plucker::{
    line_quadric_intersect, pair_to_line, plucker_embed, plucker_inverse, PairKind,
    PointPairOnQuadric, QuadraticSpace,
};
use etale_core::serial::*;
use etale_core::{Algebra, Field, Partition, RightIdeal};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Minpoly,
    Idempotents,
    Psi,
    Phi,
    Type,
    IsSubfield,
    IdealSystem,
    FromIdealSystem,
    Plucker,
    PluckerInv,
    Intersect,
    PairToLine,
    Enumerate,
    VerifyModuli,
}

pub const VERBS: [(&str, Verb); 14] = [
    ("minpoly", Verb::Minpoly),
    ("idempotents", Verb::Idempotents),
    ("psi", Verb::Psi),
    ("phi", Verb::Phi),
    ("type", Verb::Type),
    ("is-subfield", Verb::IsSubfield),
    ("ideal-system", Verb::IdealSystem),
    ("from-ideal-system", Verb::FromIdealSystem),
    ("plucker", Verb::Plucker),
    ("plucker-inv", Verb::PluckerInv),
    ("intersect", Verb::Intersect),
    ("pair-to-line", Verb::PairToLine),
    ("enumerate", Verb::Enumerate),
    ("verify-moduli", Verb::VerifyModuli),
];

impl FromStr for Verb {
    type Err = Error;

    fn from_str(s: &str) -> Result<Verb> {
        VERBS
            .iter()
            .find(|(name, _)| *name == s)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::Parse(format!("unknown verb {s:?}")))
    }
}

impl fmt::Display for Verb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = VERBS.iter().find(|(_, v)| v == self).map(|(n, _)| *n).expect("every verb is named");
        f.write_str(name)
    }
}

/// A parsed invocation.
#[derive(Clone, Debug)]
pub struct Request {
    pub verb: Verb,
    pub algebra: Option<Value>,
    pub input: Option<Value>,
    pub rho: Option<String>,
    pub budget: u128,
    pub timing: bool,
}

impl Request {
    pub fn new(verb: Verb) -> Request {
        Request { verb, algebra: None, input: None, rho: None, budget: DEFAULT_BUDGET, timing: false }
    }

    pub fn algebra(mut self, v: Value) -> Request {
        self.algebra = Some(v);
        self
    }

    pub fn input(mut self, v: Value) -> Request {
        self.input = Some(v);
        self
    }

    pub fn rho(mut self, r: &str) -> Request {
        self.rho = Some(r.to_string());
        self
    }
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Malformed => 1,
        ErrorClass::Domain => 2,
        ErrorClass::Budget => 3,
    }
}

/// Inline JSON (starting with `{`, `[` or `"`), `-` for standard input, or a
/// file path.
pub fn load_json(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') || t.starts_with('"') {
        arg.to_string()
    } else if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

/// Indented JSON with a trailing newline. Arrays of scalars (and arrays of
/// such arrays at the innermost level) stay on one line.
pub fn render(v: &Value) -> String {
    let mut s = String::new();
    write_value(&mut s, v, 0);
    s.push('\n');
    s
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && (!x.is_array() || x.as_array().unwrap().iter().all(|y| !y.is_array() && !y.is_object()))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth + 1);
    match v {
        Value::Object(o) if !o.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in o.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < o.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(depth));
            out.push('}');
        }
        Value::Array(a) if !a.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad);
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(depth));
            out.push(']');
        }
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, x, depth + 1);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn need_algebra(req: &Request) -> Result<Algebra> {
    let v = req.algebra.as_ref().ok_or_else(|| Error::Parse("this verb needs --algebra".into()))?;
    algebra_from_json(v)
}

fn need_input(req: &Request) -> Result<&Value> {
    req.input.as_ref().ok_or_else(|| Error::Parse("this verb needs --input".into()))
}

/// `input[key]` when the input is an object, otherwise the input itself.
fn operand<'a>(input: &'a Value, key: &str) -> Result<&'a Value> {
    match input {
        Value::Object(o) => o.get(key).ok_or_else(|| Error::Parse(format!("input needs \"{key}\""))),
        other => Ok(other),
    }
}

fn need_rho(req: &Request) -> Result<Partition> {
    let s = req.rho.as_deref().ok_or_else(|| Error::Parse("this verb needs --rho".into()))?;
    s.parse()
}

fn subalgebra_operand(alg: &Algebra, input: &Value, key: &str) -> Result<EtaleSubalgebra> {
    let space = subspace_from_json(alg.field(), alg.dim(), operand(input, key)?)?;
    EtaleSubalgebra::new(alg, space)
}

/// The field for the geometry verbs: `input.field`, else the algebra's,
/// else the rationals.
fn geometry_field(req: &Request, input: &Value) -> Result<Field> {
    if let Some(f) = input.get("field") {
        return field_from_json(f);
    }
    match &req.algebra {
        Some(a) => Ok(algebra_from_json(a)?.field().clone()),
        None => Ok(Field::rationals()),
    }
}

fn quadratic_operand(f: &Field, input: &Value) -> Result<QuadraticSpace> {
    if let Some(g) = input.get("gram") {
        return QuadraticSpace::new(matrix_from_json(f, g)?);
    }
    match input.get("form").and_then(Value::as_str) {
        Some("split") | None => QuadraticSpace::split4(f),
        Some("sum_of_squares") => QuadraticSpace::sum_of_squares(f, 4),
        Some(other) => Err(Error::Parse(format!("unknown form {other:?}; use \"split\", \"sum_of_squares\" or a \"gram\" matrix"))),
    }
}

fn pair_json(pp: &PointPairOnQuadric) -> Result<Value> {
    let mut out = point_pair_to_json(pp);
    if pp.kind() != PairKind::Contained {
        let (k, pts) = pp.points()?;
        out["points_field"] = field_to_json(&k);
        out["points"] = vectors_to_json(&k, &pts);
    }
    Ok(out)
}

fn type_json(p: &Partition) -> Value {
    json!(p.parts())
}

/// Execute one request.
pub fn run(req: &Request) -> Result<Value> {
    match req.verb {
        Verb::Minpoly => {
            let alg = need_algebra(req)?;
            let a = element_from_json(&alg, operand(need_input(req)?, "element")?)?;
            let mp = a.min_poly();
            Ok(json!({
                "degree": mp.degree(),
                "coefficients": vector_to_json(alg.field(), mp.coeffs()),
                "text": mp.to_string(),
            }))
        }
        Verb::Idempotents => {
            let alg = need_algebra(req)?;
            let input = need_input(req)?;
            let a = element_from_json(&alg, operand(input, "element")?)?;
            let (k, roots, ak) = match input.get("roots") {
                Some(r) => (alg.field().clone(), vector_from_json(alg.field(), r)?, a),
                None => {
                    let (k, roots) = splitting_extension(&a.min_poly())?;
                    let algk = alg.base_change(&k)?;
                    let ak = a.base_change(&algk)?;
                    (k, roots, ak)
                }
            };
            let es = lagrange_idempotents(&ak, &roots)?;
            Ok(json!({
                "field": field_to_json(&k),
                "roots": vector_to_json(&k, &roots),
                "idempotents": es.iter().map(element_to_json).collect::<Vec<_>>(),
            }))
        }
        Verb::Psi => {
            let alg = need_algebra(req)?;
            let a = element_from_json(&alg, operand(need_input(req)?, "element")?)?;
            let e = psi(&a)?;
            let mut out = subalgebra_to_json(&e);
            out["type"] = type_json(&e.type_of()?);
            Ok(out)
        }
        Verb::Phi => {
            let alg = need_algebra(req)?;
            let input = need_input(req)?;
            let target = subalgebra_operand(&alg, input, "subalgebra")?;
            let a = element_from_json(&alg, operand(input, "generator")?)?;
            let reference = match input.get("reference") {
                Some(r) => EtaleSubalgebra::new(&alg, subspace_from_json(alg.field(), alg.dim(), r)?)?,
                None => psi(&a)?,
            };
            let cfg = match input.get("complement") {
                Some(l) => PsiConfig::new(reference, a, subspace_from_json(alg.field(), alg.dim(), l)?)?,
                None => PsiConfig::standard(reference, a)?,
            };
            let b = phi(&target, &cfg)?;
            Ok(json!({
                "element": element_to_json(&b),
                "complement": subspace_to_json(cfg.complement()),
            }))
        }
        Verb::Type => {
            let alg = need_algebra(req)?;
            let e = subalgebra_operand(&alg, need_input(req)?, "subalgebra")?;
            let (k, _) = e.minimal_idempotents()?;
            Ok(json!({"type": type_json(&e.type_of()?), "splitting_field": field_to_json(&k)}))
        }
        Verb::IsSubfield => {
            let alg = need_algebra(req)?;
            let e = subalgebra_operand(&alg, need_input(req)?, "subalgebra")?;
            Ok(json!({"is_subfield": e.is_subfield()?}))
        }
        Verb::IdealSystem => {
            let alg = need_algebra(req)?;
            let e = subalgebra_operand(&alg, need_input(req)?, "subalgebra")?;
            Ok(ideal_system_to_json(&ideal_system_from_subalgebra(&e)?))
        }
        Verb::FromIdealSystem => {
            let alg = need_algebra(req)?;
            let input = need_input(req)?;
            let k = match input.get("field") {
                Some(f) => field_from_json(f)?,
                None => alg.field().clone(),
            };
            let algk = alg.base_change(&k)?;
            let sys = if let Some(es) = input.get("idempotents") {
                let es = es
                    .as_array()
                    .ok_or_else(|| Error::Parse("\"idempotents\" must be an array".into()))?
                    .iter()
                    .map(|e| element_from_json(&algk, e))
                    .collect::<Result<Vec<_>>>()?;
                IdealSystem::from_idempotents(&algk, es)?
            } else {
                let ideals = operand(input, "ideals")?
                    .as_array()
                    .ok_or_else(|| Error::Parse("\"ideals\" must be an array".into()))?
                    .iter()
                    .map(|i| RightIdeal::new(&algk, subspace_from_json(&k, algk.dim(), i)?))
                    .collect::<Result<Vec<_>>>()?;
                IdealSystem::from_ideals(&algk, ideals)?
            };
            let e = subalgebra_from_ideal_system(&sys)?;
            let descended = e.descend(&alg).map(|d| subspace_to_json(d.space()));
            Ok(json!({
                "field": field_to_json(&k),
                "type": type_json(&sys.partition()),
                "basis": subspace_to_json(e.space()),
                "descended": descended,
            }))
        }
        Verb::Plucker => {
            let input = need_input(req)?;
            let f = geometry_field(req, input)?;
            let w = subspace_from_json(&f, 4, operand(input, "plane")?)?;
            let p = plucker_embed(&w)?;
            Ok(json!({"point": plucker_to_json(&p), "relation": scalar_to_json(&f, &p.relation())}))
        }
        Verb::PluckerInv => {
            let input = need_input(req)?;
            let f = geometry_field(req, input)?;
            let p = plucker_from_json(&f, operand(input, "point")?)?;
            Ok(json!({"plane": subspace_to_json(&plucker_inverse(&p)?)}))
        }
        Verb::Intersect => {
            let input = need_input(req)?;
            let f = geometry_field(req, input)?;
            let qs = quadratic_operand(&f, input)?;
            let w = subspace_from_json(&f, qs.dim(), operand(input, "plane")?)?;
            pair_json(&line_quadric_intersect(&w, &qs)?)
        }
        Verb::PairToLine => {
            let input = need_input(req)?;
            let f = geometry_field(req, input)?;
            let qs = quadratic_operand(&f, input)?;
            let pp = if let Some(pts) = input.get("points") {
                let over = match input.get("over") {
                    Some(k) => field_from_json(k)?,
                    None => f.clone(),
                };
                let pts = vectors_from_json(&over, pts)?;
                if pts.len() != 2 {
                    return Err(Error::Parse("\"points\" must hold exactly two points".into()));
                }
                PointPairOnQuadric::from_points(&qs, &pts[0], &pts[1], &over)?
            } else {
                let w = subspace_from_json(&f, qs.dim(), operand(input, "plane")?)?;
                line_quadric_intersect(&w, &qs)?
            };
            Ok(json!({"plane": subspace_to_json(&pair_to_line(&pp)?), "form": vector_to_json(&f, pp.form())}))
        }
        Verb::Enumerate => {
            let alg = need_algebra(req)?;
            let rho = req.rho.as_deref().map(str::parse::<Partition>).transpose()?;
            let m = req.input.as_ref().and_then(|i| i.get("m")).and_then(Value::as_u64);
            let found = match (&rho, m) {
                (Some(r), _) => enum_etale_subalgebras(&alg, r.len(), req.budget)?,
                (None, Some(m)) => enum_etale_subalgebras(&alg, m as usize, req.budget)?,
                (None, None) => enum_all_etale_subalgebras(&alg, req.budget)?,
            };
            let mut items = Vec::new();
            for e in &found {
                let t = e.type_of()?;
                if rho.as_ref().is_some_and(|r| *r != t) {
                    continue;
                }
                let mut item = subalgebra_to_json(e);
                item["type"] = type_json(&t);
                item["is_subfield"] = json!(e.is_subfield()?);
                items.push(item);
            }
            Ok(json!({"algebra": algebra_to_json(&alg), "count": items.len(), "subalgebras": items}))
        }
        Verb::VerifyModuli => {
            let alg = need_algebra(req)?;
            let rho = need_rho(req)?;
            let mut report = verify_moduli_count(&alg, &rho, req.budget)?;
            if !req.timing {
                report.seconds = None;
            }
            let mut out = serde_json::to_value(&report).expect("report serializes");
            out["algebra"] = algebra_to_json(&alg);
            Ok(out)
        }
    }
}
