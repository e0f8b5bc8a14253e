//! WebAssembly entry points for the browser demo. Each takes and returns
//! JSON text; errors come back as a message string.

use etale_cli::{render, run, Request, Verb};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

// enumerations in the browser stay small enough to feel interactive
const WEB_BUDGET: u128 = 1 << 20;

fn parse(label: &str, text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| format!("{label}: {e}"))
}

fn call(req: &Request) -> Result<Value, String> {
    run(req).map_err(|e| e.to_string())
}

/// Minimal polynomial, Lagrange idempotents and the generated subalgebra
/// with its type. A non-generator still reports the first two.
#[wasm_bindgen]
pub fn explore(algebra: &str, element: &str) -> Result<String, String> {
    let alg = parse("algebra", algebra)?;
    let el = parse("element", element)?;
    let req = |verb| Request::new(verb).algebra(alg.clone()).input(el.clone());
    let minpoly = call(&req(Verb::Minpoly))?;
    let idempotents = call(&req(Verb::Idempotents))?;
    let subalgebra = match call(&req(Verb::Psi)) {
        Ok(mut sub) => {
            let basis = json!({ "subalgebra": sub["basis"].clone() });
            let field = call(&Request::new(Verb::IsSubfield).algebra(alg.clone()).input(basis))?;
            sub["is_subfield"] = field["is_subfield"].clone();
            sub
        }
        Err(e) => json!({ "error": e }),
    };
    Ok(render(&json!({
        "minpoly": minpoly,
        "idempotents": idempotents,
        "subalgebra": subalgebra,
    })))
}

/// Counts etale subalgebras of type `rho` against ideal systems and
/// checks the bijection between them.
#[wasm_bindgen]
pub fn verify_moduli(algebra: &str, rho: &str) -> Result<String, String> {
    let mut req = Request::new(Verb::VerifyModuli).algebra(parse("algebra", algebra)?).rho(rho);
    req.budget = WEB_BUDGET;
    Ok(render(&call(&req)?))
}

/// Intersects a plane in 4-space with a quadric surface.
#[wasm_bindgen]
pub fn intersect(input: &str) -> Result<String, String> {
    Ok(render(&call(&Request::new(Verb::Intersect).input(parse("input", input)?))?))
}
