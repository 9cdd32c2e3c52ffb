//! WebAssembly bindings for a handful of `qcoinv` operations.
//!
//! The plain functions return rendered text and are usable natively; the
//! `#[wasm_bindgen]` wrappers turn errors into JS exceptions.

use qcoinv::cli::parse::parse_expr;
use qcoinv::coact::{CoactionKind, Kind};
use qcoinv::coinv;
use qcoinv::scalar::Notation;
use qcoinv::{Error, GLElem, Result, Slot};
use wasm_bindgen::prelude::*;

/// Largest matrix size the page accepts.
pub const MAX_N: usize = 3;

// browsers have one thread and no patience: keep the graded work small
fn max_degree(n: usize) -> usize {
    match n {
        1 | 2 => 6,
        _ => 3,
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::Invalid(format!("N must be between 1 and {}", MAX_N)));
    }
    Ok(())
}

fn check_degree(n: usize, d: usize) -> Result<()> {
    if d > max_degree(n) {
        return Err(Error::Invalid(format!(
            "degree {} is too large for N = {} here (at most {})",
            d,
            n,
            max_degree(n)
        )));
    }
    Ok(())
}

fn notation(q_power: bool) -> Notation {
    if q_power {
        Notation::Q
    } else {
        Notation::S
    }
}

pub fn coaction_kind(coaction: &str, group: &str) -> Result<CoactionKind> {
    let kind = match coaction {
        "alpha" => Kind::Alpha,
        "beta" => Kind::Beta,
        "lambda" => Kind::Lambda,
        "rho" => Kind::Rho,
        _ => return Err(Error::Invalid(format!("unknown coaction {:?}", coaction))),
    };
    let target = match group {
        "gl" => Slot::Gl,
        "sl" => Slot::Sl,
        _ => return Err(Error::Invalid(format!("unknown group {:?}", group))),
    };
    Ok(CoactionKind::new(kind, target))
}

pub fn normal_form_text(expr: &str, n: usize, q_power: bool) -> Result<String> {
    check_size(n)?;
    Ok(parse_expr(expr, n)?.to_expr_in(notation(q_power)))
}

pub fn hilbert_text(n: usize, coaction: &str, group: &str, degree: usize) -> Result<String> {
    check_size(n)?;
    check_degree(n, degree)?;
    let dims = coinv::hilbert_prefix(coaction_kind(coaction, group)?, n, degree);
    Ok(dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "))
}

pub fn basis_text(n: usize, coaction: &str, group: &str, degree: usize, q_power: bool) -> Result<String> {
    check_size(n)?;
    check_degree(n, degree)?;
    let b = coinv::coinvariant_basis(coaction_kind(coaction, group)?, n, degree);
    if b.basis.is_empty() {
        return Ok("(no coinvariants in this degree)".into());
    }
    Ok(b.basis.into_iter().map(|v| GLElem::from_alg(v).to_expr_in(notation(q_power))).collect::<Vec<_>>().join("\n"))
}

fn js(r: Result<String>) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn normal_form(expr: &str, n: usize, q_power: bool) -> std::result::Result<String, JsError> {
    js(normal_form_text(expr, n, q_power))
}

#[wasm_bindgen]
pub fn hilbert_prefix(n: usize, coaction: &str, group: &str, degree: usize) -> std::result::Result<String, JsError> {
    js(hilbert_text(n, coaction, group, degree))
}

#[wasm_bindgen]
pub fn coinvariant_basis(
    n: usize,
    coaction: &str,
    group: &str,
    degree: usize,
    q_power: bool,
) -> std::result::Result<String, JsError> {
    js(basis_text(n, coaction, group, degree, q_power))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_reorders() {
        assert_eq!(normal_form_text("x[2,1]*x[1,1]", 2, true).unwrap(), "q^-1*x[1,1]*x[2,1]");
        assert!(normal_form_text("x[3,1]", 2, false).is_err());
        assert!(normal_form_text("x[1,1]", 4, false).is_err());
    }

    #[test]
    fn hilbert_matches_partitions() {
        assert_eq!(hilbert_text(2, "beta", "sl", 5).unwrap(), "1, 1, 2, 2, 3, 3");
        assert!(hilbert_text(3, "alpha", "sl", 4).is_err());
        assert!(hilbert_text(2, "gamma", "sl", 1).is_err());
    }

    #[test]
    fn degree_one_basis_is_the_trace() {
        assert_eq!(basis_text(2, "alpha", "sl", 1, true).unwrap(), "x[1,1] + x[2,2]");
    }
}
