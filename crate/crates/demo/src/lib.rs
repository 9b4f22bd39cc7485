//! Browser bindings for the `www/` page. Every export returns a JSON string;
//! the plain `*_json` functions carry the logic so they can be tested
//! natively.

use gyb_braid::braidrep::{check_gyb, eval_word, operator_order};
use gyb_braid::gates::{build_r_decomposed, build_r_direct};
use gyb_braid::image_group::{enumerate_image, symbolic_to_matrix, theoretical_order, word_to_symbolic};
use gyb_braid::qlinalg::max_entry_distance;
use gyb_braid::report::Backend;
use gyb_braid::{BraidWord, Operator, RepContext};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest strand count the page will evaluate densely (2^8 x 2^8 matrix).
pub const MAX_EVAL_N: usize = 7;

fn heatmap(op: &Operator) -> Value {
    let abs: Vec<f64> = op.entries().iter().map(|z| z.norm()).collect();
    let arg: Vec<f64> = op
        .entries()
        .iter()
        .map(|z| if z.norm() < 1e-12 { 0.0 } else { z.arg() })
        .collect();
    json!({ "dim": op.dim(), "abs": abs, "arg": arg })
}

/// Evaluates a braid word both as a matrix and as an element of the
/// semidirect product, and reports how far apart the two are.
pub fn evaluate_json(n: usize, m: u32, word: &str) -> Result<String, String> {
    if n > MAX_EVAL_N {
        return Err(format!("n = {n} is too large to draw; use n <= {MAX_EVAL_N}"));
    }
    let ctx = RepContext::new(n, m).map_err(|e| e.to_string())?;
    let w = BraidWord::parse(word, n).map_err(|e| e.to_string())?;
    let matrix = eval_word(&w, &ctx).map_err(|e| e.to_string())?;
    let normal = word_to_symbolic(&w, &ctx).map_err(|e| e.to_string())?;
    let residual = symbolic_to_matrix(&normal, &ctx)
        .and_then(|s| max_entry_distance(&matrix, &s))
        .map_err(|e| e.to_string())?;
    let order = normal.order(1 << 20);
    Ok(json!({
        "word": w.to_string(),
        "matrix": heatmap(&matrix),
        "normal_form": normal.to_json(),
        "normal_form_text": normal.to_string(),
        "order": order,
        "residual": residual,
    })
    .to_string())
}

/// The 8x8 matrix `R` for `m`, its gYB residual, its distance from the gate
/// product, and the order of `R`.
pub fn r_matrix_json(m: u32) -> Result<String, String> {
    let r = build_r_direct(m).map_err(|e| e.to_string())?;
    let gyb = check_gyb(&r, 1e-12).map_err(|e| e.to_string())?;
    let decomposed = build_r_decomposed(m)
        .and_then(|d| max_entry_distance(&r, &d))
        .map_err(|e| e.to_string())?;
    Ok(json!({
        "m": m,
        "matrix": heatmap(&r),
        "gyb_residual": gyb.residual_max,
        "decomposition_residual": decomposed,
        "order": operator_order(&r, 4 * m as u64, 1e-9),
    })
    .to_string())
}

/// Enumerates the image group from the braid generators and compares the
/// count with `m^(n(n-1)/2) n!`.
pub fn image_order_json(n: usize, m: u32, backend: &str, max_elements: u64) -> Result<String, String> {
    let backend = match backend {
        "matrix" => Backend::Matrix,
        "symbolic" => Backend::Symbolic,
        other => return Err(format!("unknown backend {other:?}")),
    };
    let predicted = theoretical_order(n, m).map_err(|e| e.to_string())?;
    if predicted > max_elements {
        return Err(format!(
            "predicted order {predicted} exceeds the limit of {max_elements} elements"
        ));
    }
    let ctx = RepContext::new(n, m).map_err(|e| e.to_string())?;
    let report = enumerate_image(&ctx, max_elements, backend).map_err(|e| e.to_string())?;
    Ok(report.to_structured_text())
}

#[wasm_bindgen]
pub fn evaluate(n: usize, m: u32, word: &str) -> Result<String, JsError> {
    evaluate_json(n, m, word).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn r_matrix(m: u32) -> Result<String, JsError> {
    r_matrix_json(m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn image_order(n: usize, m: u32, backend: &str, max_elements: u32) -> Result<String, JsError> {
    image_order_json(n, m, backend, max_elements as u64).map_err(|e| JsError::new(&e))
}
