//! Browser bindings: the postulate table, the classification sweep and the
//! circuit evaluator. Each export returns a JSON string; the `*_json`
//! functions are the same operations without the JS boundary.

use opt_foundry::checkers::{classification_exclusion, postulate_table};
use opt_foundry::dsl::run_circuit;
use opt_foundry::theory::BackendKind;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_LEVEL: usize = 4;
const MAX_SAMPLES: usize = 200;

fn levels(s: &str) -> Result<Vec<usize>, String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("cannot read levels `{s}`"))?;
    if v.is_empty() || v.iter().any(|&l| l == 0 || l > MAX_LEVEL) {
        return Err(format!("levels must lie in 1..={MAX_LEVEL}"));
    }
    Ok(v)
}

pub fn postulate_table_json(levels_csv: &str, samples: usize, seed: u64) -> Result<String, String> {
    let lv = levels(levels_csv)?;
    let rep = postulate_table(&lv, samples.min(MAX_SAMPLES), seed).map_err(|e| e.to_string())?;
    serde_json::to_string(&rep).map_err(|e| e.to_string())
}

pub fn classify_json(n_max: usize) -> Result<String, String> {
    if !(2..=12).contains(&n_max) {
        return Err("n_max must lie in 2..=12".into());
    }
    let rep = classification_exclusion(2..=n_max).map_err(|e| e.to_string())?;
    serde_json::to_string(&rep).map_err(|e| e.to_string())
}

pub fn eval_circuit_json(source: &str, backend: &str, bindings: &str) -> Result<String, String> {
    let kind: BackendKind = backend.parse().map_err(|e: opt_foundry::Error| e.to_string())?;
    let bindings = if bindings.trim().is_empty() { "{}" } else { bindings };
    let ev = run_circuit(source, kind, bindings).map_err(|e| e.to_string())?;
    let values: Vec<Value> = ev
        .values
        .iter()
        .map(|(name, v)| {
            let rows: Vec<Vec<f64>> = v.matrix.row_iter().map(|r| r.iter().copied().collect()).collect();
            json!({
                "name": name,
                "wire": v.wire.to_string(),
                "scalar": v.scalar(),
                "matrix": rows,
            })
        })
        .collect();
    Ok(json!({ "backend": kind.name(), "values": values }).to_string())
}

#[wasm_bindgen(js_name = postulateTable)]
pub fn postulate_table_js(levels_csv: &str, samples: u32, seed: u32) -> Result<String, JsValue> {
    postulate_table_json(levels_csv, samples as usize, seed as u64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = classify)]
pub fn classify_js(n_max: u32) -> Result<String, JsValue> {
    classify_json(n_max as usize).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = evalCircuit)]
pub fn eval_circuit_js(source: &str, backend: &str, bindings: &str) -> Result<String, JsValue> {
    eval_circuit_json(source, backend, bindings).map_err(|e| JsValue::from_str(&e))
}
