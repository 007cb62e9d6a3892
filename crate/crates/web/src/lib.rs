//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export returns a JSON string; errors surface as JavaScript exceptions.

use serde_json::{json, Value};
use telewit::decomp::{decompose, measurement_count, tomography_parameter_count};
use telewit::fef::{fef_isotropic, fef_maximize, FefConfig};
use telewit::scan::scan_isotropic;
use telewit::states::isotropic_state;
use telewit::witness::{schmidt_interval, witness_tw_from_overlap};
use wasm_bindgen::prelude::*;

fn to_string(v: Value) -> String {
    v.to_string()
}

pub fn scan_json(d: usize, f0: f64, beta_min: f64, beta_max: f64, steps: usize) -> Result<String, String> {
    let rows = scan_isotropic(d, f0, beta_min, beta_max, steps).map_err(|e| e.to_string())?;
    let d2 = (d * d) as f64;
    let bands: Vec<Value> = (2..=d)
        .map(|r| {
            let (lo, hi) = schmidt_interval(d, r);
            json!({"r": r, "lo": lo, "hi": hi})
        })
        .collect();
    Ok(to_string(json!({
        "d": d,
        "f0": f0,
        "witness_root": (d2 * f0 - 1.0) / (d2 - 1.0),
        "ppt_root": 1.0 / (d as f64 + 1.0),
        "schmidt_bands": bands,
        "rows": rows,
    })))
}

pub fn fef_json(d: usize, beta: f64, restarts: usize, seed: u64) -> Result<String, String> {
    let rho = isotropic_state(d, beta).map_err(|e| e.to_string())?;
    let cfg = FefConfig {
        restarts: restarts.max(1),
        seed,
        ..FefConfig::default()
    };
    let r = fef_maximize(&rho, &cfg).map_err(|e| e.to_string())?;
    let exact = fef_isotropic(d, beta).map_err(|e| e.to_string())?;
    Ok(to_string(json!({
        "d": d,
        "beta": beta,
        "numeric": r.value,
        "closed_form": exact,
        "converged": r.converged,
        "iterations": r.iterations,
        "useful": r.value > 1.0 / d as f64 + telewit::fef::USEFUL_GUARD,
    })))
}

pub fn decomposition_json(d: usize, f0: f64) -> Result<String, String> {
    let w = witness_tw_from_overlap(d, f0).map_err(|e| e.to_string())?;
    let rep = decompose(&w).map_err(|e| e.to_string())?;
    let terms: Vec<Value> = rep
        .nonzero()
        .map(|c| json!({"a": c.label_a, "b": c.label_b, "value": c.value}))
        .collect();
    Ok(to_string(json!({
        "d": d,
        "f0": f0,
        "terms": terms,
        "settings": measurement_count(&rep),
        "tomography": tomography_parameter_count(d),
        "reconstruction_error": rep.reconstruction_error,
    })))
}

fn js<T>(r: Result<T, String>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// Isotropic sweep with witness value, PPT margin and Schmidt class per `β`.
#[wasm_bindgen]
pub fn scan(d: usize, f0: f64, beta_min: f64, beta_max: f64, steps: usize) -> Result<String, JsError> {
    js(scan_json(d, f0, beta_min, beta_max, steps))
}

/// Numerical FEF of an isotropic state next to its closed form.
#[wasm_bindgen]
pub fn fef(d: usize, beta: f64, restarts: usize, seed: u64) -> Result<String, JsError> {
    js(fef_json(d, beta, restarts, seed))
}

/// Nonzero local-basis terms of `T_W`.
#[wasm_bindgen]
pub fn decomposition(d: usize, f0: f64) -> Result<String, JsError> {
    js(decomposition_json(d, f0))
}
