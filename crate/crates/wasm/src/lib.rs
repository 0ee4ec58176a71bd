//! Browser bindings for the demo page in `www/`.
//!
//! Each export wraps a plain Rust function so that the logic can be tested
//! natively; only the wrappers touch `JsError`.

use std::f64::consts::PI;

use qmink::oracle::{self, Projection};
use qmink::product;
use qmink::{SphericalCap, UnitQuaternion};
use wasm_bindgen::prelude::*;

/// JSON of `U(a, s) ⊗ U(b, t)` for centers given as `[w, x, y, z]`
/// (normalized on input).
pub fn cap_product(a: &[f64], s: f64, b: &[f64], t: f64) -> Result<String, String> {
    let center = |q: &[f64]| -> Result<UnitQuaternion, String> {
        let arr: [f64; 4] = q.try_into().map_err(|_| format!("expected 4 components, got {}", q.len()))?;
        UnitQuaternion::normalize(qmink::Quaternion::from_array(arr)).map_err(|e| e.to_string())
    };
    let ca = SphericalCap::new(center(a)?, s).map_err(|e| e.to_string())?;
    let cb = SphericalCap::new(center(b)?, t).map_err(|e| e.to_string())?;
    Ok(product::product(&qmink::RotationSet::Cap(ca), &qmink::RotationSet::Cap(cb)).to_json())
}

/// A sampled preset product projected to R³, as flat `x, y, z` triples.
pub fn preset_cloud(preset: &str, method: &str, n: usize, seed: u32) -> Result<Vec<f32>, String> {
    let (a, b) = oracle::preset(preset).map_err(|e| e.to_string())?;
    let method: Projection = method.parse().map_err(|e: qmink::Error| e.to_string())?;
    let cloud = oracle::product_cloud(&a, &b, n, u64::from(seed)).map_err(|e| e.to_string())?;
    let projected = oracle::project_cloud(&cloud, method).map_err(|e| e.to_string())?;
    Ok(projected.coords.iter().map(|&c| c as f32).collect())
}

/// Enclosing-cap radius `η` of `C(c₁,0,δ) ⊗ C(c₂,0,δ)` for `steps`
/// values of `δ` spread over `(0, π]`, where `⟨c₁, c₂⟩ = k`. Returned as
/// flat `δ, η` pairs.
pub fn eta_curve(k: f64, steps: usize) -> Result<Vec<f64>, String> {
    if !(-1.0..=1.0).contains(&k) || k.abs() >= 1.0 - 1e-9 {
        return Err(format!("axis inner product {k} must lie strictly inside (-1, 1)"));
    }
    let mut out = Vec::with_capacity(2 * steps);
    for i in 1..=steps {
        let d = PI * i as f64 / steps as f64;
        let r = if d <= PI / 2.0 {
            product::corner_min_scalar_part(d, d, k)
        } else {
            product::min_scalar_part(d, d, k).value
        };
        out.extend([d, r.clamp(-1.0, 1.0).acos()]);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = capProduct)]
pub fn cap_product_js(a: &[f64], s: f64, b: &[f64], t: f64) -> Result<String, JsError> {
    cap_product(a, s, b, t).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = presetCloud)]
pub fn preset_cloud_js(preset: &str, method: &str, n: usize, seed: u32) -> Result<Vec<f32>, JsError> {
    preset_cloud(preset, method, n, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = etaCurve)]
pub fn eta_curve_js(k: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    eta_curve(k, steps).map_err(|e| JsError::new(&e))
}
