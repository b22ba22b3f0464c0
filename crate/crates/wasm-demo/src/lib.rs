//! Browser bindings for the demo page in `www/`.
//!
//! Each exported function takes an expression string and returns either a
//! flat `Float64Array` of coordinates or a JSON document. Errors become a
//! thrown JS string.

use plane_homeo::homeo::Support;
use plane_homeo::{
    certify_fixed_point_free, parse_expr, support_sample, winding_certificate, Certificate, Complex64, Disk, Homeo,
    WindingResult,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn parse(expr: &str) -> Result<Homeo, String> {
    parse_expr(expr).map_err(|e| e.to_string())
}

fn disk(cx: f64, cy: f64, r: f64) -> Result<Disk, String> {
    Disk::closed(Complex64::new(cx, cy), r).map_err(|e| e.to_string())
}

/// Images of the lines of a square grid over `[-extent, extent]²`.
///
/// `lines` lines per direction, `samples` points per line. Output is
/// `2·lines` polylines of `samples` points, as `x0, y0, x1, y1, ...`;
/// horizontal lines first, bottom to top.
pub fn deform(expr: &str, extent: f64, lines: usize, samples: usize) -> Result<Vec<f64>, String> {
    if extent.is_nan() || extent <= 0.0 || lines < 2 || samples < 2 {
        return Err("need extent > 0, lines ≥ 2 and samples ≥ 2".into());
    }
    let h = parse(expr)?;
    let at = |k: usize, n: usize| -extent + 2.0 * extent * k as f64 / (n - 1) as f64;
    let mut out = Vec::with_capacity(4 * lines * samples);
    for vertical in [false, true] {
        for i in 0..lines {
            for j in 0..samples {
                let (a, b) = (at(i, lines), at(j, samples));
                let z = if vertical { Complex64::new(a, b) } else { Complex64::new(b, a) };
                let w = h.eval(z).map_err(|e| e.to_string())?;
                out.extend([w.re, w.im]);
            }
        }
    }
    Ok(out)
}

/// Lattice points of the disk moved by more than `tol`, as `x0, y0, ...`.
pub fn support(expr: &str, cx: f64, cy: f64, r: f64, resolution: f64, tol: f64) -> Result<Vec<f64>, String> {
    let h = parse(expr)?;
    match support_sample(&h, disk(cx, cy, r)?, tol, resolution).map_err(|e| e.to_string())? {
        Support::Empty => Ok(Vec::new()),
        Support::Sampled(set) => Ok(set.points().iter().flat_map(|p| [p.re, p.im]).collect()),
    }
}

#[derive(Serialize)]
struct Certificates {
    winding: Result<WindingResult, String>,
    free: Certificate,
}

/// Winding number on the boundary and a freeness certificate for the
/// closed disk, as JSON.
pub fn certify(expr: &str, cx: f64, cy: f64, r: f64, spacing: f64) -> Result<String, String> {
    let h = parse(expr)?;
    let d = disk(cx, cy, r)?;
    let winding = winding_certificate(&h, d, 64).map_err(|e| e.to_string());
    let free = certify_fixed_point_free(&h, d, spacing).map_err(|e| e.to_string())?;
    serde_json::to_string(&Certificates { winding, free }).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = deformGrid)]
pub fn deform_grid(expr: &str, extent: f64, lines: usize, samples: usize) -> Result<Vec<f64>, JsValue> {
    deform(expr, extent, lines, samples).map_err(Into::into)
}

#[wasm_bindgen(js_name = supportCloud)]
pub fn support_cloud(expr: &str, cx: f64, cy: f64, r: f64, resolution: f64, tol: f64) -> Result<Vec<f64>, JsValue> {
    support(expr, cx, cy, r, resolution, tol).map_err(Into::into)
}

#[wasm_bindgen(js_name = certifyDisk)]
pub fn certify_disk(expr: &str, cx: f64, cy: f64, r: f64, spacing: f64) -> Result<String, JsValue> {
    certify(expr, cx, cy, r, spacing).map_err(Into::into)
}
