//! Browser bindings for the demo page in `www/`.

use ehc_core::complexes::{ect, euler_bessel};
use ehc_core::geometry::{LinearForm, Vector};
use ehc_core::io::parse_mesh;
use ehc_core::kernels::Kernel;
use ehc_core::scenes::gamma_triangle;
use ehc_core::transforms::hybrid_transform;
use wasm_bindgen::prelude::*;

/// Transform of the γ-triangle with apex `(0, b)` on an `n × n` grid of
/// `ξ ∈ [0, extent]²`, row-major in `ξ_y`, as interleaved `(re, im)` pairs.
pub fn triangle_grid(b: f64, kernel: &str, n: usize, extent: f64) -> Result<Vec<f64>, String> {
    let kernel: Kernel = kernel.parse().map_err(|e: ehc_core::Error| e.to_string())?;
    let phi = gamma_triangle(b);
    let step = if n > 1 { extent / (n - 1) as f64 } else { 0.0 };
    let mut out = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let xi = LinearForm::new(vec![i as f64 * step, j as f64 * step]);
            let z = hybrid_transform(&phi, &xi, &kernel).map_err(|e| e.to_string())?;
            out.push(z.re);
            out.push(z.im);
        }
    }
    Ok(out)
}

/// Euler characteristic curve of a mesh along the unit direction at `angle`,
/// as interleaved `(t, jump)` pairs.
pub fn mesh_ect(mesh_json: &str, angle: f64) -> Result<Vec<f64>, String> {
    let mesh = parse_mesh(mesh_json).map_err(|e| e.to_string())?;
    let xi = LinearForm::new(vec![angle.cos(), angle.sin()]);
    let curve = ect(&mesh.complex, &xi).map_err(|e| e.to_string())?;
    Ok(curve.jumps().iter().flat_map(|&(t, j)| [t, j as f64]).collect())
}

/// Euler-Bessel transform of a mesh for centers on an `n × n` grid over
/// `[x0, x1] × [y0, y1]`, row-major in `y`.
pub fn bessel_field(mesh_json: &str, x0: f64, x1: f64, y0: f64, y1: f64, n: usize) -> Result<Vec<f64>, String> {
    let mesh = parse_mesh(mesh_json).map_err(|e| e.to_string())?;
    let at = |lo: f64, hi: f64, k: usize| if n > 1 { lo + (hi - lo) * k as f64 / (n - 1) as f64 } else { lo };
    Ok((0..n)
        .flat_map(|j| (0..n).map(move |i| (i, j)))
        .map(|(i, j)| euler_bessel(&mesh.complex, &Vector::new(vec![at(x0, x1, i), at(y0, y1, j)])))
        .collect())
}

#[wasm_bindgen(js_name = triangleGrid)]
pub fn triangle_grid_js(b: f64, kernel: &str, n: usize, extent: f64) -> Result<Vec<f64>, JsError> {
    triangle_grid(b, kernel, n, extent).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = meshEct)]
pub fn mesh_ect_js(mesh_json: &str, angle: f64) -> Result<Vec<f64>, JsError> {
    mesh_ect(mesh_json, angle).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = besselField)]
pub fn bessel_field_js(mesh_json: &str, x0: f64, x1: f64, y0: f64, y1: f64, n: usize) -> Result<Vec<f64>, JsError> {
    bessel_field(mesh_json, x0, x1, y0, y1, n).map_err(|e| JsError::new(&e))
}
