//! Browser bindings: a handful of small computations for the static demo page.

use concentration::asymptotics::assemble;
use concentration::hermite::HermiteBasis;
use concentration::kernels::{pw_kernel, Kernel, KernelConfig, PwParams};
use concentration::operators::Mode;
use concentration::spectra::eigvals_symmetric;
use wasm_bindgen::prelude::*;

/// Largest matrix the page may request; keeps a solve well under a second.
pub const MAX_DIM: usize = 600;

fn grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>, JsError> {
    if points < 2 || !(from < to) || from.abs() > 50.0 || to.abs() > 50.0 {
        return Err(JsError::new("need at least two points and -50 <= from < to <= 50"));
    }
    let step = (to - from) / (points - 1) as f64;
    Ok((0..points).map(|k| from + step * k as f64).collect())
}

/// Basis function of degree `degree` sampled on `points` equally spaced abscissae.
#[wasm_bindgen]
pub fn basis_profile(degree: usize, from: f64, to: f64, points: usize) -> Result<Vec<f64>, JsError> {
    if degree > 400 {
        return Err(JsError::new("degree must be at most 400"));
    }
    let basis = HermiteBasis::new(degree);
    grid(from, to, points)?
        .into_iter()
        .map(|x| basis.eval(degree, x).map_err(|e| JsError::new(&e.to_string())))
        .collect()
}

/// Kernel row `y ↦ K(x, y)` followed by `|K̂(x, y)|`, both on the same grid.
/// With `band > 0` a third block holds the weighted Paley–Wiener kernel.
#[wasm_bindgen]
pub fn kernel_profile(x: f64, from: f64, to: f64, points: usize, band: f64) -> Result<Vec<f64>, JsError> {
    if x.abs() > 50.0 {
        return Err(JsError::new("|x| must be at most 50"));
    }
    let ys = grid(from, to, points)?;
    let kernel = Kernel::new(KernelConfig::default()).map_err(|e| JsError::new(&e.to_string()))?;
    let mut out: Vec<f64> = ys.iter().map(|&y| kernel.mehler(x, y)).collect();
    out.extend(ys.iter().map(|&y| kernel.ft(x, y).norm()));
    if band > 0.0 {
        let p = PwParams::new(band).map_err(|e| JsError::new(&e.to_string()))?;
        out.extend(ys.iter().map(|&y| pw_kernel(&p, x, y)));
    }
    Ok(out)
}

/// Eigenvalues, largest first, of a concentration operator. `mode` is one of
/// `one-sided`, `freq-sided`, `two-sided`, `pw`; `dim` is capped at [`MAX_DIM`].
#[wasm_bindgen]
pub fn spectrum(mode: &str, r: f64, t: f64, dim: usize) -> Result<Vec<f64>, JsError> {
    let mode = Mode::parse(mode).map_err(|e| JsError::new(&e.to_string()))?;
    if mode == Mode::OracleOneSided {
        return Err(JsError::new("unsupported mode"));
    }
    if dim == 0 || dim > MAX_DIM {
        return Err(JsError::new(&format!("dim must lie in 1..={MAX_DIM}")));
    }
    let matrix = assemble(mode, Some(r), Some(t), Some(dim)).map_err(|e| JsError::new(&e.to_string()))?;
    let s = eigvals_symmetric(&matrix, false).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(s.eigenvalues().to_vec())
}
