//! Unit-normalized Hermite functions and the scaled orthonormal basis of ℋ.
//!
//! `hermite_unit(n, u)` is `H_n(u) e^{-u²/2} / sqrt(2ⁿ n! √π)`. The raw
//! polynomial and the factorial never appear: the recurrence runs on the
//! normalized functions and carries a separate log-scale so that neither the
//! Gaussian factor nor the growth of the polynomial part over/underflows.
//!
//! The ℋ-orthonormal basis is `e_n(x) = c_n · hermite_unit(n, √(2π) x)` with
//! `c_n² = √2 π^{3/2} / (n + 2π + 1/2)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const RESCALE_ABOVE: f64 = 1e200;
const RESCALE_BY: f64 = 1e-200;
const LN_RESCALE: f64 = 460.517_018_598_809_1; // ln(1e200)

/// `π^{-1/4}`.
pub const PI_POW_NEG_QUARTER: f64 = 0.751_125_544_464_942_5;

/// `2π + 1/2`, the shift that appears in every ℋ norm.
pub const SHIFT: f64 = 2.0 * PI + 0.5;

/// Scale between the line variable `x` and the Hermite argument `u = √(2π) x`.
pub fn sqrt_two_pi() -> f64 {
    (2.0 * PI).sqrt()
}

/// `h̃_n(u)`, the L²-normalized Hermite function.
pub fn hermite_unit(n: usize, u: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI_POW_NEG_QUARTER;
    let mut log_scale = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        let next = u * (2.0 / kf).sqrt() * cur - ((kf - 1.0) / kf).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            prev *= RESCALE_BY;
            log_scale += LN_RESCALE;
        }
    }
    cur * (log_scale - 0.5 * u * u).exp()
}

/// Fills `out[k] = h̃_k(u)` for `k < out.len()`.
pub fn hermite_unit_all(u: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let mut prev = 0.0;
    let mut cur = PI_POW_NEG_QUARTER;
    let mut log_scale = 0.0;
    let mut factor = (-0.5 * u * u).exp();
    out[0] = cur * factor;
    for k in 1..out.len() {
        let kf = k as f64;
        let next = u * (2.0 / kf).sqrt() * cur - ((kf - 1.0) / kf).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            prev *= RESCALE_BY;
            log_scale += LN_RESCALE;
            factor = (log_scale - 0.5 * u * u).exp();
        }
        out[k] = cur * factor;
    }
}

/// The first `max_degree + 1` elements of the ℋ-orthonormal Hermite basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteBasis {
    max_degree: usize,
    normalization: Vec<f64>,
}

impl HermiteBasis {
    pub fn new(max_degree: usize) -> Self {
        let c = 2f64.sqrt() * PI.powf(1.5);
        let normalization = (0..=max_degree)
            .map(|n| (c / (n as f64 + SHIFT)).sqrt())
            .collect();
        HermiteBasis {
            max_degree,
            normalization,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.max_degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coefficient taking `h̃_n(√(2π)x)` to `e_n(x)`.
    pub fn normalization(&self) -> &[f64] {
        &self.normalization
    }

    /// `e_n(x)`.
    pub fn eval(&self, n: usize, x: f64) -> Result<f64> {
        if n > self.max_degree {
            return Err(Error::InvalidArgument(format!(
                "basis index {n} exceeds max degree {}",
                self.max_degree
            )));
        }
        Ok(self.normalization[n] * hermite_unit(n, sqrt_two_pi() * x))
    }

    /// Fills `out[n] = e_n(x)` for all `n ≤ max_degree`; `out` must have
    /// length `self.len()`.
    pub fn eval_all(&self, x: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.len());
        hermite_unit_all(sqrt_two_pi() * x, out);
        for (v, c) in out.iter_mut().zip(&self.normalization) {
            *v *= c;
        }
    }

    /// Half-width `C` beyond which every `e_n`, `n ≤ max_degree`, is
    /// negligible: past the turning point plus a margin.
    pub fn line_cutoff(&self) -> f64 {
        ((2.0 * self.max_degree as f64 + 40.0) / (2.0 * PI)).sqrt() + 4.0
    }

    /// Panel width for composite rules on oscillatory basis products.
    pub fn panel_width(&self) -> f64 {
        (1.0 / ((self.max_degree + 1) as f64).sqrt()).min(0.25)
    }
}

/// Nodes per panel used with [`HermiteBasis::panel_width`].
pub const NODES_PER_PANEL: usize = 16;
