//! Closed-form predictions for spectral statistics, the exact finite-size
//! trace and Hilbert–Schmidt integrals, and the report that compares them
//! with a computed spectrum.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::kernels::{pw_kernel, pw_kernel_diag, Kernel, KernelConfig, PwParams};
use crate::operators::{
    default_dim, default_pw_nodes, overlap_matrix_freq, overlap_matrix_time, pw_operator_matrix,
    two_sided_matrix, ConcentrationMatrix, Mode,
};
use crate::quadrature::{composite_rule, composite_rule_with_breaks, QuadratureRule};
use crate::spectra::{eigvals_symmetric, SymSpectrum};

const NODES: usize = 16;
/// Panel width for integrands built from the ℋ kernel.
const KERNEL_PANEL: f64 = 0.2;

/// `Σλ ≈ πR₁² + πR₂²` for the combined operator.
pub fn predicted_trace_two_sided(r1: f64, r2: f64) -> f64 {
    PI * (r1 * r1 + r2 * r2)
}

/// The large-interval `Σλ²` formula for the combined operator exactly as it
/// is usually written; note it is not symmetric under `r1 ↔ r2`.
pub fn predicted_hs_two_sided(r1: f64, r2: f64) -> f64 {
    let (a, b) = (r1 * r1, r2 * r2);
    0.5 * PI * a + 0.5 * PI * b
        + 2.0 * ((a + b) * (r1 / r2).atan() - r1 * r2 - a * r1.atan() + 2.0 * a * (r2 / r1).atan())
}

/// `(2π − 2) R²`, the equal-interval reduction of [`predicted_hs_two_sided`]
/// to leading order.
pub fn predicted_hs_symmetric(r: f64) -> f64 {
    (2.0 * PI - 2.0) * r * r
}

/// Leading-order `(Σλ, Σλ², Σλ³)` for the time-only operator.
pub fn predicted_one_sided_moments(r: f64) -> (f64, f64, f64) {
    let base = PI * r * r;
    (base, base / 2.0, base / 4.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PwPrediction {
    pub trace: f64,
    pub count_near_one: f64,
}

pub fn predicted_pw(r: f64, t: f64) -> PwPrediction {
    PwPrediction {
        trace: 4.0 * r * t,
        count_near_one: 4.0 * r * t,
    }
}

fn need(name: &str, v: Option<f64>) -> Result<f64> {
    match v {
        Some(v) if v > 0.0 && v.is_finite() => Ok(v),
        Some(v) => invalid(format!("{name} must be positive and finite, got {v}")),
        None => invalid(format!("{name} is required for this mode")),
    }
}

/// Half-widths `(time, frequency)` the mode actually uses.
fn widths(mode: Mode, r: Option<f64>, t: Option<f64>) -> Result<(Option<f64>, Option<f64>)> {
    Ok(match mode {
        Mode::OneSided | Mode::OracleOneSided => (Some(need("R", r)?), None),
        Mode::FreqSided => (None, Some(need("T", t)?)),
        Mode::TwoSided | Mode::Pw => (Some(need("R", r)?), Some(need("T", t)?)),
    })
}

fn half_rule(r: f64, width: f64) -> Result<QuadratureRule> {
    composite_rule(0.0, r, width, NODES)
}

/// `∫_{-R}^{R} K(x, x)(1+x²) dx`.
fn kernel_trace(kernel: &Kernel, r: f64) -> Result<f64> {
    let rule = half_rule(r, KERNEL_PANEL)?;
    Ok(2.0 * rule.integrate(|x| kernel.mehler_diag(x) * (1.0 + x * x)))
}

/// Exact trace of the concentration operator: the integral of the kernel
/// diagonal over the concentration set(s).
pub fn trace_integral(mode: Mode, r: Option<f64>, t: Option<f64>, cfg: &KernelConfig) -> Result<f64> {
    let (r, t) = widths(mode, r, t)?;
    if mode == Mode::Pw {
        let (r, t) = (r.expect("checked"), t.expect("checked"));
        let params = PwParams::new(t)?;
        let rule = half_rule(r, 1.0 / (4.0 * t + 4.0))?;
        return Ok(2.0 * rule.integrate(|x| pw_kernel_diag(&params, x) * (1.0 + x * x)));
    }
    let kernel = Kernel::new(*cfg)?;
    let mut total = 0.0;
    for w in [r, t].into_iter().flatten() {
        total += kernel_trace(&kernel, w)?;
    }
    Ok(total)
}

/// `∫_{-R}^{R}∫_{-R}^{R} K(x, y)²(1+x²)(1+y²) dy dx`, with a panel break
/// at the diagonal where `K` has a kink.
fn kernel_hs(kernel: &Kernel, r: f64) -> Result<f64> {
    let outer = half_rule(r, KERNEL_PANEL)?;
    let rows: Result<Vec<f64>> = outer
        .nodes()
        .par_iter()
        .map(|&x| {
            let inner = composite_rule_with_breaks(-r, r, &[x], KERNEL_PANEL, NODES)?;
            Ok(inner.integrate(|y| {
                let k = kernel.mehler(x, y);
                k * k * (1.0 + y * y)
            }))
        })
        .collect();
    let rows = rows?;
    Ok(2.0 * outer.iter().zip(rows).map(|((x, w), v)| w * (1.0 + x * x) * v).sum::<f64>())
}

/// `∫_{-R}^{R}∫_{-T}^{T} |K̂(x, ξ)|²(1+x²)(1+ξ²) dξ dx`.
fn kernel_cross(kernel: &Kernel, r: f64, t: f64) -> Result<f64> {
    let outer = half_rule(r, KERNEL_PANEL)?;
    let inner = half_rule(t, KERNEL_PANEL)?;
    let total: f64 = outer
        .nodes()
        .par_iter()
        .zip(outer.weights().par_iter())
        .map(|(&x, &wx)| {
            let row: f64 = inner
                .iter()
                .map(|(xi, w)| w * kernel.ft(x, xi).norm_sqr() * (1.0 + xi * xi))
                .sum();
            wx * (1.0 + x * x) * row
        })
        .sum();
    Ok(4.0 * total)
}

/// Exact Hilbert–Schmidt norm squared (`Σλ²`) of the concentration operator.
/// For the combined operator this is the two diagonal terms plus twice the
/// time–frequency cross term.
pub fn hs_integral(mode: Mode, r: Option<f64>, t: Option<f64>, cfg: &KernelConfig) -> Result<f64> {
    let (r, t) = widths(mode, r, t)?;
    if mode == Mode::Pw {
        let (r, t) = (r.expect("checked"), t.expect("checked"));
        let params = PwParams::new(t)?;
        let width = 1.0 / (4.0 * t + 4.0);
        let outer = half_rule(r, width)?;
        let inner = composite_rule(-r, r, width, NODES)?;
        let total: f64 = outer
            .nodes()
            .par_iter()
            .zip(outer.weights().par_iter())
            .map(|(&x, &wx)| {
                let row: f64 = inner
                    .iter()
                    .map(|(y, w)| {
                        let l = pw_kernel(&params, x, y);
                        w * l * l * (1.0 + y * y)
                    })
                    .sum();
                wx * (1.0 + x * x) * row
            })
            .sum();
        return Ok(2.0 * total);
    }
    let kernel = Kernel::new(*cfg)?;
    Ok(match (r, t) {
        (Some(r), Some(t)) => {
            let time = kernel_hs(&kernel, r)?;
            let freq = if t == r { time } else { kernel_hs(&kernel, t)? };
            time + freq + 2.0 * kernel_cross(&kernel, r, t)?
        }
        (Some(w), None) | (None, Some(w)) => kernel_hs(&kernel, w)?,
        (None, None) => unreachable!("every mode has a width"),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measured {
    pub trace: f64,
    pub hs: f64,
    pub third_moment: Option<f64>,
    pub count_near_one: usize,
    pub count_above_eps: usize,
    pub count_half_band: Option<usize>,
    pub plunge: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predicted {
    pub trace: f64,
    pub hs: f64,
    pub third_moment: Option<f64>,
    pub count_near_one: f64,
    pub count_above_eps_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactIntegrals {
    pub trace_integral: f64,
    pub hs_integral: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsReport {
    pub mode: Mode,
    #[serde(rename = "R")]
    pub r: Option<f64>,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    pub dim: usize,
    pub measured: Measured,
    pub predicted: Predicted,
    pub exact_integrals: ExactIntegrals,
    pub eps: f64,
}

/// Matrix for a report or spectrum run; `dim` overrides the default size
/// (basis length for Galerkin modes, node count for `pw`).
pub fn assemble(mode: Mode, r: Option<f64>, t: Option<f64>, dim: Option<usize>) -> Result<ConcentrationMatrix> {
    let (r, t) = widths(mode, r, t)?;
    match mode {
        Mode::OneSided => {
            let r = r.expect("checked");
            overlap_matrix_time(dim.unwrap_or_else(|| default_dim(r)), r)
        }
        Mode::FreqSided => {
            let t = t.expect("checked");
            overlap_matrix_freq(dim.unwrap_or_else(|| default_dim(t)), t)
        }
        Mode::TwoSided => {
            let (r, t) = (r.expect("checked"), t.expect("checked"));
            two_sided_matrix(dim.unwrap_or_else(|| default_dim(r.max(t))), r, t)
        }
        Mode::Pw => {
            let (r, t) = (r.expect("checked"), t.expect("checked"));
            pw_operator_matrix(t, r, dim.unwrap_or_else(|| default_pw_nodes(r, t)))
        }
        Mode::OracleOneSided => invalid("the kernel oracle is not a report mode"),
    }
}

fn predictions(mode: Mode, r: Option<f64>, t: Option<f64>) -> Predicted {
    match mode {
        Mode::TwoSided => {
            let (r, t) = (r.expect("checked"), t.expect("checked"));
            Predicted {
                trace: predicted_trace_two_sided(r, t),
                hs: predicted_hs_two_sided(r, t),
                third_moment: None,
                count_near_one: 4.0 * r * t,
                count_above_eps_bound: 2.0 * PI * (r * r + t * t),
            }
        }
        Mode::Pw => {
            let (r, t) = (r.expect("checked"), t.expect("checked"));
            let p = predicted_pw(r, t);
            Predicted {
                trace: p.trace,
                hs: p.trace,
                third_moment: None,
                count_near_one: p.count_near_one,
                count_above_eps_bound: p.count_near_one,
            }
        }
        _ => {
            let w = r.or(t).expect("checked");
            let (m1, m2, m3) = predicted_one_sided_moments(w);
            Predicted {
                trace: m1,
                hs: m2,
                third_moment: Some(m3),
                count_near_one: 0.0,
                count_above_eps_bound: 2.0 * PI * w * w,
            }
        }
    }
}

fn measure(mode: Mode, spectrum: &SymSpectrum, eps: f64) -> Measured {
    let single = matches!(mode, Mode::OneSided | Mode::FreqSided);
    Measured {
        trace: spectrum.moment(1),
        hs: spectrum.moment(2),
        third_moment: single.then(|| spectrum.moment(3)),
        count_near_one: spectrum.count_above(1.0 - eps),
        count_above_eps: spectrum.count_above(eps),
        count_half_band: single.then(|| spectrum.count_in(0.5 - eps, 0.5 + eps)),
        plunge: spectrum.plunge_width(eps),
    }
}

/// Assembles, solves and integrates one experiment.
pub fn build_report(
    mode: Mode,
    r: Option<f64>,
    t: Option<f64>,
    eps: f64,
    dim: Option<usize>,
    cfg: &KernelConfig,
) -> Result<AsymptoticsReport> {
    if !(eps > 0.0 && eps < 0.5) {
        return invalid(format!("eps must lie in (0, 0.5), got {eps}"));
    }
    let (r, t) = widths(mode, r, t)?;
    let (spectral, integrals) = rayon::join(
        || -> Result<(usize, SymSpectrum)> {
            let matrix = assemble(mode, r, t, dim)?;
            Ok((matrix.dim(), eigvals_symmetric(&matrix, false)?))
        },
        || -> Result<ExactIntegrals> {
            let (trace_integral, hs_integral) = rayon::join(
                || trace_integral(mode, r, t, cfg),
                || hs_integral(mode, r, t, cfg),
            );
            Ok(ExactIntegrals {
                trace_integral: trace_integral?,
                hs_integral: hs_integral?,
            })
        },
    );
    let (dim, spectrum) = spectral?;
    Ok(AsymptoticsReport {
        mode,
        r,
        t,
        dim,
        measured: measure(mode, &spectrum, eps),
        predicted: predictions(mode, r, t),
        exact_integrals: integrals?,
        eps,
    })
}
