//! Reproducing kernel of ℋ, its Fourier transform, their large-argument
//! approximations, and the reproducing kernel of the weighted Paley–Wiener
//! space.
//!
//! Two representations of `K(x, y)` are provided: the truncated basis
//! expansion `Σ e_n(x) e_n(y)` and a one-dimensional Mehler-type integral.
//! The expansion converges slowly (the kernel has a derivative jump on the
//! diagonal), so the integral form is the one used everywhere else.
//!
//! In the Mehler variable `t ∈ (0, 1)` the exponent of the integrand is
//! `-(π/2)[(x-y)² p + (x+y)² / p]` with `p = (1+t)/(1-t)`. Integrating over
//! `u = ln p ∈ (0, ∞)` instead gives
//!
//! ```text
//! K(x, y) = √2 π ∫_0^∞ tanh(u/2)^{2π-1/2} / (2 cosh(u/2))
//!                      · exp(-(π/2)[(x-y)² e^u + (x+y)² e^{-u}]) du,
//! ```
//!
//! where the exponential equals `exp(-π|x²-y²| cosh(u - u*))`: a bump of
//! width at least `1/√(π|x²-y²|)` centred at `u* = ln|(x+y)/(x-y)|`. Every
//! term of the exponent is non-positive, and a fixed panel grid in `u`
//! resolves the bump for every `(x, y)`; only the panels where the integrand
//! is above double-precision underflow are summed.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::hermite::HermiteBasis;
use crate::quadrature::{composite_rule, gauss_legendre, QuadratureRule};

/// Largest single Gauss–Legendre rule used for the Fourier-side kernel;
/// beyond this the `[0, 1]` interval is split into panels.
const FT_SINGLE_RULE_MAX: usize = 1024;

/// Quadrature sizes for the kernel representations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelConfig {
    pub series_terms: usize,
    /// Mehler-integral resolution: `mehler_nodes / 8` Gauss–Legendre nodes
    /// per unit of the log-ratio variable.
    pub mehler_nodes: usize,
    pub ft_base_nodes: usize,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            series_terms: 400,
            mehler_nodes: 256,
            ft_base_nodes: 64,
        }
    }
}

impl KernelConfig {
    pub fn new(series_terms: usize, mehler_nodes: usize, ft_base_nodes: usize) -> Result<Self> {
        let cfg = KernelConfig {
            series_terms,
            mehler_nodes,
            ft_base_nodes,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.series_terms < 8 || self.mehler_nodes < 8 || self.ft_base_nodes < 8 {
            return invalid(format!("every kernel quadrature size must be >= 8, got {self:?}"));
        }
        if self.mehler_nodes > 1 << 14 {
            return invalid("mehler_nodes must be <= 16384");
        }
        Ok(())
    }

    pub fn with_series_terms(mut self, terms: usize) -> Self {
        self.series_terms = terms;
        self
    }
}

/// Width of one panel of the `u`-grid at the default resolution.
const MEHLER_PANEL_WIDTH: f64 = 0.5;
/// Nodes per panel of the `u`-grid.
const MEHLER_PANEL_NODES: usize = 16;
/// Length of the `u`-interval covered by the grid: the diagonal tail
/// `~ e^{-u/2}` is below `1e-17` of the kernel scale beyond it.
const MEHLER_SPAN: f64 = 84.0;
/// Exponents below `-MEHLER_NEGLIGIBLE` contribute nothing in double precision.
const MEHLER_NEGLIGIBLE: f64 = 745.0;

/// One node of the `u`-grid with the `(x, y)`-independent factors folded in.
#[derive(Debug, Clone, Copy)]
struct MehlerNode {
    weight: f64,
    /// e^u
    grow: f64,
    /// e^{-u}
    shrink: f64,
}

/// Kernel evaluator holding precomputed quadrature rules. Cheap to share
/// between threads.
#[derive(Debug)]
pub struct Kernel {
    cfg: KernelConfig,
    mehler: Vec<MehlerNode>,
    /// Nodes per unit length of `u`.
    mehler_density: f64,
    ft_rules: Mutex<HashMap<usize, Arc<Vec<FtNode>>>>,
}

#[derive(Debug, Clone, Copy)]
struct FtNode {
    weight: f64,
    /// (1-t²)/(1+t²)
    damping: f64,
    /// t/(1+t²)
    phase: f64,
}

impl Kernel {
    pub fn new(cfg: KernelConfig) -> Result<Self> {
        cfg.validate()?;
        let power = 2.0 * PI - 0.5;
        let prefactor = 2f64.sqrt() * PI;
        let width = MEHLER_PANEL_WIDTH * 256.0 / cfg.mehler_nodes as f64;
        let panels = (MEHLER_SPAN / width).ceil() as usize;
        let base = gauss_legendre(MEHLER_PANEL_NODES)?;
        let mut mehler = Vec::with_capacity(panels * MEHLER_PANEL_NODES);
        for k in 0..panels {
            let lo = k as f64 * width;
            for (u, w) in base.mapped(lo, lo + width).iter() {
                let half = 0.5 * u;
                mehler.push(MehlerNode {
                    weight: prefactor * w * half.tanh().powf(power) / (2.0 * half.cosh()),
                    grow: u.exp(),
                    shrink: (-u).exp(),
                });
            }
        }
        Ok(Kernel {
            cfg,
            mehler,
            mehler_density: MEHLER_PANEL_NODES as f64 / width,
            ft_rules: Mutex::new(HashMap::new()),
        })
    }

    /// Nodes of the panels that can contribute at `(x, y)`: below `lo` the
    /// factor `e^{-(π/2) s² e^{-u}}` underflows, above `hi` the factor
    /// `e^{-(π/2) d² e^u}` does.
    fn mehler_window(&self, d2: f64, s2: f64) -> &[MehlerNode] {
        let count = self.mehler.len();
        let lo = if s2 > 0.0 {
            (s2 * FRAC_PI_2 / MEHLER_NEGLIGIBLE).ln().max(0.0)
        } else {
            0.0
        };
        let first = (lo * self.mehler_density) as usize / MEHLER_PANEL_NODES * MEHLER_PANEL_NODES;
        let last = if d2 > 0.0 {
            let hi = (MEHLER_NEGLIGIBLE / (FRAC_PI_2 * d2)).ln().max(0.0);
            ((hi * self.mehler_density) as usize / MEHLER_PANEL_NODES + 1) * MEHLER_PANEL_NODES
        } else {
            count
        };
        let last = last.min(count);
        &self.mehler[first.min(last)..last]
    }

    pub fn config(&self) -> &KernelConfig {
        &self.cfg
    }

    /// `K(x, y)` from the Mehler-type integral.
    pub fn mehler(&self, x: f64, y: f64) -> f64 {
        let d2 = (x - y) * (x - y);
        let s2 = (x + y) * (x + y);
        self.mehler_window(d2, s2)
            .iter()
            .map(|n| n.weight * (-FRAC_PI_2 * (d2 * n.grow + s2 * n.shrink)).exp())
            .sum()
    }

    /// `K(x, x)`.
    pub fn mehler_diag(&self, x: f64) -> f64 {
        self.mehler(x, x)
    }

    fn ft_nodes(&self, count: usize) -> Result<Arc<Vec<FtNode>>> {
        if let Some(rule) = self.ft_rules.lock().expect("poisoned").get(&count) {
            return Ok(Arc::clone(rule));
        }
        let rule: QuadratureRule = if count <= FT_SINGLE_RULE_MAX {
            gauss_legendre(count)?.mapped(0.0, 1.0)
        } else {
            let panels = count.div_ceil(64);
            composite_rule(0.0, 1.0, 1.0 / panels as f64, 64)?
        };
        let power = 2.0 * PI - 0.5;
        let prefactor = 2f64.sqrt() * PI;
        let nodes: Vec<FtNode> = rule
            .iter()
            .map(|(t, w)| {
                let q = 1.0 + t * t;
                FtNode {
                    weight: prefactor * w * t.powf(power) / q.sqrt(),
                    damping: (1.0 - t) * (1.0 + t) / q,
                    phase: t / q,
                }
            })
            .collect();
        let nodes = Arc::new(nodes);
        self.ft_rules
            .lock()
            .expect("poisoned")
            .insert(count, Arc::clone(&nodes));
        Ok(nodes)
    }

    /// Number of `t`-nodes used for the Fourier-side kernel at `(x, y)`.
    pub fn ft_node_count(&self, x: f64, y: f64) -> usize {
        self.cfg.ft_base_nodes + (4.0 * (x * y).abs()).ceil() as usize
    }

    /// `K̂_x(y)`, the Fourier transform of `K_x` evaluated at `y`.
    pub fn ft(&self, x: f64, y: f64) -> Complex64 {
        self.ft_with_nodes(x, y, self.ft_node_count(x, y))
    }

    /// `K̂_x(y)` with an explicit number of `t`-nodes.
    pub fn ft_with_nodes(&self, x: f64, y: f64, count: usize) -> Complex64 {
        let nodes = self.ft_nodes(count.max(1)).expect("node count within range");
        let r2 = x * x + y * y;
        let xy = x * y;
        let mut acc = Complex64::new(0.0, 0.0);
        for n in nodes.iter() {
            let mag = n.weight * (-PI * r2 * n.damping).exp();
            let (s, c) = (-4.0 * PI * xy * n.phase).sin_cos();
            acc += Complex64::new(mag * c, mag * s);
        }
        acc
    }

    /// Partial sum `Σ_{n < series_terms} e_n(x) e_n(y)`.
    pub fn series(&self, x: f64, y: f64) -> f64 {
        let (ex, ey) = basis_pair(self.cfg.series_terms, x, y);
        ex.iter().zip(&ey).map(|(a, b)| a * b).sum()
    }

    /// Partial sum `Σ_{n < series_terms} (-i)ⁿ e_n(x) e_n(y)`.
    pub fn ft_series(&self, x: f64, y: f64) -> Complex64 {
        let (ex, ey) = basis_pair(self.cfg.series_terms, x, y);
        let mut re = 0.0;
        let mut im = 0.0;
        for (n, (a, b)) in ex.iter().zip(&ey).enumerate() {
            let p = a * b;
            match n % 4 {
                0 => re += p,
                1 => im -= p,
                2 => re -= p,
                _ => im += p,
            }
        }
        Complex64::new(re, im)
    }
}

fn basis_pair(terms: usize, x: f64, y: f64) -> (Vec<f64>, Vec<f64>) {
    let basis = HermiteBasis::new(terms - 1);
    let mut ex = vec![0.0; terms];
    let mut ey = vec![0.0; terms];
    basis.eval_all(x, &mut ex);
    basis.eval_all(y, &mut ey);
    (ex, ey)
}

fn check_range(x: f64, y: f64) -> Result<()> {
    if !(x.abs() <= 50.0 && y.abs() <= 50.0) {
        return invalid(format!("kernel arguments must satisfy |x|, |y| <= 50 (got {x}, {y})"));
    }
    Ok(())
}

pub fn kernel_series(x: f64, y: f64, cfg: &KernelConfig) -> Result<f64> {
    check_range(x, y)?;
    Ok(Kernel::new(*cfg)?.series(x, y))
}

pub fn kernel_ft_series(x: f64, y: f64, cfg: &KernelConfig) -> Result<Complex64> {
    check_range(x, y)?;
    Ok(Kernel::new(*cfg)?.ft_series(x, y))
}

pub fn kernel_mehler(x: f64, y: f64, cfg: &KernelConfig) -> Result<f64> {
    check_range(x, y)?;
    Ok(Kernel::new(*cfg)?.mehler(x, y))
}

pub fn kernel_ft(x: f64, y: f64, cfg: &KernelConfig) -> Result<Complex64> {
    check_range(x, y)?;
    Ok(Kernel::new(*cfg)?.ft(x, y))
}

/// Large-`x` approximation `(π/x) e^{-π|x²-y²|}` near the diagonal.
pub fn kernel_asymptotic(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0) || !((y - x).abs() < 1.0) {
        return invalid(format!("need x > 0 and |y - x| < 1 (got x={x}, y={y})"));
    }
    Ok(PI / x * (-PI * (x * x - y * y).abs()).exp())
}

/// Large-argument approximation `e^{-2πixy}/(x²+y²)`.
pub fn kernel_ft_asymptotic(x: f64, y: f64) -> Result<Complex64> {
    let r2 = x * x + y * y;
    if !(r2 > 0.0) {
        return invalid("kernel_ft_asymptotic is undefined at the origin");
    }
    Ok(Complex64::from_polar(1.0 / r2, -2.0 * PI * x * y))
}

/// Band half-width of the weighted Paley–Wiener space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PwParams {
    bandwidth: f64,
    coth: f64,
    csch: f64,
    /// e^{-8πT}
    decay: f64,
}

impl PwParams {
    pub fn new(bandwidth: f64) -> Result<Self> {
        if !(bandwidth > 0.0) || !bandwidth.is_finite() {
            return invalid(format!("bandwidth must be positive and finite, got {bandwidth}"));
        }
        let a = 4.0 * PI * bandwidth;
        let e2 = (-2.0 * a).exp();
        let denom = -(-2.0 * a).exp_m1();
        Ok(PwParams {
            bandwidth,
            coth: (1.0 + e2) / denom,
            csch: 2.0 * (-a).exp() / denom,
            decay: e2,
        })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// `coth(4πT)` evaluated without overflow.
    pub fn coth(&self) -> f64 {
        self.coth
    }

    /// `1/sinh(4πT)` evaluated without overflow.
    pub fn csch(&self) -> f64 {
        self.csch
    }
}

const SINC_SWITCH: f64 = 1e-6;

/// `L_t(y)`, the reproducing kernel of the weighted Paley–Wiener space.
pub fn pw_kernel(p: &PwParams, t: f64, y: f64) -> f64 {
    let tb = p.bandwidth;
    let d = t - y;
    let denom = (1.0 + t * t) * (1.0 + y * y);
    // sin(2πT d)/(π d), switching to its Taylor series near d = 0
    let dirichlet = if d.abs() < SINC_SWITCH {
        let z = 2.0 * PI * tb * d;
        let z2 = z * z;
        2.0 * tb * (1.0 - z2 / 6.0 * (1.0 - z2 / 20.0))
    } else {
        (2.0 * PI * tb * d).sin() / (PI * d)
    };
    let correction =
        -p.coth * (2.0 * PI * tb * d).cos() + p.csch * (2.0 * PI * tb * (t + y)).cos();
    ((1.0 + t * y) * dirichlet + correction / PI) / denom
}

/// `L_t(t)`.
pub fn pw_kernel_diag(p: &PwParams, t: f64) -> f64 {
    let q = 1.0 + t * t;
    2.0 * p.bandwidth / q + (-p.coth + p.csch * (4.0 * PI * p.bandwidth * t).cos()) / (PI * q * q)
}

/// `L̂_t(y)` for `|y| ≤ T`; every exponential has a non-positive argument.
pub fn pw_kernel_ft(p: &PwParams, t: f64, y: f64) -> Result<Complex64> {
    let tb = p.bandwidth;
    if !(y.abs() <= tb) {
        return invalid(format!("frequency {y} outside the band [-{tb}, {tb}]"));
    }
    let two_pi = 2.0 * PI;
    let plain = Complex64::from_polar(1.0, -two_pi * t * y);
    let down = Complex64::from_polar(1.0, -two_pi * t * tb);
    let up = down.conj();
    let e_tm = (-two_pi * (tb - y)).exp();
    let e_tp = (-two_pi * (tb + y)).exp();
    let e_3tm = (-two_pi * (3.0 * tb - y)).exp();
    let e_3tp = (-two_pi * (3.0 * tb + y)).exp();
    let bracket = down * (e_3tp - e_tm) + up * (e_3tm - e_tp);
    let scale = 1.0 / (1.0 - p.decay);
    Ok((plain + bracket * scale) / (1.0 + t * t))
}
