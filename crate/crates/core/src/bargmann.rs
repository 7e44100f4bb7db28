//! Bargmann transform and the weighted Fock norms
//! `‖F‖²_β = ∫_ℂ |F(z)|² e^{-2|z|²} (2π - 1/2 + 2|z|²)^β dA(z)`, `β ∈ {0, 1}`.
//!
//! `𝔅f(z) = 2^{1/4} π^{-3/2} ∫ f(t/√(2π)) e^{2tz - z² - t²/2} dt`.
//!
//! Norms are computed on a polar grid: Gauss–Legendre in the radius and the
//! trapezoid rule in the angle, which is exact for the trigonometric
//! polynomials `|F(re^{iφ})|²` produced by polynomial `F`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::hermite::{hermite_unit, sqrt_two_pi, HermiteBasis};
use crate::quadrature::{composite_rule, gauss_legendre, QuadratureRule};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockConfig {
    pub beta: u8,
    pub radial_cutoff: f64,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl Default for FockConfig {
    fn default() -> Self {
        FockConfig {
            beta: 1,
            radial_cutoff: 8.0,
            radial_nodes: 200,
            angular_nodes: 128,
        }
    }
}

impl FockConfig {
    pub fn with_beta(mut self, beta: u8) -> Self {
        self.beta = beta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta > 1 {
            return invalid(format!("beta must be 0 or 1, got {}", self.beta));
        }
        if !(self.radial_cutoff > 0.0) || self.radial_nodes == 0 || self.angular_nodes == 0 {
            return invalid("radial cutoff and node counts must be positive");
        }
        let c2 = self.radial_cutoff * self.radial_cutoff;
        let tail = (-2.0 * c2).exp() * (2.0 * PI - 0.5 + 2.0 * c2);
        if !(tail < 1e-40) {
            return invalid(format!(
                "radial cutoff {} leaves a Gaussian tail of {tail:e}",
                self.radial_cutoff
            ));
        }
        Ok(())
    }
}

/// `(2π - 1/2 + 2r²)^β`.
fn weight_factor(beta: u8, r2: f64) -> f64 {
    if beta == 0 {
        1.0
    } else {
        2.0 * PI - 0.5 + 2.0 * r2
    }
}

/// Sample points of the polar grid with the full area weight
/// `r dr dφ · e^{-2r²} (2π - 1/2 + 2r²)^β` attached.
#[derive(Debug, Clone)]
pub struct PolarGrid {
    points: Vec<Complex64>,
    weights: Vec<f64>,
}

impl PolarGrid {
    pub fn new(cfg: &FockConfig) -> Result<Self> {
        cfg.validate()?;
        let radial = gauss_legendre(cfg.radial_nodes)?.mapped(0.0, cfg.radial_cutoff);
        let m = cfg.angular_nodes;
        let dphi = 2.0 * PI / m as f64;
        let mut points = Vec::with_capacity(radial.len() * m);
        let mut weights = Vec::with_capacity(radial.len() * m);
        for (r, wr) in radial.iter() {
            let w = wr * r * dphi * (-2.0 * r * r).exp() * weight_factor(cfg.beta, r * r);
            for j in 0..m {
                points.push(Complex64::from_polar(r, j as f64 * dphi));
                weights.push(w);
            }
        }
        Ok(PolarGrid { points, weights })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `⟨F, G⟩ = Σ w F conj(G)` over samples taken at [`Self::points`].
    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        self.weights
            .iter()
            .zip(f.iter().zip(g))
            .map(|(w, (a, b))| a * b.conj() * *w)
            .sum()
    }

    pub fn norm_sq(&self, f: &[Complex64]) -> f64 {
        self.weights
            .iter()
            .zip(f)
            .map(|(w, a)| w * a.norm_sqr())
            .sum()
    }
}

/// Composite rule on `[-20, 20]` for the variable `t = √(2π) x` of the
/// transform integral.
pub fn default_line_rule() -> QuadratureRule {
    composite_rule(-20.0, 20.0, 0.25, 16).expect("valid fixed rule")
}

fn transform_prefactor() -> f64 {
    2f64.powf(0.25) / PI.powf(1.5)
}

/// `𝔅f(z)` by direct quadrature over `line_rule`.
pub fn bargmann_transform<F: Fn(f64) -> f64>(f: F, z: Complex64, line_rule: &QuadratureRule) -> Complex64 {
    let s = sqrt_two_pi();
    let z2 = z * z;
    let sum: Complex64 = line_rule
        .iter()
        .map(|(t, w)| (2.0 * t * z - z2 - 0.5 * t * t).exp() * (w * f(t / s)))
        .sum();
    sum * transform_prefactor()
}

/// `𝔅e_n` for all `n ≤ max_degree` at every point; `result[n][k]` is the
/// image of `e_n` at `points[k]`. Line nodes farther than 8 from `Re z`
/// carry a factor below `e^{-64}` relative to the peak and are skipped.
pub fn basis_images(max_degree: usize, points: &[Complex64], line_rule: &QuadratureRule) -> Vec<Vec<Complex64>> {
    let basis = HermiteBasis::new(max_degree);
    let s = sqrt_two_pi();
    let count = max_degree + 1;
    let mut table = vec![0.0; line_rule.len() * count];
    for (k, (t, w)) in line_rule.iter().enumerate() {
        let row = &mut table[k * count..(k + 1) * count];
        basis.eval_all(t / s, row);
        row.iter_mut().for_each(|v| *v *= w);
    }
    let nodes = line_rule.nodes();
    let pre = transform_prefactor();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); points.len()]; count];
    let mut acc = vec![Complex64::new(0.0, 0.0); count];
    for (p, &z) in points.iter().enumerate() {
        acc.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        let z2 = z * z;
        let lo = nodes.partition_point(|&t| t < z.re - 8.0);
        let hi = nodes.partition_point(|&t| t <= z.re + 8.0);
        for k in lo..hi {
            let t = nodes[k];
            let e = (2.0 * t * z - z2 - 0.5 * t * t).exp();
            for (a, v) in acc.iter_mut().zip(&table[k * count..(k + 1) * count]) {
                *a += e * *v;
            }
        }
        for (n, a) in acc.iter().enumerate() {
            out[n][p] = a * pre;
        }
    }
    out
}

pub fn fock_norm_sq<F: Fn(Complex64) -> Complex64>(f: F, cfg: &FockConfig) -> Result<f64> {
    let grid = PolarGrid::new(cfg)?;
    let samples: Vec<Complex64> = grid.points().iter().map(|&z| f(z)).collect();
    Ok(grid.norm_sq(&samples))
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln ‖zⁿ‖²` in the β = 1 space.
pub fn ln_monomial_norm_b1(n: usize) -> Result<f64> {
    if n > 300 {
        return invalid(format!("monomial degree {n} exceeds 300"));
    }
    let nf = n as f64;
    Ok(PI.ln() + (nf + 2.0 * PI + 0.5).ln() + ln_factorial(n) - (nf + 1.0) * 2f64.ln())
}

/// `‖zⁿ‖²` in the β = 1 space: `π n! (n + 2π + 1/2) / 2^{n+1}`. Overflows to
/// infinity past `n ≈ 200`; use [`ln_monomial_norm_b1`] there.
pub fn monomial_norm_b1(n: usize) -> Result<f64> {
    Ok(ln_monomial_norm_b1(n)?.exp())
}

/// `‖zⁿ‖²` in the β = 0 space: `π n! / 2^{n+1}`.
pub fn monomial_norm_b0(n: usize) -> Result<f64> {
    if n > 300 {
        return invalid(format!("monomial degree {n} exceeds 300"));
    }
    let nf = n as f64;
    Ok(PI * (ln_factorial(n) - (nf + 1.0) * 2f64.ln()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitarityCheck {
    /// `‖𝔅e_n‖²` in the β = 1 space.
    pub b1_norm_of_image: f64,
    /// `‖𝔅e_n‖²` in the β = 0 space divided by `‖e_n‖²_{L²}`.
    pub b0_ratio: f64,
}

pub fn unitarity_check(n: usize, cfg: &FockConfig, line_rule: &QuadratureRule) -> Result<UnitarityCheck> {
    if n > 12 {
        return invalid(format!("unitarity check supports n <= 12, got {n}"));
    }
    let grid1 = PolarGrid::new(&cfg.with_beta(1))?;
    let grid0 = PolarGrid::new(&cfg.with_beta(0))?;
    let images = basis_images(n, grid1.points(), line_rule);
    let image = &images[n];
    let basis = HermiteBasis::new(n);
    let s = sqrt_two_pi();
    let l2 = line_rule.integrate(|t| basis.eval(n, t / s).expect("n in range").powi(2)) / s;
    Ok(UnitarityCheck {
        b1_norm_of_image: grid1.norm_sq(image),
        b0_ratio: grid0.norm_sq(image) / l2,
    })
}

/// Gram matrix `⟨𝔅e_n, 𝔅e_m⟩` in the β = 1 space for `n, m ≤ max_degree`.
pub fn image_gram(max_degree: usize, cfg: &FockConfig, line_rule: &QuadratureRule) -> Result<Vec<Vec<Complex64>>> {
    let grid = PolarGrid::new(&cfg.with_beta(1))?;
    let images = basis_images(max_degree, grid.points(), line_rule);
    Ok(images
        .iter()
        .map(|a| images.iter().map(|b| grid.inner(a, b)).collect())
        .collect())
}

/// Discrete Fourier coefficients of `𝔅e_n` on the circle `|z| = radius`,
/// normalized so that `F = Σ c_k r^k e^{ikφ}` gives `c_k r^k`.
pub fn angular_coefficients(n: usize, radius: f64, samples: usize, line_rule: &QuadratureRule) -> Vec<Complex64> {
    let points: Vec<Complex64> = (0..samples)
        .map(|j| Complex64::from_polar(radius, 2.0 * PI * j as f64 / samples as f64))
        .collect();
    let values = &basis_images(n, &points, line_rule)[n];
    (0..samples)
        .map(|k| {
            values
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (k * j) as f64 / samples as f64))
                .sum::<Complex64>()
                / samples as f64
        })
        .collect()
}

/// Candidate closed forms for `𝔅(H_n(√(2π)x) e^{-πx²})(z) / (2z)ⁿ`.
pub const IMAGE_CONSTANT_CANDIDATES: [(&str, fn() -> f64); 2] = [
    ("2^(1/4)/pi", || 2f64.powf(0.25) / PI),
    ("sqrt(2)/pi^(1/4)", || 2f64.sqrt() / PI.powf(0.25)),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ImageConstant {
    pub degree: usize,
    /// `𝔅(H_n(√(2π)x) e^{-πx²})(1) / 2ⁿ`
    pub measured: f64,
    /// Candidate closest to `measured`, with its relative deviation.
    pub best: &'static str,
    pub relative_error: f64,
}

/// Measures the constant in the image of the unnormalized Hermite function
/// and reports which candidate closed form it matches.
pub fn image_constant(n: usize, line_rule: &QuadratureRule) -> Result<ImageConstant> {
    if n > 40 {
        return invalid(format!("image constant supports n <= 40, got {n}"));
    }
    let nf = n as f64;
    // H_n(u) e^{-u²/2} = h̃_n(u) · sqrt(2ⁿ n! √π)
    let scale = (0.5 * (nf * 2f64.ln() + ln_factorial(n) + 0.5 * PI.ln())).exp();
    let s = sqrt_two_pi();
    let value = bargmann_transform(|x| scale * hermite_unit(n, s * x), Complex64::new(1.0, 0.0), line_rule);
    let measured = value.re / 2f64.powi(n as i32);
    let (best, relative_error) = IMAGE_CONSTANT_CANDIDATES
        .iter()
        .map(|(name, f)| (*name, ((measured - f()) / f()).abs()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("two candidates");
    Ok(ImageConstant {
        degree: n,
        measured,
        best,
        relative_error,
    })
}
