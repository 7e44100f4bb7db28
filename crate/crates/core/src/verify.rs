//! Named suites of numerical self-checks. Each check reports a measured
//! quantity, the bound it is held to, and whether it passed.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::bargmann::{
    angular_coefficients, default_line_rule, fock_norm_sq, image_constant, image_gram, monomial_norm_b1,
    unitarity_check, FockConfig,
};
use crate::error::{invalid, Result};
use crate::hermite::{HermiteBasis, NODES_PER_PANEL};
use crate::kernels::{
    kernel_asymptotic, kernel_ft_asymptotic, pw_kernel, pw_kernel_diag, pw_kernel_ft, Kernel, KernelConfig,
    PwParams,
};
use crate::operators::{default_dim, kernel_operator_oracle, overlap_matrix_time, pw_operator_matrix};
use crate::quadrature::composite_rule;
use crate::spectra::eigvals_symmetric;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `measured <= bound`.
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            bound,
            pass: measured <= bound,
        }
    }

    /// Passes when `measured >= bound`.
    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            bound,
            pass: measured >= bound,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{:.6e},{:.3e},{}",
            self.name,
            self.measured,
            self.bound,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Gram,
    Kernels,
    Bargmann,
    Oracle,
    Pw,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Gram, Suite::Kernels, Suite::Bargmann, Suite::Oracle, Suite::Pw];

    pub fn parse(name: &str) -> Result<Suite> {
        match name {
            "gram" => Ok(Suite::Gram),
            "kernels" => Ok(Suite::Kernels),
            "bargmann" => Ok(Suite::Bargmann),
            "oracle" => Ok(Suite::Oracle),
            "pw" => Ok(Suite::Pw),
            other => invalid(format!("unknown suite '{other}' (expected gram, kernels, bargmann, oracle or pw)")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Gram => "gram",
            Suite::Kernels => "kernels",
            Suite::Bargmann => "bargmann",
            Suite::Oracle => "oracle",
            Suite::Pw => "pw",
        }
    }

    pub fn run(&self) -> Result<Vec<Check>> {
        match self {
            Suite::Gram => gram_suite(),
            Suite::Kernels => kernels_suite(),
            Suite::Bargmann => bargmann_suite(),
            Suite::Oracle => oracle_suite(),
            Suite::Pw => pw_suite(),
        }
    }
}

/// `S_nm = ∫ e_n e_m (1+x²) dx` over the whole line by quadrature, `n, m ≤ max_degree`.
pub fn time_gram(max_degree: usize) -> Result<Vec<Vec<f64>>> {
    let basis = HermiteBasis::new(max_degree);
    let c = basis.line_cutoff();
    let rule = composite_rule(-c, c, basis.panel_width(), NODES_PER_PANEL)?;
    let k = basis.len();
    let mut s = vec![vec![0.0; k]; k];
    let mut buf = vec![0.0; k];
    for (x, w) in rule.iter() {
        basis.eval_all(x, &mut buf);
        let weight = w * (1.0 + x * x);
        for n in 0..k {
            let a = weight * buf[n];
            for m in n..k {
                s[n][m] += a * buf[m];
            }
        }
    }
    for n in 0..k {
        for m in 0..n {
            s[n][m] = s[m][n];
        }
    }
    Ok(s)
}

fn gram_suite() -> Result<Vec<Check>> {
    let max = 48;
    let s = time_gram(max)?;
    let mut identity_dev: f64 = 0.0;
    let mut half_dev: f64 = 0.0;
    let mut sparse_dev: f64 = 0.0;
    for n in 0..=max {
        for m in 0..=max {
            // ê_n = (-i)ⁿ e_n turns the frequency half into i^{n-m} S_nm
            let phase = Complex64::i().powi((n as i32) - (m as i32));
            let g = (Complex64::new(1.0, 0.0) + phase) * s[n][m];
            let target = if n == m { 1.0 } else { 0.0 };
            identity_dev = identity_dev.max((g - target).norm());
            if n == m {
                half_dev = half_dev.max((s[n][n] - 0.5).abs());
            } else if (n + m) % 2 == 1 || n.abs_diff(m) > 2 {
                sparse_dev = sparse_dev.max(s[n][m].abs());
            }
        }
    }
    Ok(vec![
        Check::at_most("gram_identity_max_dev", identity_dev, 1e-8),
        Check::at_most("time_half_norm_max_dev", half_dev, 1e-9),
        Check::at_most("time_off_band_max_abs", sparse_dev, 1e-10),
    ])
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-30)
}

fn kernel_grid() -> Vec<(f64, f64)> {
    let axis: Vec<f64> = (0..=8).map(|k| -2.0 + 0.5 * k as f64).collect();
    let mut pts: Vec<(f64, f64)> = axis.iter().flat_map(|&x| axis.iter().map(move |&y| (x, y))).collect();
    pts.extend([(3.0, 3.2), (5.0, 5.1)]);
    pts
}

fn kernels_suite() -> Result<Vec<Check>> {
    let kernel = Kernel::new(KernelConfig::default())?;
    let grid = kernel_grid();
    let series_dev = grid
        .iter()
        .map(|&(x, y)| relative(kernel.series(x, y), kernel.mehler(x, y)))
        .fold(0.0, f64::max);
    let ft_dev = grid
        .iter()
        .map(|&(x, y)| {
            let exact = kernel.ft(x, y);
            (kernel.ft_series(x, y) - exact).norm() / exact.norm().max(1e-30)
        })
        .fold(0.0, f64::max);
    let min_diag = (0..=100).map(|k| kernel.mehler_diag(0.1 * k as f64)).fold(f64::INFINITY, f64::min);
    let mut asym_dev: f64 = 0.0;
    for y in [8.0, 8.3, 8.6] {
        asym_dev = asym_dev.max((kernel.mehler(8.0, y) / kernel_asymptotic(8.0, y)? - 1.0).abs());
    }
    let ft_asym = kernel.ft(6.0, 5.0).norm() / kernel_ft_asymptotic(6.0, 5.0)?.norm();
    let mut checks = vec![
        Check::at_most("series_vs_mehler_max_rel", series_dev, 1e-7),
        Check::at_most("ft_series_vs_integral_max_rel", ft_dev, 1e-7),
        Check::at_least("mehler_diag_min_on_0_10", min_diag, f64::MIN_POSITIVE),
        Check::at_most("asymptotic_ratio_dev_x8", asym_dev, 0.1),
        Check::at_most("ft_asymptotic_ratio_dev_6_5", (ft_asym - 1.0).abs(), 0.1),
    ];
    for (x, bound) in [(4.0, 0.15), (6.0, 0.1), (8.0, 0.07), (10.0, 0.05)] {
        let ratio = kernel.mehler_diag(x) * x / PI;
        checks.push(Check::at_most(format!("diag_ratio_dev_x{x}"), (ratio - 1.0).abs(), bound));
    }
    Ok(checks)
}

fn bargmann_suite() -> Result<Vec<Check>> {
    let rule = default_line_rule();
    let cfg = FockConfig::default();
    let mut checks = Vec::new();
    let mono = (0..=10)
        .map(|n| {
            let q = fock_norm_sq(|z| z.powi(n as i32), &cfg)?;
            Ok(relative(q, monomial_norm_b1(n)?))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(Check::at_most("fock_monomial_norm_max_rel", mono, 1e-8));

    let unit: Vec<_> = (0..=6).map(|n| unitarity_check(n, &cfg, &rule)).collect::<Result<_>>()?;
    let b1_dev = unit.iter().map(|u| (u.b1_norm_of_image - 1.0).abs()).fold(0.0, f64::max);
    checks.push(Check::at_most("b1_image_norm_max_dev", b1_dev, 1e-3));
    let ratio0 = unit[0].b0_ratio;
    let spread = unit.iter().map(|u| relative(u.b0_ratio, ratio0)).fold(0.0, f64::max);
    checks.push(Check::at_most("b0_ratio_spread", spread, 1e-6));
    checks.push(Check::at_most("b0_ratio_vs_inverse_pi", relative(ratio0, 1.0 / PI), 1e-6));

    let gram = image_gram(6, &cfg, &rule)?;
    let mut gram_dev: f64 = 0.0;
    for (n, row) in gram.iter().enumerate() {
        for (m, v) in row.iter().enumerate() {
            gram_dev = gram_dev.max((v - if n == m { 1.0 } else { 0.0 }).norm());
        }
    }
    checks.push(Check::at_most("b1_image_gram_max_dev", gram_dev, 1e-3));

    let mut leak: f64 = 0.0;
    for n in 0..=8 {
        let coef = angular_coefficients(n, 1.0, 32, &rule);
        let main = coef[n].norm();
        for (k, c) in coef.iter().enumerate() {
            if k != n {
                leak = leak.max(c.norm() / main);
            }
        }
    }
    checks.push(Check::at_most("image_angular_leakage", leak, 1e-7));

    let consts: Vec<_> = (0..=8).map(|n| image_constant(n, &rule)).collect::<Result<_>>()?;
    let err = consts.iter().map(|c| c.relative_error).fold(0.0, f64::max);
    let name = if consts.iter().all(|c| c.best == consts[0].best) {
        format!("image_constant_is_{}", consts[0].best)
    } else {
        "image_constant_inconsistent".to_string()
    };
    checks.push(Check::at_most(name, err, 1e-8));
    Ok(checks)
}

fn oracle_suite() -> Result<Vec<Check>> {
    let cfg = KernelConfig::default();
    let mut checks = Vec::new();
    for r in [1.0, 2.0, 3.0] {
        let count = (2.0 * PI * r * r).ceil() as usize;
        let galerkin = eigvals_symmetric(&overlap_matrix_time(default_dim(r), r)?, false)?;
        let nodes = (400.0 * r) as usize;
        let coarse_m = kernel_operator_oracle(r, nodes, &cfg)?;
        let coarse = eigvals_symmetric(&coarse_m, false)?;
        let fine = eigvals_symmetric(&kernel_operator_oracle(r, 2 * nodes, &cfg)?, false)?;
        // the kink of K on the diagonal makes the Nyström error O(M^{-2})
        let dev = (0..count)
            .map(|k| {
                let extrapolated = (4.0 * fine.eigenvalues()[k] - coarse.eigenvalues()[k]) / 3.0;
                (extrapolated - galerkin.eigenvalues()[k]).abs()
            })
            .fold(0.0, f64::max);
        checks.push(Check::at_most(format!("galerkin_vs_oracle_top{count}_R{r}"), dev, 1e-5));
        let exact = crate::asymptotics::trace_integral(crate::operators::Mode::OneSided, Some(r), None, &cfg)?;
        checks.push(Check::at_most(
            format!("oracle_trace_vs_integral_R{r}"),
            relative(coarse_m.trace(), exact),
            1e-7,
        ));
    }
    Ok(checks)
}

/// `∫ f(y) L_t(y)(1+y²) dy` over the whole line for a band-limited `f`.
///
/// The integral over `[-Y, Y]` converges like `a/Y + b/Y²` once `2TY` is an
/// integer (the oscillating tails then share one phase), so three nested
/// truncations are extrapolated.
pub fn pw_pairing<F: Fn(f64) -> f64>(t_band: f64, t: f64, f: F) -> Result<f64> {
    let params = PwParams::new(t_band)?;
    let base = (25.0 * 2.0 * t_band).ceil() / (2.0 * t_band);
    let width = 1.0 / (4.0 * t_band + 4.0);
    let integrand = |y: f64| f(y) * pw_kernel(&params, t, y) * (1.0 + y * y);
    let truncated = |cut: f64| -> Result<f64> {
        let left = composite_rule(-cut, t, width, NODES_PER_PANEL)?;
        let right = composite_rule(t, cut, width, NODES_PER_PANEL)?;
        Ok(left.integrate(integrand) + right.integrate(integrand))
    };
    let (i1, i2, i4) = (truncated(base)?, truncated(2.0 * base)?, truncated(4.0 * base)?);
    let r1 = 2.0 * i2 - i1;
    let r2 = 2.0 * i4 - i2;
    Ok((4.0 * r2 - r1) / 3.0)
}

/// `sin(2πTy)/(πy)`, whose transform is the indicator of `[-T, T]`. It is
/// not in the weighted space (`∫ f² y²` diverges).
pub fn band_sinc(t_band: f64) -> impl Fn(f64) -> f64 {
    move |y: f64| {
        if y == 0.0 {
            2.0 * t_band
        } else {
            (2.0 * PI * t_band * y).sin() / (PI * y)
        }
    }
}

/// `(sin(πTy)/(πTy))²`, whose transform is a triangle on `[-T, T]`; it does
/// belong to the weighted space.
pub fn band_sinc_squared(t_band: f64) -> impl Fn(f64) -> f64 {
    move |y: f64| {
        let u = PI * t_band * y;
        if u == 0.0 {
            1.0
        } else {
            (u.sin() / u).powi(2)
        }
    }
}

fn pw_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let p1 = PwParams::new(1.0)?;
    let edge = [0.5, -1.3, 2.0]
        .iter()
        .map(|&t| Ok(pw_kernel_ft(&p1, t, 1.0)?.norm().max(pw_kernel_ft(&p1, t, -1.0)?.norm())))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(Check::at_most("ft_vanishes_at_band_edges", edge, 1e-10));

    let h = 1e-4;
    let mut ode: f64 = 0.0;
    for &(t, y) in &[
        (0.5, 0.3),
        (0.5, -0.7),
        (-1.2, 0.1),
        (2.0, 0.9),
        (0.0, 0.0),
        (3.5, -0.4),
        (-0.8, 0.55),
        (1.1, -0.95),
        (0.25, 0.8),
        (-2.6, -0.2),
    ] {
        let f = |y: f64| pw_kernel_ft(&p1, t, y);
        let second = (f(y + h)? - f(y)? * 2.0 + f(y - h)?) / (h * h);
        let rhs = Complex64::from_polar(1.0, -2.0 * PI * y * t);
        ode = ode.max((f(y)? - second / (4.0 * PI * PI) - rhs).norm());
    }
    checks.push(Check::at_most("ft_ode_residual_max", ode, 1e-6));

    let sinc = band_sinc(1.0);
    checks.push(Check::at_most(
        "reproducing_sinc_T1_t0.7",
        (pw_pairing(1.0, 0.7, &sinc)? - sinc(0.7)).abs(),
        1e-6,
    ));
    let tri = band_sinc_squared(1.0);
    checks.push(Check::at_most(
        "reproducing_sinc_squared_T1_t0.7",
        (pw_pairing(1.0, 0.7, &tri)? - tri(0.7)).abs(),
        1e-6,
    ));

    let (r, t) = (3.0, 2.0);
    let p2 = PwParams::new(t)?;
    let matrix = pw_operator_matrix(t, r, crate::operators::default_pw_nodes(r, t))?;
    let exact = composite_rule(-r, r, 1.0 / (4.0 * t + 4.0), NODES_PER_PANEL)?
        .integrate(|x| pw_kernel_diag(&p2, x) * (1.0 + x * x));
    checks.push(Check::at_most("matrix_trace_vs_integral", relative(matrix.trace(), exact), 1e-8));
    let spectrum = eigvals_symmetric(&matrix, false)?;
    let e = spectrum.eigenvalues();
    let excess = (e[0] - 1.0).max(-e[e.len() - 1]);
    checks.push(Check::at_most("eigenvalues_within_unit_interval", excess, 1e-8));
    checks.push(Check::at_most(
        "plunge_below_plateau",
        spectrum.plunge_width(0.05) as f64,
        spectrum.count_above(0.95) as f64 - 1.0,
    ));
    Ok(checks)
}
