//! Dense symmetric discretizations of the concentration operators.
//!
//! The Galerkin matrices live in the basis `e_n`. For a symmetric interval
//! `[-R, R]` the time-side entries are `A_nm = ∫_{-R}^{R} e_n e_m (1+x²) dx`,
//! computed from the Hermite equation `h_n'' = (u² - 2n - 1) h_n`:
//!
//! ```text
//! ∫_{-a}^{a} h_n h_m du = (√(2n) h_m h_{n-1} - √(2m) h_n h_{m-1})(a) / (m - n),   n ≠ m,
//! ```
//!
//! so only the diagonal integrals `∫_{-a}^{a} h_n² du` need quadrature. The
//! `u² h_n h_m` part follows from `u h_n = √((n+1)/2) h_{n+1} + √(n/2) h_{n-1}`.
//! Entries with odd `n - m` are exact zeros.

use std::f64::consts::PI;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hermite::{hermite_unit_all, sqrt_two_pi, HermiteBasis, NODES_PER_PANEL};
use crate::kernels::{pw_kernel, Kernel, KernelConfig, PwParams};
use crate::quadrature::{composite_rule, gauss_legendre, QuadratureRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    OneSided,
    FreqSided,
    TwoSided,
    Pw,
    OracleOneSided,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::OneSided => "one_sided",
            Mode::FreqSided => "freq_sided",
            Mode::TwoSided => "two_sided",
            Mode::Pw => "pw",
            Mode::OracleOneSided => "oracle_one_sided",
        }
    }

    /// Accepts both `two_sided` and `two-sided` spellings.
    pub fn parse(s: &str) -> Result<Mode> {
        match s.replace('-', "_").as_str() {
            "one_sided" => Ok(Mode::OneSided),
            "freq_sided" => Ok(Mode::FreqSided),
            "two_sided" => Ok(Mode::TwoSided),
            "pw" => Ok(Mode::Pw),
            "oracle_one_sided" => Ok(Mode::OracleOneSided),
            other => invalid(format!("unknown mode '{other}'")),
        }
    }

    /// Galerkin modes are compressions of a positive contraction.
    pub fn is_galerkin(&self) -> bool {
        matches!(self, Mode::OneSided | Mode::FreqSided | Mode::TwoSided)
    }
}

/// How the entries were obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Discretization {
    /// Basis `e_0 .. e_{dim-1}`; diagonal integrals on a composite rule with
    /// `diagonal_nodes` nodes per interval.
    Galerkin { diagonal_nodes: usize },
    /// Symmetrized Nyström matrix on Gauss–Legendre nodes.
    Nystrom { nodes: Vec<f64>, weights: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationMatrix {
    dim: usize,
    entries: Vec<f64>,
    mode: Mode,
    r: Option<f64>,
    t: Option<f64>,
    discretization: Discretization,
}

impl ConcentrationMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major `dim × dim` entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn r(&self) -> Option<f64> {
        self.r
    }

    pub fn t(&self) -> Option<f64> {
        self.t
    }

    pub fn discretization(&self) -> &Discretization {
        &self.discretization
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Little-endian `u64` dimension followed by the row-major entries.
    pub fn write_dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        out.write_all(&(self.dim as u64).to_le_bytes())?;
        for v in &self.entries {
            out.write_all(&v.to_le_bytes())?;
        }
        out.flush()
    }

    /// Inverse of [`Self::write_dump`]: `(dim, entries)`.
    pub fn read_dump(bytes: &[u8]) -> io::Result<(usize, Vec<f64>)> {
        let bad = |m: &str| io::Error::new(io::ErrorKind::InvalidData, m.to_string());
        if bytes.len() < 8 {
            return Err(bad("dump shorter than its header"));
        }
        let dim = u64::from_le_bytes(bytes[..8].try_into().expect("8 bytes")) as usize;
        let body = &bytes[8..];
        if body.len() != dim * dim * 8 {
            return Err(bad("dump length does not match its dimension"));
        }
        let entries = body
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        Ok((dim, entries))
    }

    /// Builds a matrix from explicit entries; the lower triangle is
    /// overwritten with the upper one so the result is exactly symmetric.
    pub fn from_entries(dim: usize, mut entries: Vec<f64>, mode: Mode) -> Result<Self> {
        if entries.len() != dim * dim {
            return invalid(format!("expected {} entries, got {}", dim * dim, entries.len()));
        }
        mirror_upper(dim, &mut entries);
        Ok(ConcentrationMatrix {
            dim,
            entries,
            mode,
            r: None,
            t: None,
            discretization: Discretization::Galerkin { diagonal_nodes: 0 },
        })
    }
}

fn mirror_upper(dim: usize, entries: &mut [f64]) {
    for i in 0..dim {
        for j in 0..i {
            entries[i * dim + j] = entries[j * dim + i];
        }
    }
}

/// Default Galerkin dimension for interval half-width `r`.
///
/// The eigenfunctions have kinks at `±r`, so their Hermite coefficients
/// decay slowly and the leading eigenvalues of the compression converge
/// only like `dim^{-3/2}`, with a constant that grows about like `r^{0.9}`.
/// `1500 r^{0.6}` keeps the first `2πr²` eigenvalues within about `6e-6`
/// for `r ≤ 3`; the `40 r²` floor keeps well clear of the `≈ 2πr²` modes
/// that load the interval once `r` is large.
pub fn default_dim(r: f64) -> usize {
    (1500.0 * r.powf(0.6)).max(40.0 * r * r).ceil() as usize + 64
}

/// Default node count for the weighted Paley–Wiener discretization.
pub fn default_pw_nodes(r: f64, t: f64) -> usize {
    512usize.max((40.0 * r * t).ceil() as usize)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return invalid(format!("{name} must be positive and finite, got {v}"));
    }
    Ok(())
}

/// `∫_{-R}^{R} e_n e_m (1+x²) dx` for `n, m < dim`, row-major, with the
/// number of quadrature nodes used for the diagonal integrals.
fn time_overlap_entries(dim: usize, r: f64) -> Result<(Vec<f64>, usize)> {
    // indices up to dim are needed by the u² h_n h_m expansion
    let top = dim + 1;
    let s = sqrt_two_pi();
    let a = s * r;
    let mut edge = vec![0.0; top + 1];
    hermite_unit_all(a, &mut edge);

    // diagonal integrals ∫_{-a}^{a} h_k² du, k ≤ top, over x ∈ [0, R]
    let panel = (1.0 / ((top + 1) as f64).sqrt()).min(0.25);
    let rule = composite_rule(0.0, r, panel, NODES_PER_PANEL)?;
    let diag: Vec<f64> = {
        let partials: Vec<Vec<f64>> = rule
            .nodes()
            .par_chunks(256)
            .zip(rule.weights().par_chunks(256))
            .map(|(xs, ws)| {
                let mut acc = vec![0.0; top + 1];
                let mut buf = vec![0.0; top + 1];
                for (&x, &w) in xs.iter().zip(ws) {
                    hermite_unit_all(s * x, &mut buf);
                    for (a, h) in acc.iter_mut().zip(&buf) {
                        *a += w * h * h;
                    }
                }
                acc
            })
            .collect();
        let mut total = vec![0.0; top + 1];
        for p in partials {
            for (t, v) in total.iter_mut().zip(p) {
                *t += v;
            }
        }
        total.iter().map(|v| 2.0 * s * v).collect()
    };

    let sq: Vec<f64> = (0..=top + 1).map(|k| (k as f64).sqrt()).collect();
    let plain = |n: usize, m: usize| -> f64 {
        if n == m {
            diag[n]
        } else if (n + m) % 2 == 1 {
            0.0
        } else {
            let left = if n == 0 { 0.0 } else { 2f64.sqrt() * sq[n] * edge[m] * edge[n - 1] };
            let right = if m == 0 { 0.0 } else { 2f64.sqrt() * sq[m] * edge[n] * edge[m - 1] };
            (left - right) / (m as f64 - n as f64)
        }
    };
    // ∫ u² h_n h_m = ⟨u h_n, u h_m⟩ with u h_k = √((k+1)/2) h_{k+1} + √(k/2) h_{k-1}
    let weighted = |n: usize, m: usize| -> f64 {
        let mut v = 0.5 * sq[n + 1] * sq[m + 1] * plain(n + 1, m + 1);
        if m > 0 {
            v += 0.5 * sq[n + 1] * sq[m] * plain(n + 1, m - 1);
        }
        if n > 0 {
            v += 0.5 * sq[n] * sq[m + 1] * plain(n - 1, m + 1);
        }
        if n > 0 && m > 0 {
            v += 0.5 * sq[n] * sq[m] * plain(n - 1, m - 1);
        }
        v
    };

    let norm = HermiteBasis::new(dim.saturating_sub(1)).normalization().to_vec();
    let mut entries = vec![0.0; dim * dim];
    entries.par_chunks_mut(dim).enumerate().for_each(|(n, row)| {
        for m in (n..dim).step_by(2) {
            let integral = plain(n, m) + weighted(n, m) / (2.0 * PI);
            row[m] = norm[n] * norm[m] * integral / s;
        }
    });
    mirror_upper(dim, &mut entries);
    Ok((entries, rule.len()))
}

/// Galerkin matrix of the time concentration to `[-R, R]`.
pub fn overlap_matrix_time(dim: usize, r: f64) -> Result<ConcentrationMatrix> {
    if dim == 0 {
        return invalid("dimension must be at least 1");
    }
    check_positive("R", r)?;
    let (entries, nodes) = time_overlap_entries(dim, r)?;
    Ok(ConcentrationMatrix {
        dim,
        entries,
        mode: Mode::OneSided,
        r: Some(r),
        t: None,
        discretization: Discretization::Galerkin { diagonal_nodes: nodes },
    })
}

/// `i^{n-m}` for even `n - m`.
fn frequency_sign(n: usize, m: usize) -> f64 {
    if n.abs_diff(m) % 4 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Galerkin matrix of the frequency concentration to `[-T, T]`.
pub fn overlap_matrix_freq(dim: usize, t: f64) -> Result<ConcentrationMatrix> {
    if dim == 0 {
        return invalid("dimension must be at least 1");
    }
    check_positive("T", t)?;
    let (mut entries, nodes) = time_overlap_entries(dim, t)?;
    apply_frequency_signs(dim, &mut entries);
    Ok(ConcentrationMatrix {
        dim,
        entries,
        mode: Mode::FreqSided,
        r: None,
        t: Some(t),
        discretization: Discretization::Galerkin { diagonal_nodes: nodes },
    })
}

fn apply_frequency_signs(dim: usize, entries: &mut [f64]) {
    for n in 0..dim {
        for m in 0..dim {
            if (n + m) % 2 == 0 {
                entries[n * dim + m] *= frequency_sign(n, m);
            }
        }
    }
}

/// Galerkin matrix of the combined time and frequency concentration.
pub fn two_sided_matrix(dim: usize, r: f64, t: f64) -> Result<ConcentrationMatrix> {
    if dim == 0 {
        return invalid("dimension must be at least 1");
    }
    check_positive("R", r)?;
    check_positive("T", t)?;
    let (mut entries, nodes_r) = time_overlap_entries(dim, r)?;
    let (mut freq, nodes_t) = if t == r {
        (entries.clone(), nodes_r)
    } else {
        time_overlap_entries(dim, t)?
    };
    apply_frequency_signs(dim, &mut freq);
    for (a, b) in entries.iter_mut().zip(&freq) {
        *a += b;
    }
    Ok(ConcentrationMatrix {
        dim,
        entries,
        mode: Mode::TwoSided,
        r: Some(r),
        t: Some(t),
        discretization: Discretization::Galerkin {
            diagonal_nodes: nodes_r.max(nodes_t),
        },
    })
}

/// Symmetric Nyström matrix `√(w_j(1+x_j²)) k(x_j, x_k) √(w_k(1+x_k²))` on
/// `rule`. The rule must be symmetric about 0; entries are computed for one
/// half and mirrored, so the matrix is exactly centrosymmetric.
fn nystrom<F>(rule: &QuadratureRule, kernel: F) -> Vec<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let n = rule.len();
    let x = rule.nodes();
    let scale: Vec<f64> = rule
        .iter()
        .map(|(x, w)| (w * (1.0 + x * x)).sqrt())
        .collect();
    let mut entries = vec![0.0; n * n];
    // rows j ≤ (n-1)/2 of the upper triangle; the rest follows by symmetry
    // and by the reflection (j, k) → (n-1-j, n-1-k)
    let half = n.div_ceil(2);
    let rows: Vec<(usize, Vec<f64>)> = (0..half)
        .into_par_iter()
        .map(|j| {
            let row: Vec<f64> = (j..n - j)
                .map(|k| scale[j] * kernel(x[j], x[k]) * scale[k])
                .collect();
            (j, row)
        })
        .collect();
    for (j, row) in rows {
        for (off, v) in row.into_iter().enumerate() {
            let k = j + off;
            let (jr, kr) = (n - 1 - j, n - 1 - k);
            entries[j * n + k] = v;
            entries[k * n + j] = v;
            entries[jr * n + kr] = v;
            entries[kr * n + jr] = v;
        }
    }
    entries
}

/// Nyström discretization of the weighted Paley–Wiener concentration to
/// `[-R, R]` with `nodes` Gauss–Legendre points.
pub fn pw_operator_matrix(t: f64, r: f64, nodes: usize) -> Result<ConcentrationMatrix> {
    check_positive("R", r)?;
    let params = PwParams::new(t)?;
    if nodes < 16 {
        return invalid(format!("need at least 16 nodes, got {nodes}"));
    }
    let rule = gauss_legendre(nodes)?.mapped(-r, r);
    let entries = nystrom(&rule, |a, b| pw_kernel(&params, a, b));
    Ok(ConcentrationMatrix {
        dim: nodes,
        entries,
        mode: Mode::Pw,
        r: Some(r),
        t: Some(t),
        discretization: Discretization::Nystrom {
            nodes: rule.nodes().to_vec(),
            weights: rule.weights().to_vec(),
        },
    })
}

/// Nyström discretization of the time concentration to `[-R, R]` using the
/// reproducing kernel directly; an independent check on the Galerkin route.
pub fn kernel_operator_oracle(r: f64, nodes: usize, cfg: &KernelConfig) -> Result<ConcentrationMatrix> {
    check_positive("R", r)?;
    if nodes < 16 {
        return invalid(format!("need at least 16 nodes, got {nodes}"));
    }
    let kernel = Kernel::new(*cfg)?;
    let rule = gauss_legendre(nodes)?.mapped(-r, r);
    let entries = nystrom(&rule, |a, b| kernel.mehler(a, b));
    Ok(ConcentrationMatrix {
        dim: nodes,
        entries,
        mode: Mode::OracleOneSided,
        r: Some(r),
        t: None,
        discretization: Discretization::Nystrom {
            nodes: rule.nodes().to_vec(),
            weights: rule.weights().to_vec(),
        },
    })
}
