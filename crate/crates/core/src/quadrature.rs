//! Gauss–Legendre rules and panel-composite rules built from them.

use crate::error::{Error, Result};

const MAX_GL_POINTS: usize = 4096;

/// Nodes and positive weights on an interval `(a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    domain: (f64, f64),
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }

    /// Affine image of this rule on `(a, b)`.
    pub fn mapped(&self, a: f64, b: f64) -> QuadratureRule {
        let (lo, hi) = self.domain;
        let scale = (b - a) / (hi - lo);
        QuadratureRule {
            nodes: self.nodes.iter().map(|&x| a + (x - lo) * scale).collect(),
            weights: self.weights.iter().map(|&w| w * scale).collect(),
            domain: (a, b),
        }
    }
}

/// Evaluates `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `n`-point Gauss–Legendre rule on `(-1, 1)`, nodes ascending.
///
/// Nodes come from Newton iteration on the Legendre recurrence started at the
/// Tricomi-type estimate; the iteration stops once the update is below
/// `1e-15` (relative to the node), which takes three or four steps.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > MAX_GL_POINTS {
        return Err(Error::InvalidArgument(format!(
            "Gauss-Legendre point count {n} outside 1..={MAX_GL_POINTS}"
        )));
    }
    if n == 1 {
        return Ok(QuadratureRule {
            nodes: vec![0.0],
            weights: vec![2.0],
            domain: (-1.0, 1.0),
        });
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let half = n.div_ceil(2);
    for i in 0..half {
        let theta = std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1e-3) {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // largest node first, mirrored into ascending order
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        domain: (-1.0, 1.0),
    })
}

/// Concatenated Gauss–Legendre panels of width `panel_width` covering
/// `[a, b]`; the final panel is shortened so the rule ends exactly at `b`.
pub fn composite_rule(
    a: f64,
    b: f64,
    panel_width: f64,
    nodes_per_panel: usize,
) -> Result<QuadratureRule> {
    if !(a < b) || !(panel_width > 0.0) || nodes_per_panel < 2 {
        return Err(Error::InvalidArgument(format!(
            "composite rule needs a < b, panel_width > 0, nodes_per_panel >= 2 \
             (got a={a}, b={b}, width={panel_width}, nodes={nodes_per_panel})"
        )));
    }
    let base = gauss_legendre(nodes_per_panel)?;
    // a ratio like 8.000000000001 from rounding must not spawn a sliver panel
    let ratio = (b - a) / panel_width;
    let panels = ((ratio - 1e-9).ceil() as usize).max(1);
    let mut nodes = Vec::with_capacity(panels * nodes_per_panel);
    let mut weights = Vec::with_capacity(panels * nodes_per_panel);
    for p in 0..panels {
        let lo = a + p as f64 * panel_width;
        let hi = if p + 1 == panels { b } else { lo + panel_width };
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (x, w) in base.iter() {
            nodes.push(mid + half * x);
            weights.push(half * w);
        }
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        domain: (a, b),
    })
}

/// Composite rule with every panel boundary also placed at each of `breaks`
/// that lies strictly inside `(a, b)`. Used for integrands with kinks.
pub fn composite_rule_with_breaks(
    a: f64,
    b: f64,
    breaks: &[f64],
    panel_width: f64,
    nodes_per_panel: usize,
) -> Result<QuadratureRule> {
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&c| c > a && c < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for pair in edges.windows(2) {
        if pair[1] - pair[0] <= 1e-14 * (1.0 + pair[0].abs()) {
            continue;
        }
        let piece = composite_rule(pair[0], pair[1], panel_width, nodes_per_panel)?;
        nodes.extend_from_slice(&piece.nodes);
        weights.extend_from_slice(&piece.weights);
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        domain: (a, b),
    })
}
