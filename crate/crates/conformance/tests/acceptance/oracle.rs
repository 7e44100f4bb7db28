//! Reference computations written from the defining formulas, sharing no
//! evaluation code with the library beyond Gauss–Legendre nodes.

use std::f64::consts::PI;
use std::sync::OnceLock;

use concentration::quadrature::{gauss_legendre, QuadratureRule};
use num_complex::Complex64;

const EXPONENT: f64 = 2.0 * PI - 0.5;

fn gl16() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16).expect("16-point rule"))
}

/// Integrates `f` over `[a, b]` with `panels` equal Gauss–Legendre panels of 16 nodes.
pub fn integrate(a: f64, b: f64, panels: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let rule = gl16();
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (x, w) in rule.iter() {
            total += 0.5 * h * w * f(lo + 0.5 * h * (x + 1.0));
        }
    }
    total
}

/// Same as [`integrate`] with panel edges at every listed break inside `(a, b)`.
pub fn integrate_with_breaks(a: f64, b: f64, breaks: &[f64], width: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let mut edges = vec![a];
    edges.extend(breaks.iter().copied().filter(|&c| c > a && c < b));
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    edges
        .windows(2)
        .filter(|e| e[1] > e[0])
        .map(|e| integrate(e[0], e[1], ((e[1] - e[0]) / width).ceil().max(1.0) as usize, &mut f))
        .sum()
}

/// Normalized Hermite functions `h̃_0..=h̃_max` at `u` by the textbook three-term recurrence.
pub fn hermite_functions(max: usize, u: f64) -> Vec<f64> {
    let mut h = vec![0.0; max + 1];
    h[0] = PI.powf(-0.25) * (-0.5 * u * u).exp();
    if max >= 1 {
        h[1] = 2f64.sqrt() * u * h[0];
    }
    for k in 1..max {
        let kf = k as f64;
        h[k + 1] = (2.0 / (kf + 1.0)).sqrt() * u * h[k] - (kf / (kf + 1.0)).sqrt() * h[k - 1];
    }
    h
}

/// Basis values and first derivatives at `x`, degrees `0..=max`.
pub fn basis_and_derivative(max: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    let s = (2.0 * PI).sqrt();
    let h = hermite_functions(max + 1, s * x);
    let mut value = vec![0.0; max + 1];
    let mut slope = vec![0.0; max + 1];
    for n in 0..=max {
        let nf = n as f64;
        let c = (2f64.sqrt() * PI.powf(1.5) / (nf + 2.0 * PI + 0.5)).sqrt();
        value[n] = c * h[n];
        let lower = if n == 0 { 0.0 } else { (nf / 2.0).sqrt() * h[n - 1] };
        slope[n] = c * s * (lower - ((nf + 1.0) / 2.0).sqrt() * h[n + 1]);
    }
    (value, slope)
}

/// Full inner-product Gram matrix `∫(2+x²) e_n e_m + (1/4π²) ∫ e_n' e_m'` for degrees `0..=max`.
pub fn space_gram(max: usize) -> Vec<Vec<f64>> {
    let k = max + 1;
    let mut g = vec![vec![0.0; k]; k];
    let rule = gl16();
    let (a, width) = (-9.0, 0.05);
    let panels = (18.0 / width) as usize;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        for (t, w) in rule.iter() {
            let x = lo + 0.5 * width * (t + 1.0);
            let weight = 0.5 * width * w;
            let (v, d) = basis_and_derivative(max, x);
            for n in 0..k {
                for m in 0..k {
                    g[n][m] += weight * ((2.0 + x * x) * v[n] * v[m] + d[n] * d[m] / (4.0 * PI * PI));
                }
            }
        }
    }
    g
}

/// Reproducing kernel by the integral representation, with `t = cos φ` and
/// dyadic panels in `φ` toward the endpoint where the off-diagonal factor switches on.
pub fn kernel(x: f64, y: f64) -> f64 {
    let gap = (x - y).powi(2);
    let sum = (x + y).powi(2);
    let f = |phi: f64| {
        let t = phi.cos();
        if t <= 0.0 {
            return 0.0;
        }
        let below = 2.0 * (0.5 * phi).sin().powi(2);
        let above = 1.0 + t;
        let e = -0.5 * PI * (gap * above / below + sum * below / above) + EXPONENT * t.ln();
        e.exp()
    };
    let mut total = integrate(1.0, 0.5 * PI, 3, f) + integrate(0.5, 1.0, 2, f);
    let mut hi: f64 = 0.5;
    loop {
        if gap == 0.0 && hi < 1.0 / 64.0 {
            total += integrate(0.0, hi, 1, f);
            break;
        }
        if gap > 0.0 && 2.0 * PI * gap / (hi * hi) > 800.0 {
            break;
        }
        total += integrate(0.5 * hi, hi, 1, f);
        hi *= 0.5;
    }
    2f64.sqrt() * PI * total
}

/// Fourier transform of the reproducing kernel in its second argument.
pub fn kernel_ft(x: f64, y: f64) -> Complex64 {
    let q = x * x + y * y;
    let panels = 2 + (2.0 * (x * y).abs()).ceil() as usize;
    let h = 1.0 / panels as f64;
    let rule = gl16();
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        for (s, w) in rule.iter() {
            let t = h * (p as f64 + 0.5 * (s + 1.0));
            let r = 1.0 + t * t;
            let magnitude = (EXPONENT * t.ln() - PI * q * (1.0 - t * t) / r).exp() / r.sqrt();
            acc += Complex64::from_polar(0.5 * h * w * magnitude, -4.0 * PI * x * y * t / r);
        }
    }
    acc * 2f64.sqrt() * PI
}

/// Closed-form weighted Paley–Wiener kernel with band `[-band, band]`.
pub fn pw_kernel(band: f64, t: f64, y: f64) -> f64 {
    let d = t - y;
    let scale = (1.0 + t * t) * (1.0 + y * y);
    let sinc = if d.abs() < 1e-8 {
        2.0 * band * (1.0 - (2.0 * PI * band * d).powi(2) / 6.0)
    } else {
        (2.0 * PI * band * d).sin() / (PI * d)
    };
    let q = 4.0 * PI * band;
    // coth and 1/sinh from a single decaying exponential
    let e = (-q).exp();
    let coth = (1.0 + e * e) / (1.0 - e * e);
    let csch = 2.0 * e / (1.0 - e * e);
    let correction = -coth * (2.0 * PI * band * d).cos() + csch * (2.0 * PI * band * (t + y)).cos();
    ((1.0 + t * y) * sinc + correction / PI) / scale
}

/// `∫_{-r}^{r} L_t(t)(1+t²) dt`: the constant part exactly, the oscillating part by quadrature.
pub fn pw_trace(band: f64, r: f64) -> f64 {
    let q = 4.0 * PI * band;
    let e = (-q).exp();
    let coth = (1.0 + e * e) / (1.0 - e * e);
    let csch = 2.0 * e / (1.0 - e * e);
    let panels = (2.0 * r * band * 8.0).ceil() as usize + 8;
    let wave = integrate(-r, r, panels, |t| (q * t).cos() / (1.0 + t * t));
    4.0 * r * band - coth * 2.0 * r.atan() / PI + csch * wave / PI
}

/// `∫ f(y) k(t, y)(1+y²) dy` over the line: symmetric truncations at `Y, 2Y, 4Y`
/// with `2·band·Y` integral and two extrapolation steps removing `1/Y` and `1/Y²`.
pub fn pw_pairing(band: f64, t: f64, kernel: impl Fn(f64, f64) -> f64, f: impl Fn(f64) -> f64) -> f64 {
    let base = (50.0 * band).ceil() / (2.0 * band);
    let width = 0.05 / band.max(1.0);
    let truncated = |cut: f64| integrate_with_breaks(-cut, cut, &[t], width, |y| f(y) * kernel(t, y) * (1.0 + y * y));
    let (a, b, c) = (truncated(base), truncated(2.0 * base), truncated(4.0 * base));
    let first = 2.0 * b - a;
    let second = 2.0 * c - b;
    (4.0 * second - first) / 3.0
}

/// One-sided trace `∫_{-r}^{r} (1+x²) K(x,x) dx`.
pub fn trace_one_sided(r: f64) -> f64 {
    2.0 * integrate(0.0, r, (r / 0.1).ceil() as usize, |x| (1.0 + x * x) * kernel(x, x))
}

/// One-sided Hilbert–Schmidt norm `∬_{[-r,r]²} (1+x²)(1+y²) K(x,y)²`.
pub fn hs_one_sided(r: f64) -> f64 {
    2.0 * integrate(0.0, r, (r / 0.1).ceil() as usize, |x| {
        let inner = integrate_with_breaks(-r, r, &[x], 0.05, |y| (1.0 + y * y) * kernel(x, y).powi(2));
        (1.0 + x * x) * inner
    })
}

/// `tr(AB) = ∬_{[-r,r]×[-t,t]} (1+x²)(1+ξ²) |K̂(x,ξ)|²`.
pub fn hs_cross(r: f64, t: f64) -> f64 {
    4.0 * integrate(0.0, r, (r / 0.2).ceil() as usize, |x| {
        let inner = integrate(0.0, t, (t / 0.2).ceil() as usize, |xi| (1.0 + xi * xi) * kernel_ft(x, xi).norm_sqr());
        (1.0 + x * x) * inner
    })
}

/// Symmetric Nyström matrix of `f ↦ ∫_{-r}^{r} k(x,y) f(y)(1+y²) dy` on `nodes`
/// Gauss–Legendre points, built exactly centrosymmetric.
pub fn nystrom(r: f64, nodes: usize, k: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let rule = gauss_legendre(nodes).expect("rule").mapped(-r, r);
    let m = nodes;
    let mut x = rule.nodes().to_vec();
    let mut w = rule.weights().to_vec();
    for i in 0..m / 2 {
        x[m - 1 - i] = -x[i];
        w[m - 1 - i] = w[i];
    }
    if m % 2 == 1 {
        x[m / 2] = 0.0;
    }
    let scale: Vec<f64> = (0..m).map(|i| (w[i] * (1.0 + x[i] * x[i])).sqrt()).collect();
    let mut a = vec![0.0; m * m];
    for i in 0..m {
        for j in i..m {
            if i + j > m - 1 {
                continue;
            }
            let v = scale[i] * scale[j] * k(x[i], x[j]);
            let (ri, rj) = (m - 1 - j, m - 1 - i);
            a[i * m + j] = v;
            a[j * m + i] = v;
            a[ri * m + rj] = v;
            a[rj * m + ri] = v;
        }
    }
    a
}
