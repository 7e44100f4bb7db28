mod oracle;

use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use concentration::bargmann::{default_line_rule, fock_norm_sq, image_constant, unitarity_check, FockConfig};
use concentration::hermite::HermiteBasis;
use concentration::kernels::{kernel_asymptotic, kernel_ft_asymptotic, pw_kernel, pw_kernel_ft, Kernel, KernelConfig, PwParams};
use concentration::operators::{
    default_dim, default_pw_nodes, overlap_matrix_time, pw_operator_matrix, two_sided_matrix, ConcentrationMatrix,
};
use concentration::spectra::{double_orthogonality_defect, eigen_dense, eigvals_symmetric, SymSpectrum};
use concentration::verify::time_gram;
use num_complex::Complex64;

enum Bound {
    AtMost(f64),
    AtLeast(f64),
    Within(f64, f64),
    Info,
}

struct Part {
    label: String,
    measured: f64,
    bound: Bound,
}

impl Part {
    fn passes(&self) -> bool {
        match self.bound {
            Bound::AtMost(b) => self.measured <= b,
            Bound::AtLeast(b) => self.measured >= b,
            Bound::Within(lo, hi) => self.measured >= lo && self.measured <= hi,
            Bound::Info => true,
        }
    }
}

fn number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e7 {
        format!("{v:.0}")
    } else {
        format!("{v:.4e}")
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (bound, verdict) = match self.bound {
            Bound::AtMost(b) => (format!("<= {}", number(b)), if self.passes() { "ok" } else { "FAIL" }),
            Bound::AtLeast(b) => (format!(">= {}", number(b)), if self.passes() { "ok" } else { "FAIL" }),
            Bound::Within(lo, hi) => (
                format!("in [{}, {}]", number(lo), number(hi)),
                if self.passes() { "ok" } else { "FAIL" },
            ),
            Bound::Info => (String::new(), "info"),
        };
        write!(f, "    {:<58} {:>12}  {:<26} {}", self.label, number(self.measured), bound, verdict)
    }
}

struct Criterion {
    id: usize,
    title: &'static str,
    parts: Vec<Part>,
}

impl Criterion {
    fn new(id: usize, title: &'static str) -> Self {
        Criterion { id, title, parts: Vec::new() }
    }

    fn at_most(&mut self, label: impl Into<String>, measured: f64, bound: f64) {
        self.push(label, measured, Bound::AtMost(bound));
    }

    fn at_least(&mut self, label: impl Into<String>, measured: f64, bound: f64) {
        self.push(label, measured, Bound::AtLeast(bound));
    }

    fn within(&mut self, label: impl Into<String>, measured: f64, lo: f64, hi: f64) {
        self.push(label, measured, Bound::Within(lo, hi));
    }

    fn info(&mut self, label: impl Into<String>, measured: f64) {
        self.push(label, measured, Bound::Info);
    }

    fn holds(&mut self, label: impl Into<String>, ok: bool) {
        self.push(label, if ok { 1.0 } else { 0.0 }, Bound::Within(1.0, 1.0));
    }

    fn push(&mut self, label: impl Into<String>, measured: f64, bound: Bound) {
        // NaN never satisfies a bound, so a broken computation reads as a failure
        self.parts.push(Part { label: label.into(), measured, bound });
    }

    fn passed(&self) -> bool {
        self.parts.iter().all(Part::passes)
    }

    fn report(&self) -> bool {
        let failed = self.parts.iter().filter(|p| !p.passes()).count();
        let verdict = if failed == 0 {
            "PASS".to_string()
        } else {
            format!("FAIL ({failed} of {} checks)", self.parts.iter().filter(|p| !matches!(p.bound, Bound::Info)).count())
        };
        println!("criterion {:>2} {:<52} {verdict}", self.id, self.title);
        for part in &self.parts {
            println!("{part}");
        }
        self.passed()
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-30)
}

fn spectrum(m: &ConcentrationMatrix) -> SymSpectrum {
    eigvals_symmetric(m, false).expect("spectrum")
}

/// Every spectrum computed in the run, for the range criterion.
struct Ranges(Vec<(String, f64, f64)>);

impl Ranges {
    fn record(&mut self, label: impl Into<String>, s: &SymSpectrum) {
        let v = s.eigenvalues();
        self.0.push((label.into(), v[v.len() - 1], v[0]));
    }
}

fn kernel_grid() -> Vec<(f64, f64)> {
    let axis: Vec<f64> = (0..=8).map(|k| -2.0 + 0.5 * k as f64).collect();
    let mut pts: Vec<(f64, f64)> = axis.iter().flat_map(|&x| axis.iter().map(move |&y| (x, y))).collect();
    pts.extend([(3.0, 3.2), (5.0, 5.1)]);
    pts
}

fn gram_identity() -> Criterion {
    let mut c = Criterion::new(1, "space Gram matrix of the basis is the identity");
    let start = Instant::now();
    let time = time_gram(47).expect("gram");
    let mut library_dev: f64 = 0.0;
    for (n, row) in time.iter().enumerate() {
        for (m, &v) in row.iter().enumerate() {
            let phase = Complex64::i().powi(n as i32 - m as i32);
            let g = (phase + 1.0) * v;
            library_dev = library_dev.max((g - if n == m { 1.0 } else { 0.0 }).norm());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    c.at_most("library Gram max |G - I|, degrees 0..47", library_dev, 1e-8);

    let reference = oracle::space_gram(47);
    let mut oracle_dev: f64 = 0.0;
    for (n, row) in reference.iter().enumerate() {
        for (m, &v) in row.iter().enumerate() {
            oracle_dev = oracle_dev.max((v - if n == m { 1.0 } else { 0.0 }).abs());
        }
    }
    c.at_most("reference Gram from the norm definition, max |G - I|", oracle_dev, 1e-8);

    let basis = HermiteBasis::new(47);
    let mut value_dev: f64 = 0.0;
    for k in 0..=60 {
        let x = -6.0 + 0.2 * k as f64;
        let (v, _) = oracle::basis_and_derivative(47, x);
        for (n, reference) in v.iter().enumerate() {
            value_dev = value_dev.max((basis.eval(n, x).expect("degree") - reference).abs());
        }
    }
    c.info("library basis vs reference recurrence, max abs", value_dev);
    c.at_most("runtime of the library Gram (s)", elapsed, 5.0);
    c
}

fn mehler_cross_check(kernel: &Kernel) -> Criterion {
    let mut c = Criterion::new(2, "series and integral kernel representations agree");
    let start = Instant::now();
    let grid = kernel_grid();
    let mut series_dev: f64 = 0.0;
    let mut ft_dev: f64 = 0.0;
    for &(x, y) in &grid {
        series_dev = series_dev.max(rel(kernel.series(x, y), kernel.mehler(x, y)));
        let exact = kernel.ft(x, y);
        ft_dev = ft_dev.max((kernel.ft_series(x, y) - exact).norm() / exact.norm().max(1e-30));
    }
    let elapsed = start.elapsed().as_secs_f64();
    c.at_most("kernel series vs integral, max relative", series_dev, 1e-7);
    c.at_most("transform series vs integral, max relative", ft_dev, 1e-7);
    c.at_most("runtime (s)", elapsed, 5.0);

    let mut diag_dev: f64 = 0.0;
    let mut large_dev: f64 = 0.0;
    let mut integral_dev: f64 = 0.0;
    let mut ft_integral_dev: f64 = 0.0;
    for &(x, y) in &grid {
        let exact = kernel.mehler(x, y);
        let r = rel(kernel.series(x, y), exact);
        if x == y {
            diag_dev = diag_dev.max(r);
        }
        if exact > 1e-3 {
            large_dev = large_dev.max(r);
        }
        integral_dev = integral_dev.max((exact - oracle::kernel(x, y)).abs() / exact.max(1e-300).max(1e-12));
        ft_integral_dev = ft_integral_dev.max((kernel.ft(x, y) - oracle::kernel_ft(x, y)).norm());
    }
    c.info("  on the diagonal only", diag_dev);
    c.info("  where K > 1e-3", large_dev);
    let at = |terms| {
        let k = Kernel::new(KernelConfig::default().with_series_terms(terms)).expect("kernel");
        kernel.mehler(0.5, 0.5) - k.series(0.5, 0.5)
    };
    c.info("  diagonal truncation error ratio, 400 vs 1600 terms", at(400) / at(1600));
    c.info("library integral vs reference integral, max relative", integral_dev);
    c.info("library transform vs reference transform, max abs", ft_integral_dev);
    c
}

fn fock_norms() -> Criterion {
    let mut c = Criterion::new(3, "Fock space norms and unitarity of the transform");
    let cfg = FockConfig::default();
    let rule = default_line_rule();
    let mut mono: f64 = 0.0;
    let mut factorial = 1.0;
    for n in 0..=10usize {
        if n > 0 {
            factorial *= n as f64;
        }
        let closed = PI * factorial * (n as f64 + 2.0 * PI + 0.5) / 2f64.powi(n as i32 + 1);
        let measured = fock_norm_sq(|z| z.powi(n as i32), &cfg).expect("norm");
        mono = mono.max(rel(measured, closed));
    }
    c.at_most("monomial norms n <= 10, max relative", mono, 1e-8);

    let checks: Vec<_> = (0..=6).map(|n| unitarity_check(n, &cfg, &rule).expect("unitarity")).collect();
    let b1 = checks.iter().map(|u| (u.b1_norm_of_image - 1.0).abs()).fold(0.0, f64::max);
    c.at_most("image norms n <= 6, max |norm^2 - 1|", b1, 1e-3);
    let ratio = checks[0].b0_ratio;
    let spread = checks.iter().map(|u| rel(u.b0_ratio, ratio)).fold(0.0, f64::max);
    c.at_most("unweighted Fock ratio spread across n", spread, 1e-6);
    c.info("unweighted Fock ratio value", ratio);
    c.info("  times pi", ratio * PI);
    let image = image_constant(4, &rule).expect("constant");
    c.info("monomial image constant", image.measured);
    c.info("  relative to 2^(1/4)/pi", image.measured / (2f64.powf(0.25) / PI));
    c
}

fn kernel_asymptotics(kernel: &Kernel) -> Criterion {
    let mut c = Criterion::new(4, "kernel and transform match their asymptotic forms");
    for y in [8.0, 8.3, 8.6] {
        let ratio = kernel.mehler(8.0, y) / kernel_asymptotic(8.0, y).expect("asymptotic");
        c.within(format!("K(8, {y}) over its asymptotic form"), ratio, 0.9, 1.1);
        c.info(format!("  reference kernel ratio at y = {y}"), oracle::kernel(8.0, y) / kernel_asymptotic(8.0, y).unwrap());
        c.info("  same ratio times (y/x)^(2 pi)", ratio * (y / 8.0f64).powf(2.0 * PI));
    }
    let ft = kernel.ft(6.0, 5.0).norm() / kernel_ft_asymptotic(6.0, 5.0).expect("asymptotic").norm();
    c.within("|K^(6, 5)| times 61", ft, 0.9, 1.1);
    c
}

fn pw_identities(ranges: &mut Ranges) -> Criterion {
    let mut c = Criterion::new(5, "weighted Paley-Wiener kernel identities");
    let mut edge: f64 = 0.0;
    for band in [0.5, 1.0, 2.0] {
        let p = PwParams::new(band).unwrap();
        for t in [-1.3, 0.0, 0.5, 2.0] {
            edge = edge.max(pw_kernel_ft(&p, t, band).unwrap().norm());
            edge = edge.max(pw_kernel_ft(&p, t, -band).unwrap().norm());
        }
    }
    c.at_most("transform at the band edges, max modulus", edge, 1e-10);

    let p = PwParams::new(1.0).unwrap();
    let h = 1e-4;
    let mut ode: f64 = 0.0;
    let samples = [(0.5, 0.3), (0.5, -0.7), (0.0, 0.0), (-1.2, 0.45), (2.0, 0.9), (3.5, -0.2), (-0.3, 0.6), (1.0, -0.95), (0.8, 0.1), (-2.4, -0.5)];
    for &(t, y) in &samples {
        let f = |y: f64| pw_kernel_ft(&p, t, y).unwrap();
        let second = (f(y + h) - f(y) * 2.0 + f(y - h)) / (h * h);
        ode = ode.max((f(y) - second / (4.0 * PI * PI) - Complex64::from_polar(1.0, -2.0 * PI * y * t)).norm());
    }
    c.at_most("boundary problem residual at 10 points, max", ode, 1e-6);

    let library = |t: f64, y: f64| pw_kernel(&p, t, y);
    let sinc = |y: f64| if y == 0.0 { 2.0 } else { (2.0 * PI * y).sin() / (PI * y) };
    let pairing = oracle::pw_pairing(1.0, 0.7, library, sinc);
    c.at_most("reproducing error on the band sinc at t = 0.7", (pairing - sinc(0.7)).abs(), 1e-6);
    let tri = |y: f64| {
        let u = PI * y;
        if u == 0.0 { 1.0 } else { (u.sin() / u).powi(2) }
    };
    c.info("  same for the squared sinc (inside the space)", (oracle::pw_pairing(1.0, 0.7, library, tri) - tri(0.7)).abs());
    let mut kernel_dev: f64 = 0.0;
    for k in 0..40 {
        let (t, y) = (-4.0 + 0.21 * k as f64, 3.0 - 0.17 * k as f64);
        kernel_dev = kernel_dev.max((library(t, y) - oracle::pw_kernel(1.0, t, y)).abs());
    }
    c.info("  library vs reference kernel, max abs", kernel_dev);

    let m = pw_operator_matrix(2.0, 3.0, default_pw_nodes(3.0, 2.0)).unwrap();
    let exact = oracle::pw_trace(2.0, 3.0);
    c.at_most("matrix trace vs diagonal integral at R = 3, T = 2", rel(m.trace(), exact), 1e-8);
    c.info("  diagonal integral", exact);
    ranges.record("pw R=3 T=2", &spectrum(&m));
    c
}

fn exact_identities(ranges: &mut Ranges) -> Criterion {
    let mut c = Criterion::new(6, "Galerkin trace and Hilbert-Schmidt identities");
    for r in [2.0, 3.0] {
        let trace = oracle::trace_one_sided(r);
        let hs = oracle::hs_one_sided(r);
        let cross = oracle::hs_cross(r, r);
        let dim = default_dim(r);

        let one = spectrum(&overlap_matrix_time(dim, r).unwrap());
        ranges.record(format!("one-sided R={r}"), &one);
        c.at_most(format!("one-sided R = {r}: trace, relative (dim {dim})"), rel(one.moment(1), trace), 1e-5);
        c.at_most(format!("one-sided R = {r}: sum of squares, relative"), rel(one.moment(2), hs), 1e-3);

        let two = spectrum(&two_sided_matrix(dim, r, r).unwrap());
        ranges.record(format!("two-sided R=T={r}"), &two);
        let two_hs = 2.0 * hs + 2.0 * cross;
        c.at_most(format!("two-sided R = T = {r}: trace, relative"), rel(two.moment(1), 2.0 * trace), 1e-5);
        c.at_most(format!("two-sided R = T = {r}: sum of squares, relative"), rel(two.moment(2), two_hs), 1e-3);
        c.info(format!("  exact one-sided trace at R = {r}"), trace);
        c.info(format!("  exact two-sided sum of squares at R = {r}"), two_hs);
    }
    let r = 2.0;
    let exact = oracle::trace_one_sided(r);
    let gap = |dim| exact - overlap_matrix_time(dim, r).unwrap().trace();
    c.info("  trace gap ratio at R = 2, dim 500 vs 2000", gap(500) / gap(2000));
    c
}

fn top_eigenvalues(s: &SymSpectrum, count: usize) -> Vec<f64> {
    s.eigenvalues()[..count].to_vec()
}

fn oracle_equivalence(ranges: &mut Ranges) -> Criterion {
    let mut c = Criterion::new(7, "Galerkin and kernel-quadrature spectra agree");
    let start = Instant::now();
    let r = 3.0;
    let galerkin = spectrum(&overlap_matrix_time(default_dim(r), r).unwrap());
    let nodes = 400 * r as usize;
    let coarse = eigen_dense(nodes, &oracle::nystrom(r, nodes, oracle::kernel), false).unwrap();
    let fine = eigen_dense(2 * nodes, &oracle::nystrom(r, 2 * nodes, oracle::kernel), false).unwrap();
    ranges.record("reference quadrature R=3", &fine);
    let elapsed = start.elapsed().as_secs_f64();
    let g = top_eigenvalues(&galerkin, 50);
    let (a, b) = (top_eigenvalues(&coarse, 50), top_eigenvalues(&fine, 50));
    let mut dev: f64 = 0.0;
    let mut raw: f64 = 0.0;
    for k in 0..50 {
        let extrapolated = (4.0 * b[k] - a[k]) / 3.0;
        dev = dev.max((g[k] - extrapolated).abs());
        raw = raw.max((g[k] - b[k]).abs());
    }
    c.at_most("top 50 at R = 3, max |difference|", dev, 1e-5);
    c.info(format!("  without extrapolation ({} nodes)", 2 * nodes), raw);
    c.at_most("runtime (s)", elapsed, 60.0);
    c
}

fn two_sided_asymptotics(ranges: &mut Ranges) -> Criterion {
    let mut c = Criterion::new(8, "two-sided trace and Hilbert-Schmidt trends");
    let widths = [2.0, 3.0, 4.0, 5.0];
    let ratios: Vec<f64> = widths.iter().map(|&r| 2.0 * oracle::trace_one_sided(r) / (2.0 * PI * r * r)).collect();
    for (r, q) in widths.iter().zip(&ratios) {
        c.info(format!("exact trace / 2 pi R^2 at R = {r}"), *q);
        let galerkin = two_sided_matrix(default_dim(*r), *r, *r).unwrap().trace() / (2.0 * PI * r * r);
        c.info(format!("  Galerkin trace / 2 pi R^2 at R = {r}"), galerkin);
    }
    c.holds("ratios decrease toward 1", ratios.windows(2).all(|w| w[1] < w[0]) && ratios.iter().all(|&q| q > 1.0));
    c.at_most("ratio at R = 5", ratios[3], 1.2);
    let r = 5.0;
    let s = spectrum(&two_sided_matrix(default_dim(r), r, r).unwrap());
    ranges.record("two-sided R=T=5", &s);
    c.within("sum of squares / (2 pi - 2) R^2 at R = 5", s.moment(2) / ((2.0 * PI - 2.0) * r * r), 0.8, 1.25);
    c
}

fn half_clustering(ranges: &mut Ranges) -> Criterion {
    let mut c = Criterion::new(9, "one-sided eigenvalues cluster at 1/2");
    let r = 4.0;
    let s = spectrum(&overlap_matrix_time(default_dim(r), r).unwrap());
    ranges.record("one-sided R=4", &s);
    let area = 2.0 * PI * r * r;
    c.within("count in (0.35, 0.65) / 2 pi R^2", s.count_in(0.35, 0.65) as f64 / area, 0.7, 1.2);
    c.info("  count in (0.35, 0.65)", s.count_in(0.35, 0.65) as f64);
    c.at_most("count in (0.1, 0.35) / 2 pi R^2", s.count_in(0.1, 0.35) as f64 / area, 0.15);
    c.info("  count in (0.1, 0.35)", s.count_in(0.1, 0.35) as f64);
    c.info("  count in (0.65, 0.9)", s.count_in(0.65, 0.9) as f64);
    c.within("third moment / (pi R^2 / 4)", s.moment(3) / (PI * r * r / 4.0), 0.7, 1.3);
    c
}

fn pw_spectrum(r: f64, band: f64, ranges: &mut Ranges) -> SymSpectrum {
    let s = spectrum(&pw_operator_matrix(band, r, default_pw_nodes(r, band)).unwrap());
    ranges.record(format!("pw R={r} T={band}"), &s);
    s
}

fn pw_counting(ranges: &mut Ranges) -> (Criterion, SymSpectrum, SymSpectrum) {
    let mut c = Criterion::new(10, "Paley-Wiener eigenvalue counts");
    let spectra: Vec<SymSpectrum> = [2.0, 3.0, 4.0].iter().map(|&w| pw_spectrum(w, w, ranges)).collect();
    let counts: Vec<usize> = spectra.iter().map(|s| s.count_above(0.9)).collect();
    let slack = 6.0 * (3.0 + 36f64.ln());
    c.within("count above 0.9 at R = T = 3", counts[1] as f64, 36.0 - slack, 36.0 + slack);
    c.holds("count increases along R = T = 2, 3, 4", counts[0] < counts[1] && counts[1] < counts[2]);
    c.info("  count at R = T = 2", counts[0] as f64);
    c.info("  count at R = T = 4", counts[2] as f64);
    c.at_most("|count / 4RT - 1| at R = T = 4", (counts[2] as f64 / 64.0 - 1.0).abs(), 0.25);

    let r = 3.0;
    let reference = eigen_dense(400, &oracle::nystrom(r, 400, |t, y| oracle::pw_kernel(r, t, y)), false).unwrap();
    let dev = spectra[1]
        .eigenvalues()
        .iter()
        .zip(reference.eigenvalues())
        .take(60)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    c.info("  top 60 vs reference quadrature at R = T = 3, max abs", dev);
    let mut spectra = spectra.into_iter();
    let _ = spectra.next();
    let three = spectra.next().unwrap();
    let four = spectra.next().unwrap();
    (c, three, four)
}

fn two_sided_counting(pw_three: &SymSpectrum, ranges: &mut Ranges) -> Criterion {
    let mut c = Criterion::new(11, "two-sided eigenvalue counts");
    let r = 3.0;
    let s = spectrum(&two_sided_matrix(default_dim(r), r, r).unwrap());
    ranges.record("two-sided R=T=3", &s);
    let pw = pw_three.count_above(0.99) as f64;
    c.at_least("count above 0.99 at R = T = 3", s.count_above(0.99) as f64, pw - 2.0);
    c.at_most("count above 0.01", s.count_above(0.01) as f64, 1.25 * 2.0 * PI * (r * r + r * r));
    c.info("  count above 0.1", s.count_above(0.1) as f64);
    c.info("  count above 0.5", s.count_above(0.5) as f64);
    c
}

fn plunge_contrast(pw_four: &SymSpectrum, ranges: &mut Ranges) -> Criterion {
    let mut c = Criterion::new(12, "plunge region width against the plateau");
    let r = 4.0;
    let s = spectrum(&two_sided_matrix(default_dim(r), r, r).unwrap());
    ranges.record("two-sided R=T=4", &s);
    let two = s.plunge_width(0.05) as f64 / s.count_above(0.95) as f64;
    c.within("two-sided plunge / plateau at R = T = 4", two, 0.2, 2.0);
    c.info("  plunge width", s.plunge_width(0.05) as f64);
    c.info("  plateau", s.count_above(0.95) as f64);
    let pw = pw_four.plunge_width(0.05) as f64 / pw_four.count_above(0.95) as f64;
    c.at_most("Paley-Wiener plunge / plateau at R = T = 4", pw, 0.2);
    c
}

fn double_orthogonality(ranges: &mut Ranges) -> Criterion {
    let mut c = Criterion::new(13, "interval eigenvectors are orthogonal on the interval");
    let r = 3.0;
    let a = overlap_matrix_time(default_dim(r), r).unwrap();
    let s = eigvals_symmetric(&a, true).unwrap();
    ranges.record("one-sided R=3 with vectors", &s);
    let dim = a.dim();
    let gap = 1e-10;
    let values = s.eigenvalues();
    let mut worst: f64 = 0.0;
    let mut pairs = 0usize;
    let mut basis_dev: f64 = 0.0;
    for i in 0..60 {
        let u = s.eigenvector(i).unwrap();
        let image: Vec<f64> = (0..dim).map(|row| a.entries()[row * dim..(row + 1) * dim].iter().zip(u).map(|(x, y)| x * y).sum()).collect();
        for j in i..60 {
            let v = s.eigenvector(j).unwrap();
            let plain: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
            basis_dev = basis_dev.max((plain - if i == j { 1.0 } else { 0.0 }).abs());
            if j > i && (values[i] - values[j]).abs() > gap {
                pairs += 1;
                worst = worst.max(image.iter().zip(v).map(|(x, y)| x * y).sum::<f64>().abs());
            }
        }
    }
    c.at_most("max weighted interval product, top 60", worst, 1e-8);
    c.info("  pairs separated by more than 1e-10", pairs as f64);
    c.info("  library defect", double_orthogonality_defect(&a, &s, gap, 60).unwrap());
    c.info("  orthonormality in the space, max deviation", basis_dev);
    c
}

fn range_check(ranges: &Ranges) -> Criterion {
    let mut c = Criterion::new(14, "every spectrum lies in [0, 1] up to 1e-8");
    let low = ranges.0.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let high = ranges.0.iter().map(|r| r.2).fold(f64::NEG_INFINITY, f64::max);
    c.at_least(format!("smallest eigenvalue over {} spectra", ranges.0.len()), low, -1e-8);
    c.at_most("largest eigenvalue", high, 1.0 + 1e-8);
    c
}

fn main() {
    let start = Instant::now();
    let kernel = Kernel::new(KernelConfig::default()).expect("kernel");
    let mut ranges = Ranges(Vec::new());
    let mut all_passed = true;
    let mut run = |c: Criterion| {
        all_passed &= c.report();
    };
    run(gram_identity());
    run(mehler_cross_check(&kernel));
    run(fock_norms());
    run(kernel_asymptotics(&kernel));
    run(pw_identities(&mut ranges));
    run(exact_identities(&mut ranges));
    run(oracle_equivalence(&mut ranges));
    run(two_sided_asymptotics(&mut ranges));
    run(half_clustering(&mut ranges));
    let (counting, pw_three, pw_four) = pw_counting(&mut ranges);
    run(counting);
    run(two_sided_counting(&pw_three, &mut ranges));
    run(plunge_contrast(&pw_four, &mut ranges));
    run(double_orthogonality(&mut ranges));
    run(range_check(&ranges));
    println!("acceptance finished in {:.1} s", start.elapsed().as_secs_f64());
    if !all_passed {
        std::process::exit(1);
    }
}
