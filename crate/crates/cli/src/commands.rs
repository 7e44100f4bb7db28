use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context;
use concentration::asymptotics::{assemble, build_report};
use concentration::bargmann::{default_line_rule, image_constant, unitarity_check, FockConfig};
use concentration::kernels::{pw_kernel, Kernel, KernelConfig, PwParams};
use concentration::operators::{ConcentrationMatrix, Mode};
use concentration::spectra::eigvals_symmetric;
use concentration::verify::{time_gram, Suite};
use serde_json::{json, Value};

use crate::args::{BargmannArgs, Format, GramArgs, KernelArgs, OperatorArgs, ReportArgs, SpectrumArgs, VerifyArgs};
use crate::Failure;

type Outcome = Result<(), Failure>;

/// Round-trip exact: 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn emit(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .context("cannot write to stdout")?,
    }
    Ok(())
}

fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain JSON values serialize");
    text.push('\n');
    text
}

fn operator_mode(op: &OperatorArgs) -> Result<Mode, Failure> {
    let mode = Mode::parse(&op.mode)?;
    if mode == Mode::OracleOneSided {
        return Err(Failure::Usage("mode must be one-sided, freq-sided, two-sided or pw".into()));
    }
    Ok(mode)
}

fn dump(matrix: &ConcentrationMatrix, path: &Path) -> Outcome {
    let file = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    matrix
        .write_dump(std::io::BufWriter::new(file))
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

pub fn spectrum(a: SpectrumArgs) -> Outcome {
    let mode = operator_mode(&a.operator)?;
    let matrix = assemble(mode, a.operator.r, a.operator.t, a.operator.dim)?;
    let spectrum = eigvals_symmetric(&matrix, false)?;
    let text = match a.format {
        Format::Csv => {
            let mut text = String::from("index,eigenvalue\n");
            for (i, v) in spectrum.eigenvalues().iter().enumerate() {
                writeln!(text, "{i},{}", num(*v)).expect("string write");
            }
            text
        }
        Format::Json => json_text(&json!({
            "mode": mode.name(),
            "R": matrix.r(),
            "T": matrix.t(),
            "dim": matrix.dim(),
            "eigenvalues": spectrum.eigenvalues(),
        })),
    };
    if let Some(path) = &a.dump_matrix {
        dump(&matrix, path)?;
    }
    emit(&a.out, &text)
}

pub fn report(a: ReportArgs) -> Outcome {
    if a.format == Format::Csv {
        return Err(Failure::Usage("reports are emitted as JSON only".into()));
    }
    let mode = operator_mode(&a.operator)?;
    if !(a.eps > 0.0 && a.eps < 0.5) {
        return Err(Failure::Usage(format!("eps must lie in (0, 0.5), got {}", a.eps)));
    }
    let cfg = KernelConfig::default();
    let op = &a.operator;
    let value = match &a.r_list {
        Some(list) => {
            if list.is_empty() {
                return Err(Failure::Usage("--R-list is empty".into()));
            }
            let reports = list
                .iter()
                .map(|&r| build_report(mode, Some(r), op.t, a.eps, op.dim, &cfg))
                .collect::<concentration::Result<Vec<_>>>()?;
            serde_json::to_value(reports).expect("reports serialize")
        }
        None => {
            let report = build_report(mode, op.r, op.t, a.eps, op.dim, &cfg)?;
            if let Some(path) = &a.dump_matrix {
                dump(&assemble(mode, op.r, op.t, op.dim)?, path)?;
            }
            serde_json::to_value(report).expect("report serializes")
        }
    };
    emit(&a.out, &json_text(&value))
}

pub fn kernel(a: KernelArgs) -> Outcome {
    let ys: Vec<f64> = match a.y {
        Some(y) => vec![y],
        None => {
            if a.points < 2 || !(a.y_min < a.y_max) {
                return Err(Failure::Usage("need --points >= 2 and --y-min < --y-max".into()));
            }
            let step = (a.y_max - a.y_min) / (a.points - 1) as f64;
            (0..a.points).map(|k| a.y_min + step * k as f64).collect()
        }
    };
    if a.x.abs() > 50.0 || ys.iter().any(|y| y.abs() > 50.0) {
        return Err(Failure::Usage("kernel arguments must satisfy |x|, |y| <= 50".into()));
    }
    let k = Kernel::new(KernelConfig::default())?;
    let band = a.t.map(PwParams::new).transpose()?;
    let rows: Vec<(f64, f64, f64, f64, f64, Option<f64>)> = ys
        .iter()
        .map(|&y| {
            let ft = k.ft(a.x, y);
            (y, k.mehler(a.x, y), k.series(a.x, y), ft.re, ft.im, band.as_ref().map(|p| pw_kernel(p, a.x, y)))
        })
        .collect();
    let text = match a.format {
        Format::Csv => {
            let mut text = String::from("y,mehler,series,ft_re,ft_im");
            text.push_str(if band.is_some() { ",pw\n" } else { "\n" });
            for (y, m, s, re, im, pw) in &rows {
                write!(text, "{},{},{},{},{}", num(*y), num(*m), num(*s), num(*re), num(*im)).expect("string write");
                if let Some(pw) = pw {
                    write!(text, ",{}", num(*pw)).expect("string write");
                }
                text.push('\n');
            }
            text
        }
        Format::Json => json_text(&json!({
            "x": a.x,
            "T": a.t,
            "rows": rows.iter().map(|(y, m, s, re, im, pw)| json!({
                "y": y, "mehler": m, "series": s, "ft_re": re, "ft_im": im, "pw": pw,
            })).collect::<Vec<_>>(),
        })),
    };
    emit(&a.out, &text)
}

/// Real part of `1 + i^{n-m}`; the time Gram entry vanishes by parity when `n - m` is odd.
fn frequency_factor(n: usize, m: usize) -> f64 {
    match n.abs_diff(m) % 4 {
        0 => 2.0,
        2 => 0.0,
        _ => 1.0,
    }
}

pub fn gram(a: GramArgs) -> Outcome {
    if a.dim == 0 {
        return Err(Failure::Usage("--dim must be positive".into()));
    }
    let time = time_gram(a.dim - 1)?;
    let gram: Vec<Vec<f64>> = time
        .iter()
        .enumerate()
        .map(|(n, row)| row.iter().enumerate().map(|(m, &v)| frequency_factor(n, m) * v).collect())
        .collect();
    let mut deviation: f64 = 0.0;
    for (n, row) in gram.iter().enumerate() {
        for (m, v) in row.iter().enumerate() {
            deviation = deviation.max((v - if n == m { 1.0 } else { 0.0 }).abs());
        }
    }
    eprintln!("max |G - I| = {deviation:.3e}");
    let text = match a.format {
        Format::Csv => {
            let mut text = String::from("n,m,value\n");
            for (n, row) in gram.iter().enumerate() {
                for (m, v) in row.iter().enumerate() {
                    writeln!(text, "{n},{m},{}", num(*v)).expect("string write");
                }
            }
            text
        }
        Format::Json => json_text(&json!({ "dim": a.dim, "max_deviation": deviation, "gram": gram })),
    };
    emit(&a.out, &text)
}

pub fn bargmann(a: BargmannArgs) -> Outcome {
    if a.dim > 12 {
        return Err(Failure::Usage("--dim must be at most 12".into()));
    }
    let cfg = FockConfig::default();
    let rule = default_line_rule();
    let mut rows = Vec::new();
    for n in 0..=a.dim {
        let u = unitarity_check(n, &cfg, &rule)?;
        let c = image_constant(n, &rule)?;
        rows.push((n, u.b1_norm_of_image, u.b0_ratio, c.measured));
    }
    let text = match a.format {
        Format::Csv => {
            let mut text = String::from("n,image_norm_sq,l2_to_b0_ratio,image_constant\n");
            for (n, b1, b0, c) in &rows {
                writeln!(text, "{n},{},{},{}", num(*b1), num(*b0), num(*c)).expect("string write");
            }
            text
        }
        Format::Json => json_text(&Value::Array(
            rows.iter()
                .map(|(n, b1, b0, c)| json!({ "n": n, "image_norm_sq": b1, "l2_to_b0_ratio": b0, "image_constant": c }))
                .collect(),
        )),
    };
    emit(&a.out, &text)
}

pub fn verify(a: VerifyArgs) -> Outcome {
    let suite = Suite::parse(&a.suite)?;
    let checks = suite.run()?;
    let mut out = String::new();
    for check in &checks {
        writeln!(out, "{check}").expect("string write");
    }
    if suite == Suite::Bargmann {
        let rule = default_line_rule();
        let ratio = unitarity_check(0, &FockConfig::default(), &rule)?.b0_ratio;
        let constant = image_constant(0, &rule)?;
        writeln!(out, "# l2_to_b0_constant,{}", num(ratio)).expect("string write");
        writeln!(out, "# monomial_image_constant,{},{}", num(constant.measured), constant.best).expect("string write");
    }
    emit(&None, &out)?;
    if checks.iter().all(|c| c.pass) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
