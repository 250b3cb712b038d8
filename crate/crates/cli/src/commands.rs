//! The subcommands. Each returns its output files and reports; nothing is
//! written until the whole computation has succeeded.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use lfun_core::coefficients::{coefficients_csv, g_coefficients_fast, load_coefficients};
use lfun_core::dirichlet::CoefficientTable;
use lfun_core::evaluator::{l_afe, l_direct, l_eval, l_via_xi};
use lfun_core::statistics::{
    coeff_mean_square_regression, decreasing_trend, density_sum, fe_report, fractional_histogram,
    landau_verify, mean_square_line, ordinates, star_discrepancy, weyl_sum, Observed, StatReport,
    Verdict,
};
use lfun_core::zeros::{zeros_csv, ZeroConfig};
use lfun_core::{coefficients::DEFAULT_TABLE_LEN, FormDescriptor, ZeroKind, ZeroSet};
use num_complex::Complex64;

use crate::cache::Cache;
use crate::config::{FormSpec, RunConfig};
use crate::error::CliError;

/// Files (name, contents), reports and text for stdout.
#[derive(Default)]
pub struct Output {
    pub files: Vec<(String, String)>,
    pub reports: Vec<StatReport>,
    pub text: String,
}

impl Output {
    fn extend(&mut self, other: Output) {
        self.files.extend(other.files);
        self.reports.extend(other.reports);
        self.text.push_str(&other.text);
    }
}

pub const LANDAU_X: [f64; 4] = [2.0, 3.0, 0.5, 1.5];
const BINS: usize = 10;
const FE_POINTS: usize = 50;

pub fn load_form(rc: &RunConfig) -> Result<FormDescriptor, CliError> {
    Ok(match &rc.form {
        FormSpec::Builtin => FormDescriptor::g_default()?,
        FormSpec::File(path) => {
            let a = load_coefficients(path)?;
            let id = path
                .file_stem()
                .and_then(|s| s.to_str())
                .filter(|s| !s.is_empty() && !s.contains(char::is_whitespace))
                .unwrap_or("file");
            FormDescriptor::new(id, rc.k, rc.ell, CoefficientTable::new(a, rc.k)?)?
        }
    })
}

fn zero_config(rc: &RunConfig) -> ZeroConfig {
    ZeroConfig {
        eval: rc.eval.clone(),
        ..ZeroConfig::default()
    }
}

pub fn zero_set(rc: &RunConfig, form: &FormDescriptor) -> Result<ZeroSet, CliError> {
    Cache::new(&rc.cache, form).zero_set(form, rc.t, &zero_config(rc))
}

pub fn coeffs(n: usize) -> Result<Output, CliError> {
    let table = g_coefficients_fast(n)?;
    let mut text = String::new();
    for (i, a) in table.iter().take(10).enumerate() {
        let _ = writeln!(text, "a({}) = {a}", i + 1);
    }
    Ok(Output {
        files: vec![("coefficients.csv".into(), coefficients_csv(&table))],
        reports: vec![],
        text,
    })
}

/// Parses "a+bi", "a-bi", "a", "bi" (spaces ignored, exponents allowed).
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return Some(Complex64::new(s.parse().ok()?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let imag = |t: &str| -> Option<f64> {
        match t {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => t.parse().ok(),
        }
    };
    match split {
        Some(j) => Some(Complex64::new(body[..j].parse().ok()?, imag(&body[j..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

pub fn eval(rc: &RunConfig, form: &FormDescriptor, s: Complex64, route: &str) -> Result<Output, CliError> {
    let mut err_est = None;
    let value = match route {
        "auto" => l_eval(form, s, &rc.eval)?,
        "direct" => l_direct(form, s, rc.eval.target_eps)?,
        "xi" => l_via_xi(form, s, &rc.eval)?,
        "afe" => {
            let r = l_afe(form, s, &rc.eval)?;
            err_est = Some(r.err_est);
            r.value
        }
        other => return Err(CliError::Usage(format!("unknown route {other:?}"))),
    };
    let mut json = serde_json::json!({
        "form": form.id,
        "s": { "re": s.re, "im": s.im },
        "route": route,
        "value": { "re": value.re, "im": value.im },
        "abs": value.norm(),
    });
    if let Some(e) = err_est {
        json["err_est"] = e.into();
    }
    Ok(Output {
        text: format!("{json}\n"),
        ..Output::default()
    })
}

fn verdict_in(ok: bool, otherwise: Verdict) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        otherwise
    }
}

pub fn zeros(rc: &RunConfig, zs: &ZeroSet) -> Output {
    let t = rc.t;
    let complete = {
        let mut r = StatReport::new(
            "zero_set_complete",
            zs.t_max,
            zs.len(),
            Observed::Real(zs.len() as f64),
            zs.box_count as f64,
        )
        .with_zeroset(zs);
        r.verdict = verdict_in(zs.is_complete(), Verdict::Fail);
        r.note = "stored zeros against the argument-principle count".into();
        r
    };
    // Zeros with |γ| < T, conjugates included.
    let n = 2 * zs.count_below(t);
    let main = 2.0 / PI * t * t.ln();
    let ratio = n as f64 / main;
    let mut density = StatReport::new("zero_count_density", t, n, Observed::Real(ratio), 1.0).with_zeroset(zs);
    density.slack = 0.4;
    density.verdict = verdict_in((0.6..=1.4).contains(&ratio), Verdict::Warn);
    density.note = format!("N(T)/((2/π) T log T) with N(T) = {n} counting |γ| < T");
    Output {
        files: vec![("zeros.csv".into(), zeros_csv(zs))],
        reports: vec![complete, density],
        text: format!(
            "{} zeros with 0 < γ < {t} ({} off the critical line); certified to {}\n",
            zs.count_below(t),
            zs.below(t).filter(|z| z.kind == ZeroKind::OffLine).count(),
            zs.t_max
        ),
    }
}

pub fn weyl(rc: &RunConfig, zs: &ZeroSet) -> Result<Output, CliError> {
    let t = rc.t;
    let (half, full) = (ordinates(zs, t / 2.0), ordinates(zs, t));
    if full.is_empty() {
        return Err(CliError::Compute(format!("no zeros below T = {t}")));
    }
    let mut csv = String::from("T,m,N,re,im,abs_over_N\n");
    let mut reports = Vec::new();
    for m in 1..=5 {
        let (s, r) = weyl_sum(&full, m)?;
        let earlier = if half.is_empty() { None } else { Some(weyl_sum(&half, m)?) };
        if let Some((sh, rh)) = earlier {
            let _ = writeln!(csv, "{:?},{m},{},{:?},{:?},{:?}", t / 2.0, half.len(), sh.re, sh.im, rh);
            reports.push(decreasing_trend(&format!("weyl_m={m}"), t, full.len(), rh, r).with_zeroset(zs));
        }
        let _ = writeln!(csv, "{t:?},{m},{},{:?},{:?},{r:?}", full.len(), s.re, s.im);
    }
    let d = star_discrepancy(&full)?;
    if !half.is_empty() {
        reports.push(decreasing_trend("star_discrepancy", t, full.len(), star_discrepancy(&half)?, d).with_zeroset(zs));
    }
    let hist = fractional_histogram(&full, BINS)?;
    let mut hcsv = String::from("bin,lo,hi,count\n");
    for (j, c) in hist.iter().enumerate() {
        let _ = writeln!(hcsv, "{j},{:?},{:?},{c}", j as f64 / BINS as f64, (j + 1) as f64 / BINS as f64);
    }
    Ok(Output {
        files: vec![("weyl.csv".into(), csv), ("histogram.csv".into(), hcsv)],
        reports,
        text: format!("star discrepancy of {} ordinates: {d:.4}; histogram {hist:?}\n", full.len()),
    })
}

pub fn landau(rc: &RunConfig, form: &FormDescriptor, zs: &ZeroSet) -> Result<Output, CliError> {
    let mut csv = String::from("x,observed_re,observed_im,predicted,abs_diff,C,verdict\n");
    let mut reports = Vec::new();
    for x in LANDAU_X {
        let r = landau_verify(form, zs, x, rc.t)?.with_config(&rc.eval);
        let Observed::Complex { re, im } = r.observed else {
            unreachable!("landau sums are complex")
        };
        let _ = writeln!(
            csv,
            "{x:?},{re:?},{im:?},{:?},{:?},{:?},{}",
            r.predicted,
            (re - r.predicted).abs(),
            r.slack,
            verdict_str(r.verdict)
        );
        reports.push(r);
    }
    Ok(Output {
        files: vec![("landau.csv".into(), csv)],
        reports,
        text: String::new(),
    })
}

pub fn meansq(rc: &RunConfig, form: &FormDescriptor) -> Result<Output, CliError> {
    let t = rc.t;
    let ms = mean_square_line(form, t, &rc.eval)?;
    let mut csv = String::from("t,abs_L_squared\n");
    for (i, v) in ms.samples.iter().enumerate() {
        let _ = writeln!(csv, "{:?},{v:?}", i as f64 * ms.step);
    }
    let steps = (form.coeffs.len() / 1000).max(1).ilog2() as usize + 1;
    let r_hat = coeff_mean_square_regression(&form.coeffs, steps.min(6))?;
    let scaled = ms.value / (t * t.ln());
    let mut ratio = StatReport::new("second_moment_ratio", t, ms.samples.len(), Observed::Real(scaled), r_hat)
        .with_config(&rc.eval);
    ratio.slack = 0.35;
    ratio.verdict = verdict_in((scaled / r_hat - 1.0).abs() <= 0.35, Verdict::Warn);
    ratio.note = format!(
        "I(T)/(T log T) against the coefficient constant r; ratio {:.4}, ratio to 2r {:.4}",
        scaled / r_hat,
        scaled / (2.0 * r_hat)
    );
    let change = (ms.value - ms.coarse).abs() / ms.value.abs().max(f64::MIN_POSITIVE);
    let mut quad = StatReport::new("second_moment_quadrature", t, ms.samples.len(), Observed::Real(change), 0.0)
        .with_config(&rc.eval);
    quad.slack = 2e-3;
    quad.verdict = verdict_in(change < 2e-3, Verdict::Fail);
    quad.note = format!("relative change on halving the step {:?}", ms.step);
    Ok(Output {
        files: vec![("meansq.csv".into(), csv)],
        reports: vec![ratio, quad],
        text: format!("integral of |L|^2 to {t}: {:.6e}\n", ms.value),
    })
}

pub fn density(rc: &RunConfig, form: &FormDescriptor, zs: &ZeroSet) -> Output {
    let crit = form.critical_abscissa();
    let mut csv = String::from("T,N,density_sum,over_N\n");
    let mut row = |t: f64| {
        let n = 2 * zs.count_below(t);
        let d = density_sum(zs, crit, t);
        let r = if n == 0 { 0.0 } else { d / n as f64 };
        let _ = writeln!(csv, "{t:?},{n},{d:?},{r:?}");
        (n, r)
    };
    let (_, earlier) = row(rc.t / 2.0);
    let (n, later) = row(rc.t);
    let report = decreasing_trend("density_sum_over_N", rc.t, n, earlier, later).with_zeroset(zs);
    Output {
        files: vec![("density.csv".into(), csv)],
        reports: vec![report],
        text: String::new(),
    }
}

pub fn functional_equation(rc: &RunConfig, form: &FormDescriptor) -> Result<Output, CliError> {
    Ok(Output {
        reports: vec![fe_report(form, FE_POINTS, &rc.eval)?],
        ..Output::default()
    })
}

pub fn report(rc: &RunConfig, form: &FormDescriptor) -> Result<Output, CliError> {
    let zs = zero_set(rc, form)?;
    let mut out = functional_equation(rc, form)?;
    out.extend(zeros(rc, &zs));
    out.extend(weyl(rc, &zs)?);
    out.extend(landau(rc, form, &zs)?);
    out.extend(meansq(rc, form)?);
    out.extend(density(rc, form, &zs));
    Ok(out)
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Warn => "warn",
        Verdict::Fail => "fail",
    }
}

/// Table length for `coeffs` when the user gives none.
pub fn default_coeff_count() -> usize {
    DEFAULT_TABLE_LEN
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let c = Complex64::new;
        assert_eq!(parse_complex("2.25+10i"), Some(c(2.25, 10.0)));
        assert_eq!(parse_complex(" 2.25 - 10i "), Some(c(2.25, -10.0)));
        assert_eq!(parse_complex("-3"), Some(c(-3.0, 0.0)));
        assert_eq!(parse_complex("-i"), Some(c(0.0, -1.0)));
        assert_eq!(parse_complex("4.5i"), Some(c(0.0, 4.5)));
        assert_eq!(parse_complex("1e-3+2e+1i"), Some(c(1e-3, 20.0)));
        assert_eq!(parse_complex("1+i"), Some(c(1.0, 1.0)));
        for bad in ["", "i2", "2+3j", "a+bi", "1++2i"] {
            assert_eq!(parse_complex(bad), None, "{bad}");
        }
    }
}
