//! Statistics of zeros and moments of L on the critical line: Weyl sums,
//! discrepancy, the explicit formula for Σ x^ρ, the second moment, the
//! coefficient mean square and the density sum Σ|β − (k/2 + 1/4)|.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dirichlet::{log_deriv_coeffs, CoefficientTable};
use crate::error::{Error, Result};
use crate::evaluator::xi::xi_scaled_with;
use crate::evaluator::{l_eval, EvalConfig, FormDescriptor};
use crate::numeric::{pairwise_sum, simpson_real};
use crate::zeros::ZeroSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Warn,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Observed {
    Real(f64),
    Complex { re: f64, im: f64 },
}

impl Observed {
    pub fn modulus(&self) -> f64 {
        match *self {
            Observed::Real(x) => x.abs(),
            Observed::Complex { re, im } => re.hypot(im),
        }
    }
}

impl From<Complex64> for Observed {
    fn from(z: Complex64) -> Self {
        Observed::Complex { re: z.re, im: z.im }
    }
}

/// One line of the statistics report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub metric: String,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub observed: Observed,
    pub predicted: f64,
    pub slack: f64,
    pub verdict: Verdict,
    pub zeroset_checksum: Option<String>,
    pub eval_config: Option<EvalConfig>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl StatReport {
    pub fn new(metric: impl Into<String>, t: f64, n: usize, observed: Observed, predicted: f64) -> Self {
        Self {
            metric: metric.into(),
            t,
            n,
            observed,
            predicted,
            slack: 0.0,
            verdict: Verdict::Pass,
            zeroset_checksum: None,
            eval_config: None,
            note: String::new(),
        }
    }

    pub fn with_zeroset(mut self, zs: &ZeroSet) -> Self {
        self.zeroset_checksum = Some(zs.checksum());
        self
    }

    pub fn with_config(mut self, cfg: &EvalConfig) -> Self {
        self.eval_config = Some(cfg.clone());
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report fields are serializable")
    }
}

/// Ordinates γ > 0 of a zero set below t.
pub fn ordinates(zs: &ZeroSet, t: f64) -> Vec<f64> {
    zs.below(t).map(|z| z.gamma).collect()
}

/// S = Σ e^{2πimγ} and |S|/N.
pub fn weyl_sum(gammas: &[f64], m: i64) -> Result<(Complex64, f64)> {
    if m == 0 {
        return Err(Error::InvalidArgument("Weyl sum needs m ≠ 0".into()));
    }
    if gammas.is_empty() {
        return Err(Error::InvalidArgument("Weyl sum of an empty set".into()));
    }
    let terms: Vec<Complex64> = gammas
        .iter()
        .map(|&g| {
            // Reduce first so large γ keep their fractional digits.
            let u = (m as f64 * g).rem_euclid(1.0);
            Complex64::new(0.0, 2.0 * PI * u).exp()
        })
        .collect();
    let s = pairwise_sum(&terms);
    Ok((s, s.norm() / gammas.len() as f64))
}

/// Counts of the fractional parts {γ} in [j/B, (j+1)/B).
pub fn fractional_histogram(gammas: &[f64], bins: usize) -> Result<Vec<usize>> {
    if bins == 0 {
        return Err(Error::InvalidArgument("histogram needs at least one bin".into()));
    }
    let mut h = vec![0; bins];
    for &g in gammas {
        let j = (g.rem_euclid(1.0) * bins as f64) as usize;
        h[j.min(bins - 1)] += 1;
    }
    Ok(h)
}

/// Exact star discrepancy of points in [0, 1).
pub fn star_discrepancy_points(u: &[f64]) -> Result<f64> {
    if u.is_empty() {
        return Err(Error::InvalidArgument("discrepancy of an empty set".into()));
    }
    let mut v = u.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    Ok(v.iter()
        .enumerate()
        .map(|(i, &x)| ((i + 1) as f64 / n - x).max(x - i as f64 / n))
        .fold(0.0, f64::max))
}

/// Star discrepancy of the fractional parts of the ordinates.
pub fn star_discrepancy(gammas: &[f64]) -> Result<f64> {
    let u: Vec<f64> = gammas.iter().map(|g| g.rem_euclid(1.0)).collect();
    star_discrepancy_points(&u)
}

/// Main term of Σ_{|γ|<T} x^ρ: (b(d)/π)(δ_{x,d} − x^w δ_{x,1/d}) T with d
/// ranging over the integers ≥ 2. Returns the prediction and whether x
/// matched some d or 1/d.
pub fn landau_prediction(form: &FormDescriptor, x: f64, t: f64) -> Result<(f64, bool)> {
    if !(x > 0.0) || (x - 1.0).abs() < 1e-12 {
        return Err(Error::InvalidArgument(format!("x must be positive and ≠ 1, got {x}")));
    }
    let (d, sign, factor) = if x > 1.0 { (x, 1.0, 1.0) } else { (1.0 / x, -1.0, x.powf(form.weight())) };
    let n = d.round();
    if (d - n).abs() > 1e-12 * d {
        return Ok((0.0, false));
    }
    let n = n as usize;
    if n > form.coeffs.len() {
        return Err(Error::InsufficientTable(format!("b({n}) needs {n} coefficients")));
    }
    let b = log_deriv_coeffs(&form.coeffs.normalize()?, n)?.get(n);
    Ok((sign * factor * b.re / PI * t, true))
}

/// Σ x^ρ over the zeros with 0 < |γ| < T, each stored zero counted together
/// with its conjugate. The sum is accumulated in complex arithmetic so its
/// imaginary part measures the pairing.
pub fn landau_sum(zs: &ZeroSet, x: f64, t: f64) -> Complex64 {
    let lx = x.ln();
    let terms: Vec<Complex64> = zs
        .below(t)
        .flat_map(|z| {
            [
                (Complex64::new(z.beta, z.gamma) * lx).exp(),
                (Complex64::new(z.beta, -z.gamma) * lx).exp(),
            ]
        })
        .collect();
    pairwise_sum(&terms)
}

/// Compares Σ_{|γ|<T} x^ρ with its main term. Passes when the difference is
/// at most 0.2·max(|predicted|, T) and the sum is real to 1e−6.
pub fn landau_verify(form: &FormDescriptor, zs: &ZeroSet, x: f64, t: f64) -> Result<StatReport> {
    if zs.t_max < t {
        return Err(Error::Precondition(format!(
            "zero set certified to {} < T = {t}",
            zs.t_max
        )));
    }
    let (pred, exact) = landau_prediction(form, x, t)?;
    let obs = landau_sum(zs, x, t);
    let dev = (obs.re - pred).abs();
    let realness = obs.im.abs() / obs.norm().max(f64::MIN_POSITIVE);
    let mut r = StatReport::new(format!("landau_x={x}"), t, 2 * zs.count_below(t), obs.into(), pred)
        .with_zeroset(zs);
    r.slack = dev / t.ln();
    let ok = dev <= 0.2 * pred.abs().max(t) && realness <= 1e-6;
    r.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    r.note = format!(
        "x {} a Dirichlet index; |obs − pred| = {dev:.4}; imaginary/modulus = {realness:.1e}; slack constant C = |obs − pred|/log T",
        if exact { "is" } else { "is not" }
    );
    if x < 1.0 {
        // The zero set is invariant under ρ ↦ w − ρ̄, so S(x) = x^w S(1/x)
        // exactly; this fixes the sign of the second main term.
        let refl = x.powf(form.weight()) * landau_prediction(form, 1.0 / x, t)?.0;
        r.note += &format!("; reflection x^w·S(1/x) predicts {refl:.4}");
    }
    Ok(r)
}

/// Result of [`mean_square_line`].
#[derive(Clone, Debug, PartialEq)]
pub struct MeanSquare {
    pub value: f64,
    /// Estimate with twice the step.
    pub coarse: f64,
    pub step: f64,
    /// Samples of |L|² at spacing `step`, starting at t = 0.
    pub samples: Vec<f64>,
}

impl MeanSquare {
    /// ∫₀^τ for τ a multiple of 2·step within the sampled range.
    pub fn integral_to(&self, tau: f64) -> Option<f64> {
        let m = (tau / self.step).round() as usize;
        if m % 2 != 0 || m >= self.samples.len() || ((m as f64) * self.step - tau).abs() > 1e-9 {
            return None;
        }
        Some(simpson_real(&self.samples[..=m], self.step))
    }
}

fn line_samples(form: &FormDescriptor, ts: &[f64], cfg: &EvalConfig) -> Result<Vec<f64>> {
    let crit = form.critical_abscissa();
    ts.par_iter()
        .map(|&t| Ok(l_eval(form, Complex64::new(crit, t), cfg)?.norm_sqr()))
        .collect()
}

/// ∫₀ᵀ |L(k/2 + 1/4 + it)|² dt by composite Simpson. The step starts at
/// 0.04 and is halved (reusing samples) until two successive estimates
/// differ by less than 0.1% and the step is at most 0.02.
pub fn mean_square_line(form: &FormDescriptor, t: f64, cfg: &EvalConfig) -> Result<MeanSquare> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("T = {t}")));
    }
    if t == 0.0 {
        return Ok(MeanSquare {
            value: 0.0,
            coarse: 0.0,
            step: 0.0,
            samples: vec![],
        });
    }
    let mut n = 2 * ((t / 0.08).ceil() as usize).max(1);
    let mut h = t / n as f64;
    let ts: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
    let mut samples = line_samples(form, &ts, cfg)?;
    let mut prev = simpson_real(&samples, h);
    loop {
        let mids: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
        let new = line_samples(form, &mids, cfg)?;
        let mut merged = Vec::with_capacity(2 * n + 1);
        for i in 0..n {
            merged.push(samples[i]);
            merged.push(new[i]);
        }
        merged.push(samples[n]);
        samples = merged;
        n *= 2;
        h /= 2.0;
        let cur = simpson_real(&samples, h);
        if (h <= 0.02 && (cur - prev).abs() < 1e-3 * cur.abs()) || h < 1e-4 {
            return Ok(MeanSquare {
                value: cur,
                coarse: prev,
                step: h,
                samples,
            });
        }
        prev = cur;
    }
}

/// Σ_{n≤x} |a(n)|² and r̂ = (2k+1)·sum / (2·x^{k+1/2}).
pub fn coeff_mean_square(table: &CoefficientTable, x: usize) -> Result<(f64, f64)> {
    if x == 0 || x > table.len() {
        return Err(Error::InvalidArgument(format!(
            "x = {x} outside 1..={}",
            table.len()
        )));
    }
    let sq: Vec<f64> = table.as_slice()[..x].iter().map(|a| a.norm_sqr()).collect();
    let sum = pairwise_sum(&sq);
    let k = table.k() as f64;
    Ok((sum, (2.0 * k + 1.0) * sum / (2.0 * (x as f64).powf(k + 0.5))))
}

/// Least-squares fit of Σ_{n≤x}|a(n)|² ≈ (2r/(2k+1)) x^{k+1/2} in relative
/// error over the ladder x = N, N/2, …, N/2^{steps−1}: the mean of r̂.
pub fn coeff_mean_square_regression(table: &CoefficientTable, steps: usize) -> Result<f64> {
    if steps == 0 {
        return Err(Error::InvalidArgument("empty ladder".into()));
    }
    let n = table.len();
    let mut r = Vec::with_capacity(steps);
    for j in 0..steps {
        let x = n >> j;
        if x == 0 {
            break;
        }
        r.push(coeff_mean_square(table, x)?.1);
    }
    Ok(pairwise_sum(&r) / r.len() as f64)
}

/// Σ_{0<|γ|<T} |β − (k/2 + 1/4)|: each stored zero counts twice.
pub fn density_sum(zs: &ZeroSet, crit: f64, t: f64) -> f64 {
    let d: Vec<f64> = zs.below(t).map(|z| 2.0 * (z.beta - crit).abs()).collect();
    pairwise_sum(&d)
}

/// Deterministic points covering 1.75 ≤ σ ≤ 2.75 (shifted to the form's
/// critical line), |t| ≤ 50, from two irrational rotations.
pub fn fe_sample_points(form: &FormDescriptor, count: usize) -> Vec<Complex64> {
    let crit = form.critical_abscissa();
    let a = (5f64.sqrt() - 1.0) / 2.0;
    let b = 2f64.sqrt() - 1.0;
    (1..=count)
        .map(|i| {
            let u = (i as f64 * a).fract();
            let v = (i as f64 * b).fract();
            Complex64::new(crit - 0.5 + u, -50.0 + 100.0 * v)
        })
        .collect()
}

/// Largest residual |ξ(s) − ε ξ(w − s)| / max(1, |ξ(s)|) over the points,
/// both sides scaled by e^{π|t|/2} and computed with different rotations.
pub fn fe_residual(form: &FormDescriptor, points: &[Complex64], cfg: &EvalConfig) -> Result<f64> {
    let w = form.weight();
    let eps = cfg.target_eps.min(1e-10);
    let r: Vec<f64> = points
        .par_iter()
        .map(|&s| -> Result<f64> {
            let a = xi_scaled_with(form, s, eps, cfg.rotation)?;
            let b = xi_scaled_with(form, w - s, eps, cfg.rotation - 2.0)? * form.epsilon();
            Ok((a - b).norm() / a.norm().max(1.0))
        })
        .collect::<Result<_>>()?;
    Ok(r.into_iter().fold(0.0, f64::max))
}

/// Report for [`fe_residual`] against the threshold 1e−9.
pub fn fe_report(form: &FormDescriptor, count: usize, cfg: &EvalConfig) -> Result<StatReport> {
    let res = fe_residual(form, &fe_sample_points(form, count), cfg)?;
    let mut r = StatReport::new("functional_equation_residual", 50.0, count, Observed::Real(res), 0.0)
        .with_config(cfg);
    r.slack = 1e-9;
    r.verdict = if res <= 1e-9 { Verdict::Pass } else { Verdict::Fail };
    Ok(r)
}

/// Warn-level trend check: passes when `later` < `earlier`.
pub fn decreasing_trend(metric: &str, t: f64, n: usize, earlier: f64, later: f64) -> StatReport {
    let mut r = StatReport::new(metric, t, n, Observed::Real(later), earlier);
    r.verdict = if later < earlier { Verdict::Pass } else { Verdict::Warn };
    r.note = "predicted holds the value at the lower height".into();
    r
}
