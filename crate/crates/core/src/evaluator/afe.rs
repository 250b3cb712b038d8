//! The truncated approximate functional equation.
//!
//! L(s) = J₁ + … + J₆ with
//!
//! * J₁ = Σ_{n≤x} a(n) n^{−s}
//! * J₂ = Σ_{n≤x} a(n) n^{−s} (e^{−(n/x)^h} − 1)
//! * J₃ = Σ_{n>x} a(n) n^{−s} e^{−(n/x)^h}
//! * J₄ = ε π^{2s−w} Γ(w−s)/Γ(s) Σ_{n≤x} a(n) n^{−(w−s)}
//! * J₅, J₆ = −ε π^{2s−w}/(2πih) ∫ Γ(w−s−u)Γ(u/h)/Γ(s+u) D(u) (π²x)^u du
//!   along Re u = −η (D summed over n > x) and Re u = α (n ≤ x),
//!
//! where w = k + 1/2 and D(u) = Σ a(n) n^{−(w−s−u)}.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::gamma::log_gamma;
use super::{EvalConfig, FormDescriptor};
use crate::error::{Error, Result};
use crate::numeric::{pairwise_sum, simpson};

/// Output of [`l_afe`].
#[derive(Clone, Debug, PartialEq)]
pub struct AfeResult {
    pub value: Complex64,
    /// J₁ … J₆.
    pub terms: [Complex64; 6],
    /// Quadrature, contour-truncation and table-truncation error estimate.
    pub err_est: f64,
    /// Truncation point actually used.
    pub x: f64,
    /// Half-length of the vertical segments actually used.
    pub half_width: f64,
}

/// Default truncation point. For h = 2 this is max(10, |t|). For h = 1
/// the dual sum of J₅ is cut at the end of the table, and that error falls
/// like 1/x, so x grows to N/40 (the largest value that still leaves J₃'s
/// smoothed tail below e^{−40}).
pub fn afe_default_x(form: &FormDescriptor, t: f64, h: u8) -> f64 {
    let base = t.abs().max(10.0);
    if h == 1 {
        base.max(form.coeffs.len() as f64 / 40.0)
    } else {
        base
    }
}

const NODE_CHUNK: usize = 64;
const MIN_STEP: f64 = 1.0 / 512.0;
const MAX_HALF_WIDTH: f64 = 400.0;

struct Quadrature {
    value: Complex64,
    diff: f64,
    kernel: Vec<Complex64>,
    step: f64,
}

struct Line<'a> {
    s: Complex64,
    w: f64,
    h: f64,
    re: f64,
    ln_pi2x: f64,
    ln_pref: Complex64,
    /// (ln n, a(n)) for the summation range.
    range: &'a [(f64, Complex64)],
}

impl Line<'_> {
    /// Γ-kernel times prefactor (without the Dirichlet polynomial).
    fn kernel(&self, v: f64) -> Result<Complex64> {
        let u = Complex64::new(self.re, v);
        let lk = log_gamma(self.w - self.s - u)? + log_gamma(u / self.h)? - log_gamma(self.s + u)?
            + u * self.ln_pi2x
            + self.ln_pref;
        Ok(lk.exp())
    }

    fn dirichlet_at(&self, v: f64) -> Complex64 {
        let u = Complex64::new(self.re, v);
        let e = -(self.w - self.s - u);
        let terms: Vec<Complex64> = self.range.iter().map(|&(l, a)| a * (e * l).exp()).collect();
        pairwise_sum(&terms)
    }

    /// Integrand samples at v0, v0+Δ, …, v0+(m−1)Δ. The Dirichlet polynomial
    /// is advanced by the per-term ratio n^{iΔ} inside fixed-size chunks, so
    /// results do not depend on the thread count.
    fn samples(&self, v0: f64, step: f64, m: usize) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let chunks: Vec<usize> = (0..m).step_by(NODE_CHUNK).collect();
        let parts: Vec<Result<Vec<(Complex64, Complex64)>>> = chunks
            .par_iter()
            .map(|&start| {
                let end = (start + NODE_CHUNK).min(m);
                let va = v0 + start as f64 * step;
                let e0 = -(self.w - self.s - Complex64::new(self.re, va));
                let mut state: Vec<Complex64> =
                    self.range.iter().map(|&(l, a)| a * (e0 * l).exp()).collect();
                let ratio: Vec<Complex64> = self
                    .range
                    .iter()
                    .map(|&(l, _)| Complex64::new(0.0, step * l).exp())
                    .collect();
                let mut out = Vec::with_capacity(end - start);
                for j in start..end {
                    let v = v0 + j as f64 * step;
                    let d = pairwise_sum(&state);
                    let k = self.kernel(v)?;
                    out.push((k * d, k));
                    for (st, r) in state.iter_mut().zip(&ratio) {
                        *st *= r;
                    }
                }
                Ok(out)
            })
            .collect();
        let mut f = Vec::with_capacity(m);
        let mut kn = Vec::with_capacity(m);
        for p in parts {
            for (a, b) in p? {
                f.push(a);
                kn.push(b);
            }
        }
        Ok((f, kn))
    }

    /// |∫ kernel(v) n^{−(w−s−u)} dv|: the weight with which a(n) enters the
    /// line integral.
    fn weight(&self, q: &Quadrature, half: f64, n: f64) -> f64 {
        let l = n.ln();
        let vals: Vec<Complex64> = q
            .kernel
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                let u = Complex64::new(self.re, -half + j as f64 * q.step);
                k * (-(self.w - self.s - u) * l).exp()
            })
            .collect();
        simpson(&vals, q.step).norm()
    }

    /// Magnitude of the integrand at ±v, used to size the segment.
    fn end_magnitude(&self, v: f64) -> Result<f64> {
        let a = (self.kernel(v)? * self.dirichlet_at(v)).norm();
        let b = (self.kernel(-v)? * self.dirichlet_at(-v)).norm();
        Ok(a.max(b))
    }

    /// ∫_{−L}^{L} of the integrand by composite Simpson with step halving.
    /// Returns the integral, |S_Δ − S_{2Δ}|, and the final kernel samples
    /// with their step.
    fn integrate(&self, half: f64, step0: f64, tol: f64) -> Result<Quadrature> {
        let mut panels = ((2.0 * half / step0).ceil() as usize).max(2);
        if panels % 2 == 1 {
            panels += 1;
        }
        let mut step = 2.0 * half / panels as f64;
        let (mut f, mut kn) = self.samples(-half, step, panels + 1)?;
        let mut prev = simpson(&f, step);
        loop {
            let (fm, km) = self.samples(-half + step / 2.0, step, panels)?;
            let mut nf = Vec::with_capacity(2 * panels + 1);
            let mut nk = Vec::with_capacity(2 * panels + 1);
            for i in 0..panels {
                nf.push(f[i]);
                nf.push(fm[i]);
                nk.push(kn[i]);
                nk.push(km[i]);
            }
            nf.push(f[panels]);
            nk.push(kn[panels]);
            f = nf;
            kn = nk;
            panels *= 2;
            step /= 2.0;
            let cur = simpson(&f, step);
            let diff = (cur - prev).norm();
            if diff < tol || step < MIN_STEP {
                return Ok(Quadrature {
                    value: cur,
                    diff,
                    kernel: kn,
                    step,
                });
            }
            prev = cur;
        }
    }
}

/// L(s) by the truncated approximate functional equation.
///
/// Requirements, checked per call: |t| ≥ t_small, Re s ≥ k/2 + 1/4,
/// 1/2 < η < h with η not an integer and η > Re s − k/2 + 1/4, and
/// 0 < α < min(k/2 + 1/4, k + 1/2 − Re s). Keeping η below h means the
/// shift to Re u = −η crosses only the pole of Γ(u/h) at 0; together with
/// the η lower bound this limits Re s to below k/2 − 1/4 + h.
pub fn l_afe(form: &FormDescriptor, s: Complex64, cfg: &EvalConfig) -> Result<AfeResult> {
    let t = s.im;
    let w = form.weight();
    let crit = form.critical_abscissa();
    let eta = cfg.eta;
    let alpha = cfg.alpha_for(form);
    let h = cfg.h as f64;
    if t.abs() < cfg.t_small {
        return Err(Error::Precondition(format!(
            "|t| = {} below t_small = {}; use l_eval",
            t.abs(),
            cfg.t_small
        )));
    }
    if cfg.h != 1 && cfg.h != 2 {
        return Err(Error::InvalidArgument(format!("h must be 1 or 2, got {}", cfg.h)));
    }
    if s.re < crit - 1e-12 {
        return Err(Error::Precondition(format!(
            "Re s = {} is left of the critical line {crit}",
            s.re
        )));
    }
    if !(eta > 0.5) || eta == eta.round() {
        return Err(Error::InvalidArgument(format!(
            "η = {eta} must exceed 1/2 and not be an integer"
        )));
    }
    if !(eta > s.re - form.k as f64 / 2.0 + 0.25) {
        return Err(Error::Precondition(format!(
            "η = {eta} must exceed Re s − k/2 + 1/4 = {}",
            s.re - form.k as f64 / 2.0 + 0.25
        )));
    }
    if !(eta < h) {
        return Err(Error::Precondition(format!(
            "η = {eta} must stay below h = {h} to avoid further poles of Γ(u/h)"
        )));
    }
    if !(alpha > 0.0 && alpha < crit && alpha < w - s.re) {
        return Err(Error::InvalidArgument(format!(
            "α = {alpha} must lie in (0, min({crit}, {}))",
            w - s.re
        )));
    }
    let x = cfg.x.unwrap_or_else(|| afe_default_x(form, t, cfg.h));
    let table = form.coeffs.as_slice();
    let n_tab = table.len();
    if !(x >= 1.0) || x > n_tab as f64 {
        return Err(Error::InsufficientTable(format!(
            "truncation point x = {x} outside [1, {n_tab}]"
        )));
    }
    let nx = x.floor() as usize;
    let e = form.k as f64 / 2.0 + 0.5;
    let env = form.coeffs.envelope_constant();
    // Σ_{n>N} |a(n)| n^{−σ} e^{−(n/x)^h} ≤ C N^{e−σ} e^{−(N/x)^h} x^h / (h N^{h−1}).
    let nf = n_tab as f64;
    let j3_tail =
        env * nf.powf(e - s.re) * (-(nf / x).powf(h)).exp() * x.powf(h) / (h * nf.powf(h - 1.0));
    if j3_tail > cfg.target_eps {
        return Err(Error::InsufficientTable(format!(
            "smoothed tail beyond n = {n_tab} is bounded only by {j3_tail:.2e} at x = {x}"
        )));
    }

    let logs: Vec<(f64, Complex64)> = table
        .iter()
        .enumerate()
        .map(|(i, &a)| (((i + 1) as f64).ln(), a))
        .collect();
    let (head, tail) = logs.split_at(nx);

    let sum = |range: &[(f64, Complex64)], f: &dyn Fn(f64, Complex64) -> Complex64| {
        let v: Vec<Complex64> = range.iter().map(|&(l, a)| f(l, a)).collect();
        pairwise_sum(&v)
    };
    let j1 = sum(head, &|l, a| a * (-s * l).exp());
    let j2 = sum(head, &|l, a| {
        let n = l.exp();
        a * (-s * l).exp() * ((-(n / x).powf(h)).exp() - 1.0)
    });
    let j3 = sum(tail, &|l, a| {
        let n = l.exp();
        a * (-s * l).exp() * (-(n / x).powf(h)).exp()
    });
    let eps_sign = form.epsilon();
    let ln_pref = (2.0 * s - w) * PI.ln();
    let j4 = (ln_pref + log_gamma(w - s)? - log_gamma(s)?).exp()
        * sum(head, &|l, a| a * (-(w - s) * l).exp())
        * eps_sign;

    let ln_pi2x = (PI * PI * x).ln();
    let line = |re: f64, range| Line {
        s,
        w,
        h,
        re,
        ln_pi2x,
        ln_pref,
        range,
    };
    let l5 = line(-eta, tail);
    let l6 = line(alpha, head);
    let scale = j1.norm().max(j4.norm()).max(1.0);
    let factor = eps_sign / (2.0 * PI * h);
    // Γ(u/h) decays like e^{−π|v|/(2h)}; extend the segment from log²|t|
    // until the neglected ends are below the target.
    let decay_len = 2.0 * h / PI;
    let mut half = t.abs().ln().powi(2).max(1.0);
    let trunc_tol = cfg.target_eps * scale * 1e-2;
    let end_bound = |half: f64| -> Result<f64> {
        Ok((l5.end_magnitude(half)? + l6.end_magnitude(half)?) * decay_len * factor.abs() * 2.0)
    };
    let mut end_err = end_bound(half)?;
    while end_err > trunc_tol && half < MAX_HALF_WIDTH {
        half += 2.0;
        end_err = end_bound(half)?;
    }
    let quad_tol = cfg.target_eps * scale / 10.0;
    let q5 = l5.integrate(half, cfg.quad_step, quad_tol)?;
    let q6 = l6.integrate(half, cfg.quad_step, quad_tol)?;
    let j5 = -q5.value * factor;
    let j6 = -q6.value * factor;

    // The dual sum of J₅ stops at n = N. Each neglected a(n) enters with
    // weight W(n), which decays in n; with Σ|a(n)|² ~ r n^{k+1/2} the
    // neglected part is about W(N)·(r N^{k+1/2})^{1/2}.
    let r_hat = {
        let sq: Vec<f64> = table.iter().map(|c| c.norm_sqr()).collect();
        (2.0 * form.k as f64 + 1.0) * pairwise_sum(&sq) / (2.0 * nf.powf(w))
    };
    let j5_trunc = l5.weight(&q5, half, nf) * factor.abs() * (r_hat * nf.powf(w)).sqrt();

    let terms = [j1, j2, j3, j4, j5, j6];
    let value = pairwise_sum(&terms);
    let err_est = (q5.diff + q6.diff) * factor.abs() + end_err + j3_tail + j5_trunc;
    Ok(AfeResult {
        value,
        terms,
        err_est,
        x,
        half_width: half,
    })
}
