//! Argument-principle counts over rectangles and the search for zeros off
//! the critical line.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{ZeroConfig, ZeroKind, ZeroMethod, ZeroRecord};
use crate::error::{Error, Result};
use crate::evaluator::xi::{xi_scale, xi_scaled_with};
use crate::evaluator::{circle_derivative, l_eval, EvalConfig, FormDescriptor};

/// Outcome of [`count_box`]. The box fields are the rectangle actually
/// integrated over, after any dilation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxCount {
    pub count: u64,
    pub winding: f64,
    pub sigma0: f64,
    pub sigma1: f64,
    pub t0: f64,
    pub t1: f64,
    pub retries: usize,
    pub evaluations: usize,
    /// Smallest |ξ|/scale met on the contour.
    pub min_boundary: f64,
}

struct Contour<'a> {
    form: &'a FormDescriptor,
    cfg: &'a ZeroConfig,
}

/// Raised inside a contour pass when the boundary comes too close to a zero.
struct NearZero(String);

enum PassError {
    Near(NearZero),
    Hard(Error),
}

impl From<Error> for PassError {
    fn from(e: Error) -> Self {
        PassError::Hard(e)
    }
}

impl Contour<'_> {
    fn eval(&self, s: Complex64) -> std::result::Result<(Complex64, f64), PassError> {
        let v = xi_scaled_with(self.form, s, self.cfg.eval.target_eps, self.cfg.eval.rotation)?;
        let rel = v.norm() / xi_scale(self.form, s);
        if rel < self.cfg.boundary_min {
            return Err(PassError::Near(NearZero(format!(
                "|ξ|/scale = {rel:.2e} at s = {s}"
            ))));
        }
        Ok((v, rel))
    }

    /// Phase change from p to q, subdividing until every step is small.
    fn track(
        &self,
        p: Complex64,
        fp: Complex64,
        q: Complex64,
        fq: Complex64,
        depth: usize,
        stats: &mut (usize, f64),
    ) -> std::result::Result<f64, PassError> {
        let d = (fq / fp).arg();
        if d.abs() < self.cfg.max_phase_step {
            return Ok(d);
        }
        if depth >= 40 {
            return Err(PassError::Near(NearZero(format!(
                "phase not resolved between {p} and {q}"
            ))));
        }
        let m = 0.5 * (p + q);
        let (fm, rel) = self.eval(m)?;
        stats.0 += 1;
        stats.1 = stats.1.min(rel);
        Ok(self.track(p, fp, m, fm, depth + 1, stats)? + self.track(m, fm, q, fq, depth + 1, stats)?)
    }

    fn pass(&self, s0: f64, s1: f64, t0: f64, t1: f64) -> std::result::Result<(f64, usize, f64), PassError> {
        let c = Complex64::new;
        let corners = [c(s0, t0), c(s1, t0), c(s1, t1), c(s0, t1)];
        let step = self.cfg.contour_step;
        let mut points = Vec::new();
        for i in 0..4 {
            let (a, b) = (corners[i], corners[(i + 1) % 4]);
            let n = ((b - a).norm() / step).ceil().max(1.0) as usize;
            for j in 0..n {
                points.push(a + (b - a) * (j as f64 / n as f64));
            }
        }
        let vals: Vec<(Complex64, f64)> = points
            .par_iter()
            .map(|&s| self.eval(s))
            .collect::<std::result::Result<_, _>>()?;
        let mut stats = (points.len(), vals.iter().map(|v| v.1).fold(f64::INFINITY, f64::min));
        let mut total = 0.0;
        for i in 0..points.len() {
            let j = (i + 1) % points.len();
            total += self.track(points[i], vals[i].0, points[j], vals[j].0, 0, &mut stats)?;
        }
        Ok((total / (2.0 * PI), stats.0, stats.1))
    }
}

/// Number of zeros of ξ in the open rectangle (σ0, σ1) × (t0, t1) by the
/// argument principle. If ξ is too small somewhere on the boundary the box
/// is dilated outward by `cfg.dilation` and retried, at most
/// `cfg.max_retries` times.
pub fn count_box(
    form: &FormDescriptor,
    sigma0: f64,
    sigma1: f64,
    t0: f64,
    t1: f64,
    cfg: &ZeroConfig,
) -> Result<BoxCount> {
    if !(sigma1 > sigma0 && t1 > t0) {
        return Err(Error::InvalidArgument(format!(
            "degenerate box [{sigma0}, {sigma1}] × [{t0}, {t1}]"
        )));
    }
    let contour = Contour { form, cfg };
    let (mut s0, mut s1, mut a, mut b) = (sigma0, sigma1, t0, t1);
    let mut evaluations = 0;
    let mut last = String::new();
    for retries in 0..=cfg.max_retries {
        match contour.pass(s0, s1, a, b) {
            Ok((winding, evals, min_boundary)) => {
                evaluations += evals;
                let count = winding.round();
                if (winding - count).abs() > 0.05 || count < 0.0 {
                    return Err(Error::NoConvergence(format!(
                        "winding number {winding} over [{s0}, {s1}] × [{a}, {b}] is not a nonnegative integer"
                    )));
                }
                return Ok(BoxCount {
                    count: count as u64,
                    winding,
                    sigma0: s0,
                    sigma1: s1,
                    t0: a,
                    t1: b,
                    retries,
                    evaluations,
                    min_boundary,
                });
            }
            Err(PassError::Hard(e)) => return Err(e),
            Err(PassError::Near(NearZero(msg))) => {
                last = msg;
                s0 -= cfg.dilation;
                s1 += cfg.dilation;
                a -= cfg.dilation;
                b += cfg.dilation;
            }
        }
    }
    Err(Error::BoundaryZero {
        retries: cfg.max_retries,
        detail: last,
    })
}

/// Zeros strictly inside the rectangle whose real part is not the critical
/// abscissa. Boxes holding more than one zero are quadrisected; a single
/// zero is polished by Newton's method on L. Each zero is returned with its
/// reflection w − β + iγ, which is verified by evaluation.
pub fn locate_offline(
    form: &FormDescriptor,
    sigma0: f64,
    sigma1: f64,
    t0: f64,
    t1: f64,
    cfg: &ZeroConfig,
) -> Result<Vec<ZeroRecord>> {
    let total = count_box(form, sigma0, sigma1, t0, t1, cfg)?;
    let mut found = Vec::new();
    search(form, &total, cfg, 0, &mut found)?;
    if found.len() as u64 != total.count {
        return Err(Error::Reconciliation(format!(
            "box [{sigma0}, {sigma1}] × [{t0}, {t1}] holds {} zeros, located {}",
            total.count,
            found.len()
        )));
    }
    let l_cfg = EvalConfig {
        target_eps: cfg.refine_eps,
        ..cfg.eval.clone()
    };
    let w = form.weight();
    let mut out = found.clone();
    for z in &found {
        let rb = w - z.beta;
        if out
            .iter()
            .any(|o| (o.beta - rb).abs() < 1e-6 && (o.gamma - z.gamma).abs() < 1e-6)
        {
            continue;
        }
        let residual = l_eval(form, Complex64::new(rb, z.gamma), &l_cfg)?.norm();
        if residual > cfg.residual_tol {
            return Err(Error::Reconciliation(format!(
                "reflection {rb} + {}i of an off-line zero has |L| = {residual:.2e}",
                z.gamma
            )));
        }
        out.push(ZeroRecord {
            beta: rb,
            residual,
            ..*z
        });
    }
    out.sort_by(|a, b| a.gamma.total_cmp(&b.gamma).then(a.beta.total_cmp(&b.beta)));
    Ok(out)
}

fn search(
    form: &FormDescriptor,
    bx: &BoxCount,
    cfg: &ZeroConfig,
    depth: usize,
    out: &mut Vec<ZeroRecord>,
) -> Result<()> {
    if bx.count == 0 {
        return Ok(());
    }
    if bx.count == 1 {
        if let Some(z) = newton(form, bx, cfg)? {
            out.push(z);
            return Ok(());
        }
    }
    if depth >= cfg.max_depth {
        return Err(Error::Reconciliation(format!(
            "quadrisection depth {depth} reached in [{}, {}] × [{}, {}] with {} zeros",
            bx.sigma0, bx.sigma1, bx.t0, bx.t1, bx.count
        )));
    }
    let sm = 0.5 * (bx.sigma0 + bx.sigma1);
    let tm = 0.5 * (bx.t0 + bx.t1);
    for (a, b, c, d) in [
        (bx.sigma0, sm, bx.t0, tm),
        (sm, bx.sigma1, bx.t0, tm),
        (bx.sigma0, sm, tm, bx.t1),
        (sm, bx.sigma1, tm, bx.t1),
    ] {
        let sub = count_box(form, a, b, c, d, cfg)?;
        search(form, &sub, cfg, depth + 1, out)?;
    }
    Ok(())
}

/// Newton's method from the box centre. `None` if it leaves the box or
/// fails to converge.
fn newton(form: &FormDescriptor, bx: &BoxCount, cfg: &ZeroConfig) -> Result<Option<ZeroRecord>> {
    let l_cfg = EvalConfig {
        target_eps: cfg.refine_eps,
        ..cfg.eval.clone()
    };
    let size = (bx.sigma1 - bx.sigma0).min(bx.t1 - bx.t0);
    let r = (size / 4.0).min(cfg.eval.deriv_radius);
    let mut s = Complex64::new(0.5 * (bx.sigma0 + bx.sigma1), 0.5 * (bx.t0 + bx.t1));
    let within = |s: Complex64, m: f64| {
        s.re > bx.sigma0 - m && s.re < bx.sigma1 + m && s.im > bx.t0 - m && s.im < bx.t1 + m
    };
    // Iterates may wander up to one box diameter outside; only a limit
    // inside the box is accepted as its zero.
    let margin = (bx.sigma1 - bx.sigma0).max(bx.t1 - bx.t0);
    let mut last_step = f64::INFINITY;
    for _ in 0..cfg.newton_max_steps {
        let v = l_eval(form, s, &l_cfg)?;
        if v.norm() <= cfg.newton_tol && last_step < 1e-8 {
            if !within(s, 0.0) {
                return Ok(None);
            }
            return Ok(Some(ZeroRecord {
                beta: s.re,
                gamma: s.im,
                kind: if s.re == form.critical_abscissa() {
                    ZeroKind::OnLine
                } else {
                    ZeroKind::OffLine
                },
                residual: v.norm(),
                method: ZeroMethod::Newton,
                uncertainty: last_step,
            }));
        }
        let (d, _) = circle_derivative(|z| l_eval(form, z, &l_cfg), s, r, cfg.refine_eps)?;
        if d.norm() == 0.0 {
            return Ok(None);
        }
        let step = v / d;
        s -= step;
        last_step = step.norm();
        if !within(s, margin) {
            return Ok(None);
        }
    }
    Ok(None)
}
