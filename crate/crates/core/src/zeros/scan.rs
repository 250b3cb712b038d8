//! Zeros on the critical line from sign changes of the real function
//! Z(t) = ξ(k/2 + 1/4 + it)·e^{π|t|/2}, multiplied by −i when ℓ = 1.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{ZeroConfig, ZeroKind, ZeroMethod, ZeroRecord};
use crate::error::{Error, Result};
use crate::evaluator::xi::{xi_scale, xi_scaled_with};
use crate::evaluator::{l_eval, EvalConfig, FormDescriptor};

/// Largest discarded/scale ratio tolerated by [`z_function`].
const REALNESS_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ScanStats {
    pub grid_points: usize,
    pub evaluations: usize,
    /// Largest |discarded part| / max(|kept part|, scale) seen.
    pub max_realness: f64,
}

/// Z(t) together with the realness ratio of the evaluation.
fn z_with_ratio(form: &FormDescriptor, t: f64, eps: f64, rotation: f64) -> Result<(f64, f64)> {
    if !form.real_coeffs {
        return Err(Error::Precondition(
            "Z(t) is real only for forms with real coefficients".into(),
        ));
    }
    let s = Complex64::new(form.critical_abscissa(), t);
    let x = xi_scaled_with(form, s, eps, rotation)?;
    let (kept, discarded) = if form.ell == 0 { (x.re, x.im) } else { (x.im, -x.re) };
    let ratio = discarded.abs() / kept.abs().max(xi_scale(form, s));
    if ratio > REALNESS_TOL {
        return Err(Error::Realness {
            t,
            kept,
            discarded,
        });
    }
    Ok((kept, ratio))
}

/// Z(t): the real part (ℓ = 0) or imaginary part (ℓ = 1) of the scaled ξ on
/// the critical line. Fails with [`Error::Realness`] if the other part is
/// not negligible.
pub fn z_function(form: &FormDescriptor, t: f64, cfg: &EvalConfig) -> Result<f64> {
    Ok(z_with_ratio(form, t, cfg.target_eps, cfg.rotation)?.0)
}

/// Scan abscissae in [t0, t1]: spacing π/(4 log(3 + t))/refine, both ends included.
pub fn scan_grid(t0: f64, t1: f64, refine: f64) -> Vec<f64> {
    let mut grid = vec![t0];
    let mut t = t0;
    while t < t1 {
        t += PI / (4.0 * (3.0 + t.abs()).ln() * refine);
        grid.push(t.min(t1));
    }
    grid
}

/// Illinois iteration on a sign-changing bracket. Returns the midpoint of
/// the final bracket, its width, and the evaluation count.
fn illinois<F>(f: F, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64, tol: f64) -> Result<(f64, f64, usize)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut evals = 0;
    let mut side = 0i8;
    for iter in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let mut c = b - fb * (b - a) / (fb - fa);
        // Every fourth step bisects, guarding against stagnation in noise.
        if !(c > a.min(b) && c < a.max(b)) || iter % 4 == 3 {
            c = 0.5 * (a + b);
        }
        if c == a || c == b {
            break;
        }
        let fc = f(c)?;
        evals += 1;
        if fc == 0.0 {
            return Ok((c, 0.0, evals));
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok((0.5 * (a + b), (b - a).abs(), evals))
}

/// On-line zeros with t0 < γ < t1.
pub fn scan_line(form: &FormDescriptor, t0: f64, t1: f64, cfg: &ZeroConfig) -> Result<Vec<ZeroRecord>> {
    Ok(scan_line_with_stats(form, t0, t1, cfg)?.0)
}

/// [`scan_line`] with evaluation and realness statistics.
pub fn scan_line_with_stats(
    form: &FormDescriptor,
    t0: f64,
    t1: f64,
    cfg: &ZeroConfig,
) -> Result<(Vec<ZeroRecord>, ScanStats)> {
    if !(t0 >= 0.0 && t1 >= t0) {
        return Err(Error::InvalidArgument(format!("scan interval [{t0}, {t1}]")));
    }
    if t1 == t0 {
        return Ok((Vec::new(), ScanStats::default()));
    }
    let ev = &cfg.eval;
    let grid = scan_grid(t0, t1, cfg.scan_refine);
    let vals: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&t| z_with_ratio(form, t, ev.target_eps, ev.rotation))
        .collect::<Result<_>>()?;
    let mut stats = ScanStats {
        grid_points: grid.len(),
        evaluations: grid.len(),
        max_realness: vals.iter().map(|v| v.1).fold(0.0, f64::max),
    };
    let crit = form.critical_abscissa();
    let l_cfg = EvalConfig {
        target_eps: cfg.refine_eps,
        ..ev.clone()
    };
    let tol = (cfg.bisection_tol * 1e-3).max(4.0 * f64::EPSILON * t1);
    let brackets: Vec<(usize, bool)> = (0..grid.len())
        .filter_map(|i| {
            let z = vals[i].0;
            if z == 0.0 && grid[i] > t0 && grid[i] < t1 {
                Some((i, true))
            } else if i + 1 < grid.len() && z != 0.0 && z * vals[i + 1].0 < 0.0 {
                Some((i, false))
            } else {
                None
            }
        })
        .collect();
    let found: Vec<(ZeroRecord, usize)> = brackets
        .par_iter()
        .map(|&(i, exact)| -> Result<(ZeroRecord, usize)> {
            let (gamma, width, evals) = if exact {
                (grid[i], 0.0, 0)
            } else {
                let f = |t: f64| z_with_ratio(form, t, cfg.refine_eps, ev.rotation).map(|v| v.0);
                illinois(f, grid[i], vals[i].0, grid[i + 1], vals[i + 1].0, tol)?
            };
            let residual = l_eval(form, Complex64::new(crit, gamma), &l_cfg)?.norm();
            Ok((
                ZeroRecord {
                    beta: crit,
                    gamma,
                    kind: ZeroKind::OnLine,
                    residual,
                    method: ZeroMethod::Bisection,
                    uncertainty: width,
                },
                evals + 1,
            ))
        })
        .collect::<Result<_>>()?;
    stats.evaluations += found.iter().map(|f| f.1).sum::<usize>();
    let zeros = found
        .into_iter()
        .map(|f| f.0)
        .filter(|z| z.gamma > t0 && z.gamma < t1)
        .collect();
    Ok((zeros, stats))
}
