//! The completed function ξ(s) = π^{−s} Γ(s) L(s).
//!
//! Splitting the Mellin integral of the form at its Fricke fixed point gives
//!
//! ξ(s) = Σ a(n) [ (πn)^{−s} Γ(s, πn e^{iφ}) + ε (πn)^{−(w−s)} Γ(w−s, πn e^{−iφ}) ]
//!
//! with w = k + 1/2, ε = (−1)^ℓ. The integration ray may be rotated by any
//! |φ| < π/2 without changing the value. With φ = 0 the two halves are of
//! size e^{−π|t|/2} but individual terms are not, so at large |t| the real
//! expansion loses all digits to cancellation. Rotating by
//! φ = sgn(t)(π/2 − δ), δ = min(π/2, c/|t|), caps the cancellation at about
//! e^c at the price of ~|t|/c extra terms.
//!
//! Values are returned multiplied by e^{π|t|/2} so they stay representable.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::gamma::ln_upper_gamma;
use super::FormDescriptor;
use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// Default rotation constant c (cancellation is bounded by about e^c).
pub const DEFAULT_ROTATION: f64 = 6.0;

/// Typical size of ξ(s)·e^{π|t|/2} in the strip, used to turn a relative
/// accuracy target into an absolute one.
pub fn xi_scale(form: &FormDescriptor, s: Complex64) -> f64 {
    let w = form.weight();
    let sig = s.re.max(w - s.re);
    let m = s.norm().max((w - s).norm()).max(1.0);
    (2.0 * PI).sqrt() * PI.powf(-sig) * m.powf(sig - 0.5)
}

/// Rotation angle φ for height t.
pub fn rotation_angle(t: f64, c: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let delta = (c / t.abs()).min(FRAC_PI_2);
    t.signum() * (FRAC_PI_2 - delta)
}

/// Number of terms needed so the neglected tail stays below `abs_tol`.
fn truncation(form: &FormDescriptor, s: Complex64, phi: f64, abs_tol: f64) -> Result<usize> {
    let w = form.weight();
    let table = &form.coeffs;
    let e = form.k as f64 / 2.0 + 0.5;
    let env = table
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, a)| a.norm() / ((i + 1) as f64).powf(e))
        .fold(0.0, f64::max);
    let t = s.im.abs();
    let decay = PI * phi.cos();
    let growth = t * (FRAC_PI_2 - phi.abs());
    let turning = ((s.norm() + (w - s).norm()) / PI + 2.0).ceil() as usize;
    let bound = |n: usize| {
        let nf = n as f64;
        2.0 * env * nf.powf(e) * (growth - decay * nf).exp() / (PI * nf)
    };
    // Past the turning point |z| ≫ |s| and each half of the n-th term is
    // bounded by |a(n)| (πn)^{−1} e^{|t|δ − πn cos φ}; the bound then decays
    // at least geometrically with ratio q.
    let mut n = turning.max(1);
    loop {
        let b = bound(n);
        let q = bound(n + 1) / b;
        if q < 1.0 && b * q / (1.0 - q) < abs_tol {
            break;
        }
        n += 1;
        if n > 10_000_000 {
            return Err(Error::NoConvergence(format!("ξ truncation at s = {s}")));
        }
    }
    if n > table.len() {
        return Err(Error::InsufficientTable(format!(
            "ξ({s}) needs {n} coefficients, table has {}",
            table.len()
        )));
    }
    Ok(n)
}

/// ξ(s)·e^{π|t|/2} to relative accuracy `eps` (measured against
/// [`xi_scale`]), with rotation constant `c`.
pub fn xi_scaled_with(form: &FormDescriptor, s: Complex64, eps: f64, c: f64) -> Result<Complex64> {
    let w = form.weight();
    let eps_sign = form.epsilon();
    let t = s.im;
    let phi = rotation_angle(t, c);
    let abs_tol = eps * xi_scale(form, s);
    let m = truncation(form, s, phi, abs_tol)?;
    let shift = PI * t.abs() / 2.0;
    let rot = Complex64::new(0.0, phi);
    let dual = w - s;
    let a = form.coeffs.as_slice();
    let terms: Vec<Complex64> = (1..=m)
        .filter(|&n| a[n - 1].norm() != 0.0)
        .map(|n| -> Result<Complex64> {
            let lx = (PI * n as f64).ln();
            let z1 = (lx + rot).exp();
            let z2 = (lx - rot).exp();
            let t1 = (-s * lx + ln_upper_gamma(s, z1)? + shift).exp();
            let t2 = (-dual * lx + ln_upper_gamma(dual, z2)? + shift).exp();
            Ok(a[n - 1] * (t1 + t2 * eps_sign))
        })
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&terms))
}

/// ξ(s)·e^{π|t|/2} with the default rotation.
pub fn xi_scaled(form: &FormDescriptor, s: Complex64, eps: f64) -> Result<Complex64> {
    xi_scaled_with(form, s, eps, DEFAULT_ROTATION)
}

/// ξ(s) itself. Underflows to zero for |t| beyond roughly 450.
pub fn xi_completed(form: &FormDescriptor, s: Complex64, eps: f64) -> Result<Complex64> {
    Ok(xi_scaled(form, s, eps)? * (-PI * s.im.abs() / 2.0).exp())
}
