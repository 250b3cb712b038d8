//! Evaluation of L(s,f), its completion ξ(s) and its derivative.
//!
//! Three independent routes are available:
//!
//! * [`l_direct`]: the Dirichlet series, only where its tail is certified.
//! * the ξ route: the rotated incomplete-gamma expansion of ξ(s), divided
//!   by π^{−s}Γ(s). Valid everywhere.
//! * [`l_afe`]: the truncated approximate functional equation, in the
//!   strip near the critical line.
//!
//! [`l_eval`] dispatches between the first two.

mod afe;
mod direct;
pub mod gamma;
pub mod xi;

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use afe::{afe_default_x, l_afe, AfeResult};
pub use direct::{direct_certifies, direct_min_sigma, l_direct};
pub use gamma::{log_gamma, upper_incomplete_gamma};
pub use xi::{xi_completed, xi_scaled};

use crate::coefficients::{g_coefficients_fast, DEFAULT_TABLE_LEN};
use crate::dirichlet::CoefficientTable;
use crate::error::{Error, Result};

/// A cusp form of weight k + 1/2 on Γ₀(4), known through its coefficients.
#[derive(Debug)]
pub struct FormDescriptor {
    pub id: String,
    pub k: u32,
    /// Fricke sign exponent: f|W₄ = (−1)^ℓ f.
    pub ell: u8,
    pub coeffs: CoefficientTable,
    pub real_coeffs: bool,
    normalization: OnceLock<std::result::Result<f64, String>>,
}

impl Clone for FormDescriptor {
    fn clone(&self) -> Self {
        Self {
            id: self.id.clone(),
            k: self.k,
            ell: self.ell,
            coeffs: self.coeffs.clone(),
            real_coeffs: self.real_coeffs,
            normalization: self.normalization.clone(),
        }
    }
}

impl FormDescriptor {
    pub fn new(id: impl Into<String>, k: u32, ell: u8, coeffs: CoefficientTable) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if ell > 1 {
            return Err(Error::InvalidArgument(format!("ell must be 0 or 1, got {ell}")));
        }
        if coeffs.k() != k {
            return Err(Error::InvalidArgument(format!(
                "table weight index {} differs from k = {k}",
                coeffs.k()
            )));
        }
        Ok(Self {
            id: id.into(),
            k,
            ell,
            real_coeffs: coeffs.is_real(),
            coeffs,
            normalization: OnceLock::new(),
        })
    }

    /// The built-in form g = θ⁻³η(2z)¹² (k = 4, ℓ = 0) with `n` coefficients.
    pub fn g(n: usize) -> Result<Self> {
        let a = g_coefficients_fast(n)?;
        Self::new("g", 4, 0, CoefficientTable::from_integers(&a, 4)?)
    }

    /// g with the default table length.
    pub fn g_default() -> Result<Self> {
        Self::g(DEFAULT_TABLE_LEN)
    }

    /// The weight k + 1/2.
    pub fn weight(&self) -> f64 {
        self.k as f64 + 0.5
    }

    /// Abscissa of the critical line, k/2 + 1/4.
    pub fn critical_abscissa(&self) -> f64 {
        self.k as f64 / 2.0 + 0.25
    }

    /// Abscissa of absolute convergence, k/2 + 3/4.
    pub fn convergence_abscissa(&self) -> f64 {
        self.k as f64 / 2.0 + 0.75
    }

    /// The sign (−1)^ℓ of the functional equation.
    pub fn epsilon(&self) -> f64 {
        if self.ell == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// One-time check that the ξ expansion reproduces the Dirichlet series
    /// where both are valid. Returns the observed relative difference.
    pub fn validate_normalization(&self) -> Result<f64> {
        self.normalization
            .get_or_init(|| normalization_self_test(self))
            .clone()
            .map_err(Error::Precondition)
    }
}

fn normalization_self_test(form: &FormDescriptor) -> std::result::Result<f64, String> {
    let mut sigma = direct_min_sigma(form).max(form.k as f64 / 2.0 + 2.0);
    while !direct_certifies(form, sigma, 1e-12) {
        sigma += 0.25;
        if sigma > form.k as f64 + 20.0 {
            return Err("no abscissa where the Dirichlet series is certified to 1e-12".into());
        }
    }
    let s = Complex64::new(sigma, 3.0);
    let direct = l_direct(form, s, 1e-12).map_err(|e| e.to_string())?;
    let via_xi = xi_scaled(form, s, 1e-13)
        .map(|x| x * xi_to_l_factor(s))
        .map_err(|e| e.to_string())?;
    let rel = (direct - via_xi).norm() / direct.norm();
    if rel > 1e-8 {
        return Err(format!(
            "ξ normalization self-test failed at s = {s}: Dirichlet series {direct}, ξ route {via_xi} (relative difference {rel:.2e})"
        ));
    }
    Ok(rel)
}

/// Converts ξ(s)·e^{π|t|/2} to L(s) = ξ(s) π^s / Γ(s).
fn xi_to_l_factor(s: Complex64) -> Complex64 {
    match log_gamma(s) {
        Ok(lg) => (s * PI.ln() - lg - PI * s.im.abs() / 2.0).exp(),
        // 1/Γ vanishes at the poles.
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

/// Parameters of the evaluators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Truncation point of the approximate functional equation. `None`
    /// picks [`afe_default_x`].
    pub x: Option<f64>,
    /// Smoothing exponent h ∈ {1, 2}.
    pub h: u8,
    /// Abscissa −η of the dual-sum contour.
    pub eta: f64,
    /// Abscissa α of the cut-sum contour. `None` means (k/2 + 1/4)/2.
    pub alpha: Option<f64>,
    /// Initial Simpson step on the vertical segments.
    pub quad_step: f64,
    pub target_eps: f64,
    /// Below this height [`l_afe`] refuses and callers use [`l_eval`].
    pub t_small: f64,
    /// Rotation constant of the ξ expansion.
    pub rotation: f64,
    /// Radius of the Cauchy circle in [`l_derivative`].
    pub deriv_radius: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            x: None,
            h: 1,
            eta: 0.75,
            alpha: None,
            quad_step: 0.25,
            target_eps: 1e-9,
            t_small: 5.0,
            rotation: xi::DEFAULT_ROTATION,
            deriv_radius: 0.05,
        }
    }
}

impl EvalConfig {
    pub fn alpha_for(&self, form: &FormDescriptor) -> f64 {
        self.alpha.unwrap_or(form.critical_abscissa() / 2.0)
    }
}

/// True at the trivial zeros s = 0, −1, −2, … where 1/Γ(s) vanishes.
pub fn is_trivial_zero(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

/// L(s) through the ξ route regardless of the direct sum's validity.
pub fn l_via_xi(form: &FormDescriptor, s: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    if is_trivial_zero(s) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    form.validate_normalization()?;
    let xs = xi::xi_scaled_with(form, s, cfg.target_eps, cfg.rotation)?;
    Ok(xs * xi_to_l_factor(s))
}

/// L(s): the Dirichlet series where its tail is certified to
/// `cfg.target_eps`, the ξ route elsewhere. Trivial zeros return 0.
pub fn l_eval(form: &FormDescriptor, s: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    if direct_certifies(form, s.re, cfg.target_eps) {
        return l_direct(form, s, cfg.target_eps);
    }
    l_via_xi(form, s, cfg)
}

/// L′(s) from the mean of L over a circle of radius r, weighted by
/// e^{−iθ}/r. Node count doubles from 16 to 64 until two estimates agree.
pub fn l_derivative(form: &FormDescriptor, s: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    Ok(l_derivative_with_error(form, s, cfg)?.0)
}

/// [`l_derivative`] together with the node-doubling error estimate.
pub fn l_derivative_with_error(
    form: &FormDescriptor,
    s: Complex64,
    cfg: &EvalConfig,
) -> Result<(Complex64, f64)> {
    circle_derivative(|z| l_eval(form, z, cfg), s, cfg.deriv_radius, cfg.target_eps)
}

/// Cauchy-circle derivative of an analytic function.
pub fn circle_derivative<F>(f: F, s: Complex64, r: f64, eps: f64) -> Result<(Complex64, f64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let estimate = |m: usize| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let th = 2.0 * PI * j as f64 / m as f64;
            let e = Complex64::new(0.0, th).exp();
            acc += f(s + e * r)? / e;
        }
        Ok(acc / (m as f64 * r))
    };
    let mut prev = estimate(16)?;
    let mut m = 32;
    loop {
        let cur = estimate(m)?;
        let err = (cur - prev).norm();
        if err <= eps * cur.norm().max(1.0) || m >= 64 {
            return Ok((cur, err));
        }
        prev = cur;
        m *= 2;
    }
}

#[cfg(test)]
mod tests;
