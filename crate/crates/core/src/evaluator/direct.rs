//! L(s) as a plain Dirichlet sum with a certified tail.

use num_complex::Complex64;

use super::FormDescriptor;
use crate::dirichlet::partial_sum;
use crate::error::{Error, Result};

/// Smallest Re s accepted by [`l_direct`]: the absolute-convergence
/// abscissa k/2 + 3/4 plus a margin of 1/4.
pub fn direct_min_sigma(form: &FormDescriptor) -> f64 {
    form.k as f64 / 2.0 + 1.0
}

/// Σ a(n) n^{−s} over the whole table, provided the fitted tail bound
/// |Σ_{n>N}| ≤ C Σ_{n>N} n^{k/2+1/2−σ} is at most `eps`.
pub fn l_direct(form: &FormDescriptor, s: Complex64, eps: f64) -> Result<Complex64> {
    let min = direct_min_sigma(form);
    if s.re < min {
        return Err(Error::Precondition(format!(
            "direct summation needs Re s ≥ {min}, got {}",
            s.re
        )));
    }
    let table = &form.coeffs;
    match table.tail_bound(s.re) {
        Some(b) if b <= eps => partial_sum(table, s, table.len()),
        Some(b) => Err(Error::InsufficientTable(format!(
            "tail bound {b:.3e} at Re s = {} exceeds {eps:.1e} with {} coefficients",
            s.re,
            table.len()
        ))),
        None => Err(Error::InsufficientTable(format!(
            "tail cannot be bounded at Re s = {} from the fitted envelope",
            s.re
        ))),
    }
}

/// Whether [`l_direct`] can certify `eps` at abscissa σ.
pub fn direct_certifies(form: &FormDescriptor, sigma: f64, eps: f64) -> bool {
    sigma >= direct_min_sigma(form)
        && form.coeffs.tail_bound(sigma).is_some_and(|b| b <= eps)
}
