//! log Γ and the upper incomplete gamma function for complex arguments.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// B_{2j} / (2j(2j−1)) for j = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const STIRLING_MIN_ABS: f64 = 12.0;

/// True if z lies within `tol` of 0, −1, −2, …
pub fn near_nonpositive_integer(z: Complex64, tol: f64) -> bool {
    z.re < 0.5 && z.im.abs() <= tol && (z.re - z.re.round()).abs() <= tol
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        corr += p * c;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + corr
}

/// Principal branch of log Γ(z): analytic off the negative real axis and
/// real on the positive real axis.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if z.re <= 0.0 && z.im == 0.0 && z.re == z.re.round() {
        return Err(Error::Pole(z.re));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidArgument(format!("log_gamma of non-finite {z}")));
    }
    if z.re > 0.0 && z.norm() >= STIRLING_MIN_ABS {
        return Ok(stirling(z));
    }
    // Shift up: log Γ(z) = log Γ(z+m) − Σ_{j<m} log(z+j). For z off the real
    // axis each z+j stays in the same half-plane, so the principal logs
    // add up to the analytic continuation from the right.
    let mut m = 0usize;
    let mut w = z;
    while !(w.re > 0.0 && w.norm() >= STIRLING_MIN_ABS) {
        w += 1.0;
        m += 1;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..m {
        acc += (z + j as f64).ln();
    }
    let mut out = stirling(w) - acc;
    if z.im == 0.0 {
        // On the negative real axis keep the branch with Im ∈ (−π, π].
        out.im = if z.re > 0.0 {
            0.0
        } else {
            let sign_negative = (z.re.floor() as i64).rem_euclid(2) != 0;
            if sign_negative {
                PI
            } else {
                0.0
            }
        };
    }
    Ok(out)
}

const FPMIN: f64 = 1e-150;
const CF_MAX_ITER: usize = 200_000;
const SERIES_MAX_ITER: usize = 200_000;

/// Legendre continued fraction for Γ(s,z), returned as a logarithm.
fn ln_upper_cf(s: Complex64, z: Complex64) -> Result<Complex64> {
    let tiny = Complex64::new(FPMIN, 0.0);
    let mut b = z + 1.0 - s;
    let mut c = Complex64::new(1.0 / FPMIN, 0.0);
    let mut d = if b.norm() < FPMIN { Complex64::new(1.0 / FPMIN, 0.0) } else { b.inv() };
    let mut h = d;
    for i in 1..CF_MAX_ITER {
        // a_i = −i(i − s)
        let an = (s - i as f64) * i as f64;
        b += 2.0;
        d = an * d + b;
        if d.norm() < FPMIN {
            d = tiny;
        }
        c = b + an / c;
        if c.norm() < FPMIN {
            c = tiny;
        }
        d = d.inv();
        let del = d * c;
        h *= del;
        if (del - 1.0).norm() < 1e-15 {
            return Ok(-z + s * z.ln() + h.ln());
        }
    }
    Err(Error::NoConvergence(format!(
        "continued fraction for Γ({s}, {z})"
    )))
}

/// Series for the lower function γ(s,z) = z^s e^{−z} Σ z^k/(s)_{k+1}, as a logarithm.
fn ln_lower_series(s: Complex64, z: Complex64) -> Result<Complex64> {
    let mut term = s.inv();
    let mut sum = term;
    let mut ap = s;
    for _ in 0..SERIES_MAX_ITER {
        ap += 1.0;
        term *= z / ap;
        sum += term;
        if term.norm() < sum.norm() * 1e-17 {
            return Ok(s * z.ln() - z + sum.ln());
        }
    }
    Err(Error::NoConvergence(format!("series for γ({s}, {z})")))
}

/// log Γ(s,z) for complex s and Re z > 0 (or z real positive).
///
/// The imaginary part is only defined modulo 2π. Working with logarithms
/// keeps the huge and tiny Γ-scales of large |Im s| representable.
pub fn ln_upper_gamma(s: Complex64, z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "upper incomplete gamma needs Re z > 0, got {z}"
        )));
    }
    if z.norm() >= s.norm() + 1.0 || near_nonpositive_integer(s, 1e-6) {
        return ln_upper_cf(s, z);
    }
    let a = log_gamma(s)?;
    let b = ln_lower_series(s, z)?;
    // Γ(s,z) = Γ(s) − γ(s,z), factoring out the larger of the two.
    let one = Complex64::new(1.0, 0.0);
    if b.re > a.re {
        Ok(b + ((a - b).exp() - one).ln())
    } else {
        Ok(a + (one - (b - a).exp()).ln())
    }
}

/// Γ(s,x) = ∫ₓ^∞ t^{s−1} e^{−t} dt for real x > 0.
pub fn upper_incomplete_gamma(s: Complex64, x: f64) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "upper incomplete gamma needs x > 0, got {x}"
        )));
    }
    Ok(ln_upper_gamma(s, Complex64::new(x, 0.0))?.exp())
}
