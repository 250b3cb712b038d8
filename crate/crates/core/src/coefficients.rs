//! Exact q-expansions and the Fourier coefficients of g = θ⁻³·η(2z)¹².
//!
//! Everything in this module is integer arithmetic. Floating point only
//! enters once a table is handed to [`crate::dirichlet::CoefficientTable`].

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default number of coefficients in a generated table.
pub const DEFAULT_TABLE_LEN: usize = 20_000;

/// A power series in q truncated after q^N, with exact integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigInt>,
}

impl PowerSeries {
    /// Builds a series of order `n` from the given coefficients, zero padding
    /// or dropping anything beyond q^n.
    pub fn from_coeffs<I, T>(coeffs: I, n: usize) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut c: Vec<BigInt> = coeffs.into_iter().take(n + 1).map(Into::into).collect();
        c.resize(n + 1, BigInt::zero());
        Self { coeffs: c }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); n + 1],
        }
    }

    pub fn one(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// The monomial q^e (zero if e exceeds the order).
    pub fn monomial(e: usize, n: usize) -> Self {
        let mut s = Self::zero(n);
        if e <= n {
            s.coeffs[e] = BigInt::one();
        }
        s
    }

    /// Truncation order N: the series carries q^0 ..= q^N.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }
}

/// θ(z) = Σ_{n∈ℤ} q^{n²}.
pub fn theta_series(n: usize) -> PowerSeries {
    let mut s = PowerSeries::zero(n);
    s.coeffs[0] = BigInt::one();
    let mut m = 1usize;
    while m * m <= n {
        s.coeffs[m * m] = BigInt::from(2);
        m += 1;
    }
    s
}

/// Exponents and signed weights of η(z)³/q^{1/8} = Π(1−x^m)³ in the variable x,
/// from Jacobi's identity Σ_j (−1)^j (2j+1) x^{j(j+1)/2}.
fn eta_cubed_sparse(limit: usize) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    let mut j = 0usize;
    loop {
        let e = j * (j + 1) / 2;
        if e > limit {
            break;
        }
        let w = (2 * j + 1) as i64;
        out.push((e, if j % 2 == 0 { w } else { -w }));
        j += 1;
    }
    out
}

/// q·Π_{n≥1}(1−q^{2n})¹², the q-expansion of η(2z)¹².
pub fn eta2_pow12(n: usize) -> PowerSeries {
    // Π(1−x^m)^12 = (Π(1−x^m)^3)^4 with x = q², then shift by one power of q.
    let half = n / 2;
    let sparse = eta_cubed_sparse(half);
    let mut dense = vec![BigInt::zero(); half + 1];
    for &(e, w) in &sparse {
        dense[e] = BigInt::from(w);
    }
    for _ in 0..3 {
        let mut next = vec![BigInt::zero(); half + 1];
        for &(e, w) in &sparse {
            for (i, c) in dense.iter().enumerate().take(half + 1 - e) {
                if !c.is_zero() {
                    next[i + e] += c * w;
                }
            }
        }
        dense = next;
    }
    let mut s = PowerSeries::zero(n);
    for (m, c) in dense.into_iter().enumerate() {
        let idx = 2 * m + 1;
        if idx <= n {
            s.coeffs[idx] = c;
        }
    }
    s
}

/// Cauchy product truncated at the common order.
pub fn mul(a: &PowerSeries, b: &PowerSeries) -> Result<PowerSeries> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch(a.order(), b.order()));
    }
    let n = a.order();
    let mut out = PowerSeries::zero(n);
    for (i, ai) in a.coeffs.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs[..=n - i].iter().enumerate() {
            if !bj.is_zero() {
                out.coeffs[i + j] += ai * bj;
            }
        }
    }
    Ok(out)
}

/// Multiplicative inverse of a series whose constant term is ±1.
pub fn inv(a: &PowerSeries) -> Result<PowerSeries> {
    let a0 = &a.coeffs[0];
    let sign = if a0.is_one() {
        1
    } else if (-a0).is_one() {
        -1
    } else {
        return Err(Error::NonUnitConstant(a0.to_string()));
    };
    let n = a.order();
    let support: Vec<(usize, &BigInt)> = a
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let mut b = PowerSeries::zero(n);
    b.coeffs[0] = BigInt::from(sign);
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for &(j, aj) in &support {
            if j > m {
                break;
            }
            acc += aj * &b.coeffs[m - j];
        }
        // b_m = −a₀⁻¹ Σ a_j b_{m−j}, and a₀⁻¹ = a₀ for a₀ = ±1.
        b.coeffs[m] = if sign == 1 { -acc } else { acc };
    }
    Ok(b)
}

fn theta_cubed(n: usize) -> PowerSeries {
    let th = theta_series(n);
    let sq = mul(&th, &th).expect("same order");
    mul(&sq, &th).expect("same order")
}

/// a_g(1..=n) computed as the coefficients of inv(θ³)·η(2z)¹².
pub fn g_coefficients(n: usize) -> Vec<BigInt> {
    assert!(n >= 1, "truncation order must be at least 1");
    let inverse = inv(&theta_cubed(n)).expect("θ³ has constant term 1");
    let g = mul(&inverse, &eta2_pow12(n)).expect("same order");
    assert!(g.coeffs[0].is_zero(), "g is a cusp form, a_g(0) must vanish");
    g.coeffs.into_iter().skip(1).collect()
}

/// a_g(1..=n) from forward substitution in the triangular system θ³·g = η(2z)¹².
pub fn g_coefficients_triangular(n: usize) -> Vec<BigInt> {
    assert!(n >= 1, "truncation order must be at least 1");
    let t3 = theta_cubed(n);
    let rhs = eta2_pow12(n);
    let mut g = vec![BigInt::zero(); n + 1];
    for m in 0..=n {
        let mut acc = rhs.coeffs[m].clone();
        for j in 1..=m {
            let c = &t3.coeffs[j];
            if !c.is_zero() {
                acc -= c * &g[m - j];
            }
        }
        // θ³ has unit constant term, so no division is needed.
        g[m] = acc;
    }
    assert!(g[0].is_zero(), "g is a cusp form, a_g(0) must vanish");
    g.into_iter().skip(1).collect()
}

/// Divides a series by θ in place: y_m = x_m − 2 Σ_{j≥1, j²≤m} y_{m−j²}.
fn divide_by_theta(x: &mut [i128]) -> Result<()> {
    for m in 1..x.len() {
        let mut acc = x[m];
        let mut j = 1usize;
        while j * j <= m {
            acc = acc
                .checked_sub(x[m - j * j].checked_mul(2).ok_or(Error::Overflow(m))?)
                .ok_or(Error::Overflow(m))?;
            j += 1;
        }
        x[m] = acc;
    }
    Ok(())
}

/// a_g(1..=n) by dividing η(2z)¹² by the sparse series θ three times.
///
/// Exact, but uses checked 128-bit integers instead of big integers: the
/// intermediate quotients η(2z)¹²/θ and η(2z)¹²/θ² are holomorphic modular
/// forms, so their coefficients grow polynomially. Overflow is reported, not
/// wrapped. Cost is O(n^{3/2}), which makes tables of 10⁵–10⁶ terms cheap.
pub fn g_coefficients_fast(n: usize) -> Result<Vec<i64>> {
    assert!(n >= 1, "truncation order must be at least 1");
    let half = n / 2;
    let sparse = eta_cubed_sparse(half);
    let mut dense = vec![0i128; half + 1];
    for &(e, w) in &sparse {
        dense[e] = w as i128;
    }
    for _ in 0..3 {
        let mut next = vec![0i128; half + 1];
        for &(e, w) in &sparse {
            for i in 0..=half - e {
                let c = dense[i];
                if c != 0 {
                    let p = c.checked_mul(w as i128).ok_or(Error::Overflow(i + e))?;
                    next[i + e] = next[i + e].checked_add(p).ok_or(Error::Overflow(i + e))?;
                }
            }
        }
        dense = next;
    }
    let mut series = vec![0i128; n + 1];
    for (m, c) in dense.into_iter().enumerate() {
        if 2 * m + 1 <= n {
            series[2 * m + 1] = c;
        }
    }
    for _ in 0..3 {
        divide_by_theta(&mut series)?;
    }
    assert_eq!(series[0], 0, "g is a cusp form, a_g(0) must vanish");
    series
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| i64::try_from(c).map_err(|_| Error::Overflow(i)))
        .collect()
}

/// Converts an exact table to floating point.
pub fn to_complex<T: ToPrimitive>(table: &[T]) -> Vec<Complex64> {
    table
        .iter()
        .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
        .collect()
}

/// Renders an integer coefficient table as CSV with an "n,a" header.
pub fn coefficients_csv<T: std::fmt::Display>(table: &[T]) -> String {
    let mut out = String::with_capacity(table.len() * 12);
    out.push_str("n,a\n");
    for (i, c) in table.iter().enumerate() {
        let _ = writeln!(out, "{},{}", i + 1, c);
    }
    out
}

/// Reads a coefficient table: one "n,value" or "n,re,im" row per line,
/// n running 1, 2, 3, … without gaps. A leading "n,a" header is allowed.
pub fn load_coefficients(path: &Path) -> Result<Vec<Complex64>> {
    let text = fs::read_to_string(path)?;
    parse_coefficients(&text, path)
}

pub fn parse_coefficients(text: &str, path: &Path) -> Result<Vec<Complex64>> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if out.is_empty() && lineno == 0 && line.eq_ignore_ascii_case("n,a") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(err(lineno + 1, format!("expected 2 or 3 fields, got {}", fields.len())));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|_| err(lineno + 1, format!("bad index {:?}", fields[0])))?;
        let expected = out.len() + 1;
        if n != expected {
            return Err(err(lineno + 1, format!("expected n = {expected}, found {n}")));
        }
        let num = |s: &str| -> Result<f64> {
            let v: f64 = s
                .parse()
                .map_err(|_| err(lineno + 1, format!("non-numeric value {s:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(err(lineno + 1, format!("non-finite value {s:?}")))
            }
        };
        let re = num(fields[1])?;
        let im = if fields.len() == 3 { num(fields[2])? } else { 0.0 };
        out.push(Complex64::new(re, im));
    }
    if out.is_empty() {
        return Err(err(0, "no coefficients".into()));
    }
    Ok(out)
}

/// Largest absolute value in an exact table, for diagnostics.
pub fn max_abs(table: &[BigInt]) -> BigInt {
    table.iter().map(|c| c.abs()).max().unwrap_or_default()
}
