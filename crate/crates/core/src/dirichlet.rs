//! Dirichlet-series algebra over the positive integers.
//!
//! Tables are 1-indexed in the mathematical sense and stored 0-indexed:
//! `a[0]` holds a(1).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// Fourier coefficients a(1..=N) of a form of weight k + 1/2.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    a: Vec<Complex64>,
    k: u32,
    normalized: bool,
}

impl CoefficientTable {
    pub fn new(a: Vec<Complex64>, k: u32) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "coefficient table needs at least 2 entries, got {}",
                a.len()
            )));
        }
        let normalized = a[0] == Complex64::new(1.0, 0.0);
        Ok(Self { a, k, normalized })
    }

    /// Builds a table from exact integer coefficients.
    pub fn from_integers(a: &[i64], k: u32) -> Result<Self> {
        Self::new(a.iter().map(|&v| Complex64::new(v as f64, 0.0)).collect(), k)
    }

    /// The table scaled so that a(1) = 1.
    pub fn normalize(&self) -> Result<Self> {
        let a1 = self.a[0];
        if a1 == Complex64::new(0.0, 0.0) {
            return Err(Error::Precondition(
                "a(1) = 0: normalization and the c = 1 construction need a(1) ≠ 0".into(),
            ));
        }
        Ok(Self {
            a: self.a.iter().map(|&v| v / a1).collect(),
            k: self.k,
            normalized: true,
        })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn weight(&self) -> f64 {
        self.k as f64 + 0.5
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// a(n) for 1 ≤ n ≤ N.
    pub fn get(&self, n: usize) -> Complex64 {
        self.a[n - 1]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.a
    }

    pub fn is_real(&self) -> bool {
        self.a.iter().all(|c| c.im == 0.0)
    }

    /// Envelope constant C of |a(n)| ≤ C·n^{k/2+1/2}, fitted on the upper
    /// half of the table. Used to bound Dirichlet-series tails beyond N.
    pub fn envelope_constant(&self) -> f64 {
        let e = self.k as f64 / 2.0 + 0.5;
        let n = self.a.len();
        (n / 2..=n)
            .filter(|&m| m >= 1)
            .map(|m| self.a[m - 1].norm() / (m as f64).powf(e))
            .fold(0.0, f64::max)
    }

    /// Upper bound for |Σ_{n>N} a(n) n^{−s}| at Re s = σ from the fitted
    /// envelope, or `None` when the envelope sum diverges.
    pub fn tail_bound(&self, sigma: f64) -> Option<f64> {
        let c = self.envelope_constant();
        if c == 0.0 {
            return Some(0.0);
        }
        let p = sigma - (self.k as f64 / 2.0 + 0.5);
        if p <= 1.0 {
            return None;
        }
        // Σ_{n>N} n^{−p} ≤ ∫_N^∞ u^{−p} du.
        let n = self.a.len() as f64;
        Some(c * n.powf(1.0 - p) / (p - 1.0))
    }
}

/// Coefficients d(n) of 1/L(s) as a Dirichlet series.
#[derive(Clone, Debug, PartialEq)]
pub struct ReciprocalTable {
    pub d: Vec<Complex64>,
}

/// Coefficients b(n) of L′(s)/L(s) as a Dirichlet series over the integers.
#[derive(Clone, Debug, PartialEq)]
pub struct LogDerivTable {
    pub b: Vec<Complex64>,
    /// Index of the first nonzero coefficient of L (always 1 here).
    pub c: usize,
}

impl LogDerivTable {
    /// b(n) for 1 ≤ n ≤ N.
    pub fn get(&self, n: usize) -> Complex64 {
        self.b[n - 1]
    }
}

/// Σ_{n≤x} a(n)·n^{−s}.
pub fn partial_sum(table: &CoefficientTable, s: Complex64, x: usize) -> Result<Complex64> {
    if x > table.len() {
        return Err(Error::InsufficientTable(format!(
            "cutoff {x} exceeds table length {}",
            table.len()
        )));
    }
    let terms: Vec<Complex64> = table.a[..x]
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            if i == 0 {
                a
            } else {
                a * (-s * ((i + 1) as f64).ln()).exp()
            }
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

fn require_normalized(table: &CoefficientTable) -> Result<()> {
    if table.normalized {
        Ok(())
    } else {
        Err(Error::Precondition(
            "table is not normalized (a(1) must equal 1)".into(),
        ))
    }
}

/// Dirichlet inverse: d(1) = 1, d(n) = −Σ_{m|n, m<n} d(m)·a(n/m).
pub fn reciprocal_coeffs(table: &CoefficientTable, n: usize) -> Result<ReciprocalTable> {
    require_normalized(table)?;
    let n = n.min(table.len());
    let mut acc = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut d = vec![Complex64::new(0.0, 0.0); n + 1];
    for m in 1..=n {
        d[m] = if m == 1 {
            Complex64::new(1.0, 0.0)
        } else {
            -acc[m]
        };
        let dm = d[m];
        if dm == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in 2..=n / m {
            acc[m * j] += dm * table.a[j - 1];
        }
    }
    d.remove(0);
    Ok(ReciprocalTable { d })
}

/// Exact Dirichlet inverse of an integer table with a(1) = 1.
pub fn reciprocal_coeffs_exact(a: &[i64]) -> Result<Vec<i128>> {
    if a.first() != Some(&1) {
        return Err(Error::Precondition(
            "table is not normalized (a(1) must equal 1)".into(),
        ));
    }
    let n = a.len();
    let mut acc = vec![0i128; n + 1];
    let mut d = vec![0i128; n + 1];
    for m in 1..=n {
        d[m] = if m == 1 { 1 } else { acc[m].checked_neg().ok_or(Error::Overflow(m))? };
        if d[m] == 0 {
            continue;
        }
        for j in 2..=n / m {
            let p = d[m]
                .checked_mul(a[j - 1] as i128)
                .ok_or(Error::Overflow(m * j))?;
            acc[m * j] = acc[m * j].checked_add(p).ok_or(Error::Overflow(m * j))?;
        }
    }
    d.remove(0);
    Ok(d)
}

/// b = (−a·log) ∗ d, the coefficients of L′/L.
pub fn log_deriv_coeffs(table: &CoefficientTable, n: usize) -> Result<LogDerivTable> {
    require_normalized(table)?;
    let n = n.min(table.len());
    let d = reciprocal_coeffs(table, n)?.d;
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    for e in 2..=n {
        let coef = -table.a[e - 1] * (e as f64).ln();
        if coef == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in 1..=n / e {
            b[e * j - 1] += coef * d[j - 1];
        }
    }
    Ok(LogDerivTable { b, c: 1 })
}

/// Smallest B ∈ ½ℤ, B ≥ k/2 + 3/4, with Σ_{n≥2} |a(n)| n^{−B} ≤ 1/2,
/// including the fitted tail bound beyond the table.
pub fn dominance_abscissa(table: &CoefficientTable) -> Result<f64> {
    require_normalized(table)?;
    let start = ((table.k as f64 / 2.0 + 0.75) * 2.0).ceil() / 2.0;
    let logs: Vec<f64> = (2..=table.len()).map(|n| (n as f64).ln()).collect();
    let mods: Vec<f64> = table.a[1..].iter().map(|c| c.norm()).collect();
    let mut b = start;
    while b <= start + 40.0 {
        if let Some(tail) = table.tail_bound(b) {
            let terms: Vec<f64> = mods
                .iter()
                .zip(&logs)
                .map(|(&m, &l)| if m == 0.0 { 0.0 } else { m * (-b * l).exp() })
                .collect();
            if pairwise_sum(&terms) + tail <= 0.5 {
                return Ok(b);
            }
        }
        b += 0.5;
    }
    Err(Error::InsufficientTable(format!(
        "no abscissa in [{start}, {}] certified with {} coefficients",
        start + 40.0,
        table.len()
    )))
}

/// Result of [`mv_mean_square`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanValue {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub bound: f64,
}

/// ∫₀ᵀ (Σ a_n n^{−it})(Σ b_n n^{it}) dt evaluated in closed form, compared
/// with its diagonal T·Σ a_n b_n.
pub fn mv_mean_square(a: &[Complex64], b: &[Complex64], t: f64) -> Result<MeanValue> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("T must be positive, got {t}")));
    }
    let n = a.len();
    let diag: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| x * y).collect();
    let rhs = pairwise_sum(&diag) * t;
    let mut cross = Vec::with_capacity(n * n);
    for m in 1..=n {
        let am = a[m - 1];
        if am == Complex64::new(0.0, 0.0) {
            continue;
        }
        for k in 1..=n {
            if k == m {
                continue;
            }
            let bk = b[k - 1];
            if bk == Complex64::new(0.0, 0.0) {
                continue;
            }
            // ∫₀ᵀ (k/m)^{it} dt = ((k/m)^{iT} − 1) / (i·log(k/m)).
            let l = (k as f64 / m as f64).ln();
            let phase = Complex64::new(0.0, l * t).exp() - 1.0;
            cross.push(am * bk * phase / Complex64::new(0.0, l));
        }
    }
    let lhs = rhs + pairwise_sum(&cross);
    let wa: Vec<f64> = a.iter().enumerate().map(|(i, c)| (i + 1) as f64 * c.norm_sqr()).collect();
    let wb: Vec<f64> = b.iter().enumerate().map(|(i, c)| (i + 1) as f64 * c.norm_sqr()).collect();
    let bound = (pairwise_sum(&wa) * pairwise_sum(&wb)).sqrt();
    Ok(MeanValue { lhs, rhs, bound })
}
