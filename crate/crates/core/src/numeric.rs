//! Small numerical helpers shared by the evaluator and statistics modules.

use std::ops::Add;

use num_complex::Complex64;

/// Pairwise (tree) summation. The reduction order depends only on the
/// length of the input, so results do not depend on how the terms were
/// produced (sequentially or by a thread pool).
pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Copy + Default + Add<Output = T>,
{
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        let mut acc = T::default();
        for &x in xs {
            acc = acc + x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Composite Simpson rule on `samples` taken at equal spacing `h`.
/// An even number of panels is required (odd sample count).
pub fn simpson(samples: &[Complex64], h: f64) -> Complex64 {
    let n = samples.len();
    assert!(n >= 3 && n % 2 == 1, "Simpson needs an odd number of samples ≥ 3");
    let weighted: Vec<Complex64> = samples
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let w = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            v * w
        })
        .collect();
    pairwise_sum(&weighted) * (h / 3.0)
}

/// Real-valued counterpart of [`simpson`].
pub fn simpson_real(samples: &[f64], h: f64) -> f64 {
    let n = samples.len();
    assert!(n >= 3 && n % 2 == 1, "Simpson needs an odd number of samples ≥ 3");
    let weighted: Vec<f64> = samples
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let w = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            v * w
        })
        .collect();
    pairwise_sum(&weighted) * (h / 3.0)
}

/// Relative difference |a − b| / max(|a|, |b|, floor).
pub fn rel_diff(a: Complex64, b: Complex64, floor: f64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(floor)
}
