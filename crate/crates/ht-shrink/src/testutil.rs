//! Helpers shared by unit tests.

/// Two-sample Kolmogorov-Smirnov statistic; both inputs must be sorted.
pub(crate) fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (m, n) = (a.len(), b.len());
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d = 0.0f64;
    while i < m && j < n {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        let diff = (i as f64 / m as f64 - j as f64 / n as f64).abs();
        if diff > d {
            d = diff;
        }
    }
    d
}
