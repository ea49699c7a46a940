//! Standard-normal helpers with stable log-domain tails.
//!
//! The shrinkage closed form multiplies `exp(c)` by `Φ(-d)` with `c` and `d`
//! both potentially in the tens of thousands, so products must be assembled
//! in the log domain. `ln Φ(z)` is computed from `erfc` while that is
//! representable and switches to the asymptotic Mills-ratio expansion in the
//! far left tail.

use statrs::function::erf::erfc;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_74;
const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Standard normal CDF Φ(z).
pub fn norm_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

/// Standard normal density φ(z).
pub fn norm_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// ln Φ(z), finite for all finite `z`.
///
/// For z ≥ -30, `erfc` is well inside the representable range and the direct
/// logarithm is accurate. Below that the Mills-ratio asymptotic series
/// Φ(-t) ≈ φ(t)/t · (1 - 1/t² + 3/t⁴ - 15/t⁶ + 105/t⁸) is used; at t = 30
/// the truncation error is below 1e-12 relative.
pub fn ln_norm_cdf(z: f64) -> f64 {
    if z >= 8.0 {
        // Φ(z) = 1 - Q; ln(1-Q) ≈ -Q for Q < 1e-15.
        let q = 0.5 * erfc(z * FRAC_1_SQRT_2);
        return (-q).ln_1p();
    }
    if z >= -30.0 {
        return (0.5 * erfc(-z * FRAC_1_SQRT_2)).ln();
    }
    let t = -z;
    let t2 = t * t;
    let series = 1.0 + (-1.0 + (3.0 + (-15.0 + 105.0 / t2) / t2) / t2) / t2;
    -0.5 * t2 - t.ln() - LN_SQRT_2PI + series.ln()
}

/// log(Σ exp(xᵢ)) over a pair, tolerating -∞ entries.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}
