//! Adaptive Gauss-Kronrod quadrature for log-scale integrands.
//!
//! Integrands here are posterior kernels whose log spans thousands of units
//! (factors like exp(nβ̂²/2σ²·(1-s)) overflow f64 long before the ratio of
//! interest does), so the integrator consumes `log f` and returns `log ∫ f`.
//! Each Gauss-Kronrod panel is evaluated with a panel-local shift (the max of
//! the log-integrand over its 15 nodes), which keeps every exponentiation in
//! [0, 1]; panel totals are combined by log-sum-exp.
//!
//! Panels never evaluate the interval endpoints (the 15-point Kronrod rule is
//! open), so integrable endpoint singularities such as s^{-1/2} or
//! (1-s)^{u-1} are handled by adaptive bisection toward the endpoint. Callers
//! parameterize so the singular endpoint sits at 0, where f64 spacing is
//! finest; an initial geometric ladder of panels accelerates the descent.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::special::log_add_exp;

/// 15-point Kronrod abscissae (non-negative half), QUADPACK values.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];

/// Kronrod weights matching [`XGK`].
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

/// 7-point Gauss weights; `WG[j]` pairs with `XGK[2j+1]`, `WG[3]` with the center.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// How far the initial geometric ladder descends toward a singular left
/// endpoint at 0 (widths down to b·2⁻⁶⁰ ≈ b·8.7e-19).
const SEED_LEVELS: usize = 60;

/// Options controlling one quadrature run.
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    /// Target relative error of the integral.
    pub rel_tol: f64,
    /// Maximum number of integrand evaluations before giving up.
    pub max_evaluations: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-9,
            max_evaluations: 1_000_000,
        }
    }
}

/// Result of a log-domain quadrature run.
#[derive(Debug, Clone, Copy)]
pub struct LogQuad {
    /// log of the integral (−∞ for an identically-zero integrand).
    pub log_value: f64,
    /// Estimated relative error of the integral.
    pub rel_error: f64,
    /// Number of integrand evaluations consumed.
    pub evaluations: usize,
    /// Whether the requested tolerance was met.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    log_val: f64,
    log_err: f64,
}

/// Heap ordering: largest estimated error first.
#[derive(Debug, Clone, Copy)]
struct ByError(Panel);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.0.log_err.total_cmp(&other.0.log_err) == Ordering::Equal
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.log_err.total_cmp(&other.0.log_err)
    }
}

/// GSL-style error rescaling in the panel-local scaled domain.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

fn eval_panel<F: FnMut(f64) -> f64>(log_f: &mut F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let mut logs = [f64::NEG_INFINITY; 15];
    let mut max_log = f64::NEG_INFINITY;
    for (j, &x) in XGK.iter().enumerate() {
        if j == 7 {
            let v = log_f(center);
            logs[14] = if v.is_nan() { f64::NEG_INFINITY } else { v };
            max_log = max_log.max(logs[14]);
        } else {
            let absc = half * x;
            for (slot, point) in [(2 * j, center - absc), (2 * j + 1, center + absc)] {
                let v = log_f(point);
                logs[slot] = if v.is_nan() { f64::NEG_INFINITY } else { v };
                max_log = max_log.max(logs[slot]);
            }
        }
    }

    if max_log == f64::NEG_INFINITY {
        return Panel {
            lo,
            hi,
            log_val: f64::NEG_INFINITY,
            log_err: f64::NEG_INFINITY,
        };
    }

    let mut scaled = [0.0f64; 15];
    for (s, &l) in scaled.iter_mut().zip(logs.iter()) {
        *s = (l - max_log).exp();
    }

    let fc = scaled[14];
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    for j in 0..7 {
        let pair = scaled[2 * j] + scaled[2 * j + 1];
        resk += WGK[j] * pair;
        if j % 2 == 1 {
            // XGK[1], XGK[3], XGK[5] are the off-center Gauss points.
            resg += WG[j / 2] * pair;
        }
    }

    let resabs = resk; // integrand is non-negative in the scaled domain
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((scaled[2 * j] - mean).abs() + (scaled[2 * j + 1] - mean).abs());
    }

    let err = rescale_error((resk - resg) * half, resabs * half, resasc * half);
    Panel {
        lo,
        hi,
        log_val: max_log + (resk * half).ln(),
        log_err: if err > 0.0 {
            max_log + err.ln()
        } else {
            f64::NEG_INFINITY
        },
    }
}

/// Integrate `exp(log_f)` over `[a, b]`.
///
/// If `a == 0` the interval is pre-split geometrically toward 0 so endpoint
/// singularities are located cheaply; otherwise a uniform 8-panel split seeds
/// the adaptive refinement.
pub fn integrate_log<F: FnMut(f64) -> f64>(
    mut log_f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> LogQuad {
    debug_assert!(b > a, "empty integration interval");

    let mut heap: BinaryHeap<ByError> = BinaryHeap::new();
    let mut stuck: Vec<Panel> = Vec::new();
    let mut evals = 0usize;

    // Scaled linear accumulators for the stopping rule.
    let mut shift = f64::NEG_INFINITY;
    let mut val_sum = 0.0f64;
    let mut err_sum = 0.0f64;

    let mut absorb = |panel: Panel, shift: &mut f64, val_sum: &mut f64, err_sum: &mut f64| {
        if panel.log_val > *shift {
            let factor = (*shift - panel.log_val).exp();
            *val_sum *= factor;
            *err_sum *= factor;
            *shift = panel.log_val;
        }
        if *shift > f64::NEG_INFINITY {
            val_sum.add_assign_exp(panel.log_val - *shift);
            err_sum.add_assign_exp(panel.log_err - *shift);
        }
    };

    let mut seed_bounds: Vec<(f64, f64)> = Vec::new();
    if a == 0.0 {
        let mut hi = b;
        for _ in 0..SEED_LEVELS {
            let lo = 0.5 * hi;
            seed_bounds.push((lo, hi));
            hi = lo;
        }
        seed_bounds.push((0.0, hi));
    } else {
        let step = (b - a) / 8.0;
        for k in 0..8 {
            let lo = a + step * k as f64;
            let hi = if k == 7 { b } else { a + step * (k + 1) as f64 };
            seed_bounds.push((lo, hi));
        }
    }

    for (lo, hi) in seed_bounds {
        let p = eval_panel(&mut log_f, lo, hi);
        evals += 15;
        absorb(p, &mut shift, &mut val_sum, &mut err_sum);
        heap.push(ByError(p));
    }

    let mut converged = val_sum == 0.0 || err_sum <= opts.rel_tol * val_sum;
    while !converged {
        if evals + 30 > opts.max_evaluations {
            break;
        }
        let worst = match heap.pop() {
            Some(p) => p.0,
            None => break,
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Interval narrower than f64 spacing; cannot refine further.
            stuck.push(worst);
            if heap.is_empty() {
                break;
            }
            continue;
        }
        // Remove the parent's contribution from the running sums.
        if shift > f64::NEG_INFINITY {
            val_sum -= (worst.log_val - shift).exp();
            err_sum -= (worst.log_err - shift).exp();
            val_sum = val_sum.max(0.0);
            err_sum = err_sum.max(0.0);
        }
        let left = eval_panel(&mut log_f, worst.lo, mid);
        let right = eval_panel(&mut log_f, mid, worst.hi);
        evals += 30;
        absorb(left, &mut shift, &mut val_sum, &mut err_sum);
        absorb(right, &mut shift, &mut val_sum, &mut err_sum);
        heap.push(ByError(left));
        heap.push(ByError(right));
        converged = val_sum == 0.0 || err_sum <= opts.rel_tol * val_sum;
    }

    // Exact final pass over the surviving panels; the running sums above only
    // steer refinement.
    let mut log_value = f64::NEG_INFINITY;
    let mut log_error = f64::NEG_INFINITY;
    for ByError(p) in heap.into_iter() {
        log_value = log_add_exp(log_value, p.log_val);
        log_error = log_add_exp(log_error, p.log_err);
    }
    for p in stuck {
        log_value = log_add_exp(log_value, p.log_val);
        log_error = log_add_exp(log_error, p.log_err);
    }

    let rel_error = if log_value == f64::NEG_INFINITY {
        0.0
    } else {
        (log_error - log_value).exp()
    };
    LogQuad {
        log_value,
        rel_error,
        evaluations: evals,
        converged: converged || rel_error <= opts.rel_tol,
    }
}

trait AddAssignExp {
    fn add_assign_exp(&mut self, log_term: f64);
}

impl AddAssignExp for f64 {
    fn add_assign_exp(&mut self, log_term: f64) {
        if log_term > f64::NEG_INFINITY {
            *self += log_term.exp();
        }
    }
}
