//! Catalog of local-parameter priors π(γ) for the scale-mixture hierarchy
//! β | γ ~ N(0, σ²γτ), γ ~ π(γ).
//!
//! Every variant factors as tail · L(γ) with L slowly varying: polynomial
//! tails are γ^{-a-1}L(γ), exponential tails are e^{-bγ}L(γ). The log density
//! is assembled from the tail factor plus log L so that the decomposition is
//! an identity rather than a numerical coincidence. All evaluators accept the
//! pair (γ, ln γ); quadrature callers supply ln γ directly, which keeps the
//! formulas finite even where γ itself would overflow.

use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma};

use crate::error::{HtError, Result};

/// A Table-1 shrinkage prior for the local parameter γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorSpec {
    /// π(γ) ∝ exp(-bγ); the Bayesian-lasso local prior.
    DoubleExponential { b: f64 },
    /// π(γ) ∝ exp(-b√(1+γ²)).
    HalfHyperbolic { b: f64 },
    /// π(γ) ∝ e^{bγ}(1+e^{bγ})^{-2}.
    PositiveLogistic { b: f64 },
    /// π(γ) ∝ γ^{-a-1}e^{-a/γ}; inverse-gamma(a, a).
    StudentT { a: f64 },
    /// π(γ) ∝ γ^{-1/2}(1+γ)^{-1}.
    Horseshoe,
    /// π(γ) ∝ γ^{-1/2}(γ-1)^{-1}log γ, extended continuously at γ = 1.
    HorseshoePlus,
    /// π(γ) ∝ (1+γ)^{-1-a}; normal-exponential-gamma.
    Neg { a: f64 },
    /// π(γ) ∝ γ^{u-1}(1+γ)^{-a-u}; three-parameter beta-normal.
    Tpbn { u: f64, a: f64 },
    /// π(γ) ∝ γ^{u-1}(1+γ)^{-(a+u)}exp{-s/(1+γ)}{φ²+(1-φ²)/(1+γ)}^{-1}.
    Hib { u: f64, a: f64, s: f64, phi: f64 },
}

/// Tail classification of a prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailClass {
    /// γ^{-a-1}L(γ) with exponent a.
    Polynomial(f64),
    /// e^{-bγ}L(γ) with rate b.
    Exponential(f64),
}

impl TailClass {
    /// The positive exponent a (polynomial) or rate b (exponential).
    pub fn exponent_or_rate(&self) -> f64 {
        match *self {
            TailClass::Polynomial(a) => a,
            TailClass::Exponential(b) => b,
        }
    }
}

impl PriorSpec {
    /// Check hyperparameter positivity.
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            PriorSpec::DoubleExponential { b }
            | PriorSpec::HalfHyperbolic { b }
            | PriorSpec::PositiveLogistic { b } => b > 0.0,
            PriorSpec::StudentT { a } | PriorSpec::Neg { a } => a > 0.0,
            PriorSpec::Horseshoe | PriorSpec::HorseshoePlus => true,
            PriorSpec::Tpbn { u, a } => u > 0.0 && a > 0.0,
            PriorSpec::Hib { u, a, s, phi } => u > 0.0 && a > 0.0 && s >= 0.0 && phi > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(HtError::invalid(format!(
                "nonpositive hyperparameter in {self}"
            )))
        }
    }

    /// Tail class per the prior catalog.
    pub fn tail_class(&self) -> TailClass {
        match *self {
            PriorSpec::DoubleExponential { b }
            | PriorSpec::HalfHyperbolic { b }
            | PriorSpec::PositiveLogistic { b } => TailClass::Exponential(b),
            PriorSpec::StudentT { a } => TailClass::Polynomial(a),
            PriorSpec::Horseshoe | PriorSpec::HorseshoePlus => TailClass::Polynomial(0.5),
            PriorSpec::Neg { a } => TailClass::Polynomial(a),
            PriorSpec::Tpbn { a, .. } => TailClass::Polynomial(a),
            PriorSpec::Hib { a, .. } => TailClass::Polynomial(a),
        }
    }

    /// log of the unnormalized density at γ > 0.
    pub fn log_density_unnormalized(&self, gamma: f64) -> Result<f64> {
        if !(gamma > 0.0) {
            return Err(HtError::domain(format!(
                "prior density requires gamma > 0, got {gamma}"
            )));
        }
        Ok(self.log_density_core(gamma, gamma.ln()))
    }

    /// The slowly varying factor L(γ)/C from the catalog's last column.
    pub fn slowly_varying_l(&self, gamma: f64) -> Result<f64> {
        if !(gamma > 0.0) {
            return Err(HtError::domain(format!(
                "slowly varying factor requires gamma > 0, got {gamma}"
            )));
        }
        Ok(self.log_slowly_varying(gamma, gamma.ln()).exp())
    }

    /// log tail factor: -(a+1)·ln γ for polynomial tails, -b·γ for
    /// exponential tails.
    pub fn log_tail_factor(&self, gamma: f64, ln_gamma: f64) -> f64 {
        match self.tail_class() {
            TailClass::Polynomial(a) => -(a + 1.0) * ln_gamma,
            TailClass::Exponential(b) => -b * gamma,
        }
    }

    /// Density evaluation from ln γ, tolerant of γ over/underflow. Used by
    /// the quadrature engine, where γ = (1-s)/(nτs) can exceed f64 range.
    pub(crate) fn log_density_ln_gamma(&self, ln_gamma: f64) -> f64 {
        self.log_density_core(ln_gamma.exp(), ln_gamma)
    }

    fn log_density_core(&self, gamma: f64, ln_gamma: f64) -> f64 {
        self.log_tail_factor(gamma, ln_gamma) + self.log_slowly_varying(gamma, ln_gamma)
    }

    fn log_slowly_varying(&self, gamma: f64, ln_gamma: f64) -> f64 {
        // ln L for ratio-of-(1+γ) factors uses ln(γ/(1+γ)) = -ln1p(1/γ),
        // stable for the whole range of ln γ.
        let neg_ln1p_inv = || -(-ln_gamma).exp().ln_1p();
        match *self {
            PriorSpec::DoubleExponential { .. } => 0.0,
            // bγ - b√(1+γ²) = -b/(γ + √(1+γ²))
            PriorSpec::HalfHyperbolic { b } => -b / (gamma + gamma.hypot(1.0)),
            // 2bγ - 2 ln(1+e^{bγ}) = -2 ln(1+e^{-bγ})
            PriorSpec::PositiveLogistic { b } => -2.0 * (-b * gamma).exp().ln_1p(),
            PriorSpec::StudentT { a } => -a * (-ln_gamma).exp(),
            PriorSpec::Horseshoe => neg_ln1p_inv(),
            PriorSpec::HorseshoePlus => {
                // L = γ·log(γ)/(γ-1); the middle factor has a removable
                // singularity at γ = 1 with limit 1.
                ln_gamma + ln_log_ratio(gamma, ln_gamma)
            }
            PriorSpec::Neg { a } => (a + 1.0) * neg_ln1p_inv(),
            PriorSpec::Tpbn { u, a } => (a + u) * neg_ln1p_inv(),
            PriorSpec::Hib { u, a, s, phi } => {
                let r = if ln_gamma > 700.0 {
                    (-ln_gamma).exp()
                } else {
                    1.0 / (1.0 + gamma)
                };
                (a + u) * neg_ln1p_inv() - s * r - (phi * phi + (1.0 - phi * phi) * r).ln()
            }
        }
    }

    /// Draw one γ from the normalized prior where a simple representation
    /// exists; the remaining variants report an unsupported-operation error.
    pub fn sample_gamma<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        self.validate()?;
        match *self {
            PriorSpec::DoubleExponential { b } => {
                let exp = Exp::new(b).expect("validated rate");
                Ok(exp.sample(rng))
            }
            PriorSpec::StudentT { a } => {
                // inverse-gamma(a, a): reciprocal of Gamma(shape a, rate a)
                let g = Gamma::new(a, 1.0 / a).expect("validated shape");
                Ok(1.0 / g.sample(rng))
            }
            PriorSpec::Horseshoe => {
                // square of a standard half-Cauchy draw
                let u: f64 = rng.gen();
                let t = (std::f64::consts::FRAC_PI_2 * u).tan();
                Ok(t * t)
            }
            PriorSpec::Tpbn { u, a } => Ok(sample_tpbn(u, a, rng)),
            PriorSpec::Neg { a } => Ok(sample_tpbn(1.0, a, rng)),
            other => Err(HtError::Unsupported(format!(
                "sample_gamma not available for {other}"
            ))),
        }
    }

    /// Parse an external tag like `de`, `tpbn:u=0.1,a=0.5`, `student-t:a=1`.
    pub fn parse(tag: &str) -> Result<PriorSpec> {
        let (name, params) = match tag.split_once(':') {
            Some((n, p)) => (n.trim(), Some(p)),
            None => (tag.trim(), None),
        };
        let mut kv = std::collections::BTreeMap::new();
        if let Some(p) = params {
            for item in p.split(',') {
                let item = item.trim();
                if item.is_empty() {
                    continue;
                }
                let (k, v) = item.split_once('=').ok_or_else(|| {
                    HtError::Config(format!("expected key=value in prior tag, got `{item}`"))
                })?;
                let value: f64 = v.trim().parse().map_err(|_| {
                    HtError::Config(format!("bad numeric value `{v}` in prior tag `{tag}`"))
                })?;
                kv.insert(k.trim().to_string(), value);
            }
        }
        let get = |key: &str, default: f64| kv.get(key).copied().unwrap_or(default);
        let spec = match name {
            "de" => PriorSpec::DoubleExponential { b: get("b", 1.0) },
            "half-hyperbolic" => PriorSpec::HalfHyperbolic { b: get("b", 1.0) },
            "pos-logistic" => PriorSpec::PositiveLogistic { b: get("b", 1.0) },
            "student-t" => PriorSpec::StudentT { a: get("a", 1.0) },
            "horseshoe" => PriorSpec::Horseshoe,
            "horseshoe-plus" => PriorSpec::HorseshoePlus,
            "neg" => PriorSpec::Neg { a: get("a", 0.5) },
            "tpbn" => PriorSpec::Tpbn {
                u: get("u", 0.5),
                a: get("a", 0.5),
            },
            "hib" => PriorSpec::Hib {
                u: get("u", 0.5),
                a: get("a", 0.5),
                s: get("s", 0.0),
                phi: get("phi", 1.0),
            },
            other => {
                return Err(HtError::Config(format!("unknown prior tag `{other}`")));
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// The §4 TPBN presets.
impl PriorSpec {
    /// TPBN(0.5, 0.5): the horseshoe.
    pub fn tpbn_hs() -> PriorSpec {
        PriorSpec::Tpbn { u: 0.5, a: 0.5 }
    }

    /// TPBN(0.1, 0.5): more mass at zero than the horseshoe.
    pub fn tpbn_01() -> PriorSpec {
        PriorSpec::Tpbn { u: 0.1, a: 0.5 }
    }

    /// TPBN(1, 0.5): the normal-exponential-gamma prior.
    pub fn tpbn_neg() -> PriorSpec {
        PriorSpec::Tpbn { u: 1.0, a: 0.5 }
    }
}

impl std::fmt::Display for PriorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            PriorSpec::DoubleExponential { b } => write!(f, "de:b={b}"),
            PriorSpec::HalfHyperbolic { b } => write!(f, "half-hyperbolic:b={b}"),
            PriorSpec::PositiveLogistic { b } => write!(f, "pos-logistic:b={b}"),
            PriorSpec::StudentT { a } => write!(f, "student-t:a={a}"),
            PriorSpec::Horseshoe => write!(f, "horseshoe"),
            PriorSpec::HorseshoePlus => write!(f, "horseshoe-plus"),
            PriorSpec::Neg { a } => write!(f, "neg:a={a}"),
            PriorSpec::Tpbn { u, a } => write!(f, "tpbn:u={u},a={a}"),
            PriorSpec::Hib { u, a, s, phi } => write!(f, "hib:u={u},a={a},s={s},phi={phi}"),
        }
    }
}

/// γ | λ ~ Gamma(shape u, rate λ) with λ ~ Gamma(shape a, rate 1); the
/// marginal is the TPBN density γ^{u-1}(1+γ)^{-a-u} up to constants.
fn sample_tpbn<R: Rng + ?Sized>(u: f64, a: f64, rng: &mut R) -> f64 {
    let lambda = Gamma::new(a, 1.0).expect("validated shape").sample(rng);
    Gamma::new(u, 1.0 / lambda)
        .expect("validated shape")
        .sample(rng)
}

/// ln of log(γ)/(γ-1), the removable-singularity factor of the
/// horseshoe-plus density. Positive for all γ > 0.
fn ln_log_ratio(gamma: f64, ln_gamma: f64) -> f64 {
    let x = gamma - 1.0;
    if x.abs() < 1e-5 {
        // log(1+x)/x = 1 - x/2 + x²/3 - x³/4 + O(x⁴)
        return (1.0 - x / 2.0 + x * x / 3.0 - x * x * x / 4.0).ln();
    }
    if ln_gamma > 700.0 {
        // γ-1 ≈ γ beyond f64 overflow territory
        return ln_gamma.ln() - ln_gamma;
    }
    if gamma < 1.0 {
        ((-ln_gamma) / (1.0 - gamma)).ln()
    } else {
        (ln_gamma / x).ln()
    }
}
