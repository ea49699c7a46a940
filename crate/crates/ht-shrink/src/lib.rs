//! Half-thresholding (HT) variable selection for linear regression under
//! global-local shrinkage priors.
//!
//! The crate provides:
//!
//! - [`data_model`]: synthetic correlated-Gaussian regression datasets, OLS,
//!   and design orthogonalization;
//! - [`priors`]: the catalog of local-parameter priors π(γ) (double
//!   exponential, horseshoe, TPBN, ...), their tail classes and slowly
//!   varying factors;
//! - [`shrinkage`]: exact posterior shrinkage-factor computations for
//!   orthogonal designs by adaptive log-domain quadrature, a closed form for
//!   the double-exponential prior, and a Monte-Carlo oracle;
//! - [`gibbs`]: a Gibbs sampler for general designs with GIG local-variance
//!   updates, plus chain diagnostics (ESS, MCSE);
//! - [`selection`]: the HT rule (select i iff |posterior mean / OLS| > 1/2)
//!   and evaluation metrics (misclassification, relative prediction error,
//!   model size);
//! - [`baselines`]: lasso and adaptive-lasso comparators via coordinate
//!   descent with cross-validated penalties;
//! - [`harness`]: reproducible simulation studies and asymptotic
//!   verification studies, with CSV output.

pub mod baselines;
pub mod data_model;
pub mod error;
pub mod gibbs;
pub mod harness;
pub mod priors;
pub mod quad;
pub mod selection;
pub mod shrinkage;
pub mod special;

mod gig;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{HtError, Result};
