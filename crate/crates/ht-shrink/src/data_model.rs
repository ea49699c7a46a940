//! Datasets, synthetic data generation, OLS, and orthogonalization.

use std::io::{BufRead, Write};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{HtError, Result};

/// A fixed-design regression problem, optionally annotated with the truth
/// that generated it.
#[derive(Debug, Clone)]
pub struct RegressionDataset {
    /// n × p design matrix.
    pub x: DMatrix<f64>,
    /// Response vector of length n.
    pub y: DVector<f64>,
    /// Generating coefficients, when known.
    pub beta_true: Option<DVector<f64>>,
    /// Generating noise standard deviation, when known.
    pub sigma_true: Option<f64>,
}

impl RegressionDataset {
    /// Construct and check the dimension invariants (n ≥ p ≥ 1, |Y| = n).
    pub fn new(
        x: DMatrix<f64>,
        y: DVector<f64>,
        beta_true: Option<DVector<f64>>,
        sigma_true: Option<f64>,
    ) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(HtError::invalid(format!(
                "row count of X ({}) must equal length of Y ({})",
                x.nrows(),
                y.len()
            )));
        }
        if x.ncols() < 1 || x.nrows() < x.ncols() {
            return Err(HtError::invalid(format!(
                "need n >= p >= 1, got n={}, p={}",
                x.nrows(),
                x.ncols()
            )));
        }
        if let Some(ref b) = beta_true {
            if b.len() != x.ncols() {
                return Err(HtError::invalid(format!(
                    "beta_true length {} does not match p={}",
                    b.len(),
                    x.ncols()
                )));
            }
        }
        Ok(RegressionDataset {
            x,
            y,
            beta_true,
            sigma_true,
        })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// Serialize as CSV with header `y,x1,...,xp` and 17-significant-digit
    /// floats (enough to round-trip f64 exactly).
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "y")?;
        for j in 1..=self.p() {
            write!(out, ",x{j}")?;
        }
        writeln!(out)?;
        for i in 0..self.n() {
            write!(out, "{:.16e}", self.y[i])?;
            for j in 0..self.p() {
                write!(out, ",{:.16e}", self.x[(i, j)])?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// Parse the CSV format produced by [`RegressionDataset::write_csv`].
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| HtError::invalid("empty dataset file"))??;
        let cols: Vec<&str> = header.trim().split(',').collect();
        if cols.first() != Some(&"y") || cols.len() < 2 {
            return Err(HtError::invalid(
                "dataset header must be y,x1,...,xp".to_string(),
            ));
        }
        let p = cols.len() - 1;
        let mut ys = Vec::new();
        let mut xs: Vec<f64> = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != p + 1 {
                return Err(HtError::invalid(format!(
                    "row has {} fields, expected {}",
                    fields.len(),
                    p + 1
                )));
            }
            let parse = |s: &str| -> Result<f64> {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| HtError::invalid(format!("bad float `{s}` in dataset")))
            };
            ys.push(parse(fields[0])?);
            for f in &fields[1..] {
                xs.push(parse(f)?);
            }
        }
        let n = ys.len();
        let x = DMatrix::from_row_slice(n, p, &xs);
        RegressionDataset::new(x, DVector::from_vec(ys), None, None)
    }
}

/// Shape of a correlated Gaussian design: rows are i.i.d. N(0, Σ) with unit
/// variances and a constant pairwise correlation.
#[derive(Debug, Clone, Copy)]
pub struct GaussianDesignSpec {
    pub n: usize,
    pub p: usize,
    /// Common off-diagonal correlation, in [0, 1) so Σ is positive definite.
    pub pairwise_corr: f64,
}

impl GaussianDesignSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(HtError::invalid("n and p must be positive"));
        }
        if !(0.0..1.0).contains(&self.pairwise_corr) {
            return Err(HtError::invalid(format!(
                "pairwise_corr must lie in [0, 1), got {}",
                self.pairwise_corr
            )));
        }
        Ok(())
    }
}

/// Ordinary least squares output.
#[derive(Debug, Clone)]
pub struct OlsFit {
    pub beta_hat: DVector<f64>,
    /// Residual variance ‖Y - Xβ̂‖²/(n - p).
    pub sigma2_hat: f64,
    /// Whether XᵀX = nI holds within 1e-8·n in max norm.
    pub is_orthogonal: bool,
}

/// Draw a dataset: rows of X i.i.d. equicorrelated Gaussian, Y = Xβ + σε.
///
/// The equicorrelation structure Σ = (1-ρ)I + ρ11ᵀ is sampled exactly as
/// x = √(1-ρ)·z + √ρ·w·1 with z ~ N(0, I) and scalar w ~ N(0, 1).
pub fn generate_dataset<R: Rng + ?Sized>(
    spec: &GaussianDesignSpec,
    beta: &DVector<f64>,
    sigma: f64,
    rng: &mut R,
) -> Result<RegressionDataset> {
    spec.validate()?;
    if beta.len() != spec.p {
        return Err(HtError::invalid(format!(
            "beta has length {}, spec.p is {}",
            beta.len(),
            spec.p
        )));
    }
    if !(sigma >= 0.0) {
        return Err(HtError::invalid(format!("sigma must be >= 0, got {sigma}")));
    }
    if spec.n < spec.p {
        return Err(HtError::invalid(format!(
            "need n >= p, got n={}, p={}",
            spec.n, spec.p
        )));
    }

    let sq_ind = (1.0 - spec.pairwise_corr).sqrt();
    let sq_common = spec.pairwise_corr.sqrt();
    let mut x = DMatrix::zeros(spec.n, spec.p);
    for i in 0..spec.n {
        for j in 0..spec.p {
            let z: f64 = rng.sample(StandardNormal);
            x[(i, j)] = sq_ind * z;
        }
        let w: f64 = rng.sample(StandardNormal);
        for j in 0..spec.p {
            x[(i, j)] += sq_common * w;
        }
    }

    let mut y = &x * beta;
    for i in 0..spec.n {
        let eps: f64 = rng.sample(StandardNormal);
        y[i] += sigma * eps;
    }

    RegressionDataset::new(x, y, Some(beta.clone()), Some(sigma))
}

/// Replace the design with an orthogonal one satisfying XᵀX = nI (modified
/// Gram-Schmidt, two passes, then column rescaling by √n). Y is untouched,
/// so `beta_true` no longer refers to the new design and is cleared.
pub fn orthogonalize(dataset: &RegressionDataset) -> Result<RegressionDataset> {
    let n = dataset.n();
    let p = dataset.p();
    if n < p {
        return Err(HtError::Singular(format!(
            "cannot orthogonalize with n={n} < p={p}"
        )));
    }
    let mut q = dataset.x.clone();
    for j in 0..p {
        let orig_norm = q.column(j).norm();
        // two MGS passes control the loss of orthogonality for
        // ill-conditioned inputs
        for _ in 0..2 {
            for i in 0..j {
                let r = q.column(i).dot(&q.column(j));
                let qi = q.column(i).clone_owned();
                q.column_mut(j).axpy(-r, &qi, 1.0);
            }
        }
        let norm = q.column(j).norm();
        if !(norm > 1e-10 * orig_norm.max(f64::MIN_POSITIVE)) {
            return Err(HtError::Singular(format!(
                "column {} is linearly dependent on earlier columns",
                j + 1
            )));
        }
        let scale = (n as f64).sqrt() / norm;
        q.column_mut(j).scale_mut(scale);
    }
    RegressionDataset::new(q, dataset.y.clone(), None, dataset.sigma_true)
}

/// OLS fit: β̂ = (XᵀX)⁻¹XᵀY with one step of iterative refinement,
/// σ̂² = ‖Y - Xβ̂‖²/(n-p).
pub fn ols_fit(dataset: &RegressionDataset) -> Result<OlsFit> {
    let n = dataset.n();
    let p = dataset.p();
    if n <= p {
        return Err(HtError::invalid(format!(
            "OLS requires n > p, got n={n}, p={p}"
        )));
    }
    let xtx = dataset.x.tr_mul(&dataset.x);
    let xty = dataset.x.tr_mul(&dataset.y);
    let chol = nalgebra::Cholesky::new(xtx.clone())
        .ok_or_else(|| HtError::Singular("XᵀX is not positive definite".to_string()))?;
    let mut beta = chol.solve(&xty);
    let correction = chol.solve(&(&xty - &xtx * &beta));
    beta += correction;

    let resid = &dataset.y - &dataset.x * &beta;
    let sigma2_hat = resid.norm_squared() / (n - p) as f64;
    Ok(OlsFit {
        beta_hat: beta,
        sigma2_hat,
        is_orthogonal: is_orthogonal_design(&xtx, n),
    })
}

fn is_orthogonal_design(xtx: &DMatrix<f64>, n: usize) -> bool {
    let nf = n as f64;
    let p = xtx.ncols();
    let mut max_dev = 0.0f64;
    for i in 0..p {
        for j in 0..p {
            let target = if i == j { nf } else { 0.0 };
            max_dev = max_dev.max((xtx[(i, j)] - target).abs());
        }
    }
    max_dev <= 1e-8 * nf
}

/// Generate an exactly-orthogonal design (i.i.d. Gaussian columns pushed
/// through [`orthogonalize`]) and a fresh response Y = Xβ + σε for it.
/// This is the data generator for the asymptotic theory studies.
pub fn generate_orthogonal_dataset<R: Rng + ?Sized>(
    n: usize,
    beta: &DVector<f64>,
    sigma: f64,
    rng: &mut R,
) -> Result<RegressionDataset> {
    let p = beta.len();
    let spec = GaussianDesignSpec {
        n,
        p,
        pairwise_corr: 0.0,
    };
    let raw = generate_dataset(&spec, beta, 1.0, rng)?;
    let orth = orthogonalize(&raw)?;
    let mut y = &orth.x * beta;
    for i in 0..n {
        let eps: f64 = rng.sample(StandardNormal);
        y[i] += sigma * eps;
    }
    RegressionDataset::new(orth.x, y, Some(beta.clone()), Some(sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn example1_beta() -> DVector<f64> {
        DVector::from_vec(vec![3.0, 1.5, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0])
    }

    #[test]
    fn generate_dimension_mismatch_errors() {
        let spec = GaussianDesignSpec {
            n: 20,
            p: 8,
            pairwise_corr: 0.5,
        };
        let beta = DVector::from_vec(vec![1.0; 7]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            generate_dataset(&spec, &beta, 1.0, &mut rng),
            Err(HtError::InvalidArgument(_))
        ));
    }

    #[test]
    fn generate_is_bit_reproducible() {
        let spec = GaussianDesignSpec {
            n: 20,
            p: 8,
            pairwise_corr: 0.5,
        };
        let beta = example1_beta();
        let a = generate_dataset(&spec, &beta, 1.0, &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        let b = generate_dataset(&spec, &beta, 1.0, &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        assert_eq!(a.x, b.x);
        assert_eq!(a.y, b.y);
    }

    #[test]
    fn zero_noise_gives_exact_response() {
        let spec = GaussianDesignSpec {
            n: 50,
            p: 8,
            pairwise_corr: 0.5,
        };
        let beta = DVector::from_vec(vec![3.0, 1.5, 0.1, 0.01, 2.0, 0.0, 0.0, 0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ds = generate_dataset(&spec, &beta, 0.0, &mut rng).unwrap();
        let fitted = &ds.x * &beta;
        assert_eq!(ds.y, fitted);
    }

    #[test]
    fn empirical_correlation_matches_spec() {
        let spec = GaussianDesignSpec {
            n: 100_000,
            p: 4,
            pairwise_corr: 0.5,
        };
        let beta = DVector::zeros(4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ds = generate_dataset(&spec, &beta, 1.0, &mut rng).unwrap();
        let n = spec.n as f64;
        for a in 0..4 {
            for b in (a + 1)..4 {
                let ca = ds.x.column(a);
                let cb = ds.x.column(b);
                let ma = ca.sum() / n;
                let mb = cb.sum() / n;
                let mut cov = 0.0;
                let mut va = 0.0;
                let mut vb = 0.0;
                for i in 0..spec.n {
                    cov += (ca[i] - ma) * (cb[i] - mb);
                    va += (ca[i] - ma).powi(2);
                    vb += (cb[i] - mb).powi(2);
                }
                let corr = cov / (va.sqrt() * vb.sqrt());
                assert!(
                    (corr - 0.5).abs() < 0.01,
                    "corr({a},{b}) = {corr}"
                );
            }
        }
    }

    #[test]
    fn orthogonalize_produces_orthogonal_design() {
        let spec = GaussianDesignSpec {
            n: 50,
            p: 8,
            pairwise_corr: 0.5,
        };
        let beta = example1_beta();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let ds = generate_dataset(&spec, &beta, 1.0, &mut rng).unwrap();
        let orth = orthogonalize(&ds).unwrap();
        let xtx = orth.x.tr_mul(&orth.x);
        let n = 50.0;
        for i in 0..8 {
            for j in 0..8 {
                let target = if i == j { n } else { 0.0 };
                assert!(
                    (xtx[(i, j)] - target).abs() < 1e-8 * n,
                    "XtX[{i},{j}] = {}",
                    xtx[(i, j)]
                );
            }
        }
        assert!(orth.beta_true.is_none());
        assert_eq!(orth.y, ds.y);
    }

    #[test]
    fn orthogonalize_is_idempotent() {
        let beta = example1_beta();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let ds = generate_orthogonal_dataset(60, &beta, 1.0, &mut rng).unwrap();
        let again = orthogonalize(&ds).unwrap();
        let diff = (&again.x - &ds.x).abs().max();
        assert!(diff < 1e-12, "max change {diff}");
    }

    #[test]
    fn orthogonalize_rejects_rank_deficiency() {
        // n < p forces rank deficiency
        let x = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0]);
        let y = DVector::from_vec(vec![1.0, 2.0]);
        let ds = RegressionDataset {
            x,
            y,
            beta_true: None,
            sigma_true: None,
        };
        assert!(matches!(orthogonalize(&ds), Err(HtError::Singular(_))));

        // duplicated column
        let x = DMatrix::from_fn(10, 3, |i, j| if j == 2 { i as f64 } else { (i * (j + 1)) as f64 });
        let mut x = x;
        let c0 = x.column(0).clone_owned();
        x.set_column(1, &c0);
        let ds = RegressionDataset {
            x,
            y: DVector::zeros(10),
            beta_true: None,
            sigma_true: None,
        };
        assert!(matches!(orthogonalize(&ds), Err(HtError::Singular(_))));
    }

    #[test]
    fn ols_exact_on_noiseless_orthogonal_design() {
        let beta = example1_beta();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let ds = generate_orthogonal_dataset(40, &beta, 0.0, &mut rng).unwrap();
        let fit = ols_fit(&ds).unwrap();
        assert!(fit.is_orthogonal);
        for i in 0..8 {
            assert!((fit.beta_hat[i] - beta[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn ols_matches_normal_equations_on_orthogonal_design() {
        let beta = example1_beta();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let ds = generate_orthogonal_dataset(40, &beta, 1.0, &mut rng).unwrap();
        let fit = ols_fit(&ds).unwrap();
        let xty = ds.x.tr_mul(&ds.y);
        for i in 0..8 {
            assert!((fit.beta_hat[i] - xty[i] / 40.0).abs() < 1e-10);
        }
        // normal-equation residual bound
        let grad = ds.x.tr_mul(&(&ds.y - &ds.x * &fit.beta_hat));
        assert!(grad.norm() <= 1e-10 * xty.norm());
    }

    #[test]
    fn ols_is_unbiased_over_replications() {
        let spec = GaussianDesignSpec {
            n: 80,
            p: 8,
            pairwise_corr: 0.5,
        };
        let beta = example1_beta();
        let reps = 500usize;
        let mut sums = DVector::zeros(8);
        let mut sumsq = DVector::zeros(8);
        for r in 0..reps {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + r as u64);
            let ds = generate_dataset(&spec, &beta, 1.0, &mut rng).unwrap();
            let fit = ols_fit(&ds).unwrap();
            for i in 0..8 {
                sums[i] += fit.beta_hat[i];
                sumsq[i] += fit.beta_hat[i] * fit.beta_hat[i];
            }
        }
        for i in 0..8 {
            let mean = sums[i] / reps as f64;
            let var = sumsq[i] / reps as f64 - mean * mean;
            let se = (var / reps as f64).sqrt();
            assert!(
                (mean - beta[i]).abs() < 3.0 * se,
                "coordinate {i}: mean {mean} vs {}",
                beta[i]
            );
        }
    }

    #[test]
    fn ols_error_paths() {
        let x = DMatrix::from_element(5, 5, 1.0);
        let ds = RegressionDataset {
            x,
            y: DVector::zeros(5),
            beta_true: None,
            sigma_true: None,
        };
        assert!(matches!(ols_fit(&ds), Err(HtError::InvalidArgument(_))));

        let mut x = DMatrix::from_fn(8, 3, |i, j| ((i + 1) * (j + 2)) as f64);
        let c0 = x.column(0).clone_owned();
        x.set_column(2, &c0);
        let ds = RegressionDataset {
            x,
            y: DVector::zeros(8),
            beta_true: None,
            sigma_true: None,
        };
        assert!(matches!(ols_fit(&ds), Err(HtError::Singular(_))));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let spec = GaussianDesignSpec {
            n: 12,
            p: 3,
            pairwise_corr: 0.3,
        };
        let beta = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ds = generate_dataset(&spec, &beta, 2.0, &mut rng).unwrap();
        let mut buf = Vec::new();
        ds.write_csv(&mut buf).unwrap();
        let parsed = RegressionDataset::read_csv(std::io::BufReader::new(&buf[..])).unwrap();
        assert_eq!(parsed.x, ds.x);
        assert_eq!(parsed.y, ds.y);
    }
}
