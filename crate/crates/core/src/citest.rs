//! Empirical covariance and the Fisher-Z partial-correlation test.

use nalgebra::DMatrix;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::gaussian::{partial_correlation, CiTest, LabeledCovariance, DIVERGENT_MARGIN};

pub const DEFAULT_ALPHA: f64 = 0.05;

/// Centered cross-product matrix `Σᵢ (xᵢ − x̄)(xᵢ − x̄)ᵀ`, summed in row order.
fn scatter(data: &Dataset) -> DMatrix<f64> {
    let rows = data.rows();
    let (n, d) = (rows.nrows(), rows.ncols());
    let means: Vec<f64> = (0..d)
        .map(|j| rows.column(j).iter().sum::<f64>() / n as f64)
        .collect();
    let mut s = DMatrix::<f64>::zeros(d, d);
    for i in 0..n {
        for a in 0..d {
            let da = rows[(i, a)] - means[a];
            for b in a..d {
                s[(a, b)] += da * (rows[(i, b)] - means[b]);
            }
        }
    }
    crate::linalg::symmetrize_upper(&mut s);
    s
}

/// Unbiased (`1/(n−1)`) sample covariance of the mean-centered data.
pub fn empirical_covariance(data: &Dataset) -> Result<LabeledCovariance> {
    let n = data.n_rows();
    if n < 2 {
        return Err(Error::TooFewRows { needed: 2, got: n });
    }
    let s = scatter(data) / (n - 1) as f64;
    LabeledCovariance::new(data.columns().to_vec(), s)
}

/// Maximum-likelihood (`1/n`) covariance of the mean-centered data.
pub fn mle_covariance(data: &Dataset) -> Result<LabeledCovariance> {
    let n = data.n_rows();
    if n < 2 {
        return Err(Error::TooFewRows { needed: 2, got: n });
    }
    let s = scatter(data) / n as f64;
    LabeledCovariance::new(data.columns().to_vec(), s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestOutcome {
    pub test: CiTest,
    /// Sample partial correlation.
    pub r: f64,
    pub z_stat: f64,
    /// `n − |cond| − 3`.
    pub n_effective: usize,
    pub reject: bool,
    pub alpha_level: f64,
}

/// Two-sided standard-normal critical value for `alpha_level`.
pub fn critical_value(alpha_level: f64) -> Result<f64> {
    if !(alpha_level > 0.0 && alpha_level < 1.0) {
        return Err(Error::InvalidInput(format!(
            "alpha level {alpha_level} must lie in (0, 1)"
        )));
    }
    let normal = Normal::standard();
    Ok(normal.inverse_cdf(1.0 - alpha_level / 2.0))
}

/// `atanh(r) · sqrt(n_effective)`.
pub fn fisher_z_statistic(r: f64, n_effective: usize) -> f64 {
    r.atanh() * (n_effective as f64).sqrt()
}

/// Fisher-Z test of `test` from a covariance estimated on `n` rows.
pub fn fisher_z_from_covariance(
    cov: &LabeledCovariance,
    n: usize,
    test: &CiTest,
    alpha_level: f64,
) -> Result<TestOutcome> {
    let effective = n as i64 - test.cond.len() as i64 - 3;
    if effective < 1 {
        return Err(Error::InsufficientSamples {
            test: test.to_string(),
            effective,
        });
    }
    let critical = critical_value(alpha_level)?;
    let r = partial_correlation(cov, test)?;
    if r.abs() > 1.0 - DIVERGENT_MARGIN {
        return Err(Error::DegenerateVariance(test.to_string()));
    }
    let n_effective = effective as usize;
    let z_stat = fisher_z_statistic(r, n_effective);
    Ok(TestOutcome {
        test: test.clone(),
        r,
        z_stat,
        n_effective,
        reject: z_stat.abs() > critical,
        alpha_level,
    })
}

/// Fisher-Z partial-correlation test on raw data.
pub fn fisher_z_test(data: &Dataset, test: &CiTest, alpha_level: f64) -> Result<TestOutcome> {
    let effective = data.n_rows() as i64 - test.cond.len() as i64 - 3;
    if effective < 1 {
        return Err(Error::InsufficientSamples {
            test: test.to_string(),
            effective,
        });
    }
    let cov = empirical_covariance(data)?;
    fisher_z_from_covariance(&cov, data.n_rows(), test, alpha_level)
}
