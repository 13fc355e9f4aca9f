//! Zero-mean Gaussian covariance model and its information-theoretic primitives.
//!
//! Every distribution in this crate is a zero-mean multivariate Gaussian, fully
//! described by a [`LabeledCovariance`]. Information quantities are in nats.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg;

/// Relative asymmetry tolerated on construction.
const SYMMETRY_TOL: f64 = 1e-12;
/// Eigenvalues down to `-PSD_TOL * max_eigenvalue` are accepted as roundoff.
const PSD_TOL: f64 = 1e-10;
/// Conditional variances at or below this fraction of the marginal variance are degenerate.
const DEGENERATE_VARIANCE: f64 = 1e-14;
/// Below this |partial correlation| the conditional mutual information is reported as exactly zero.
pub const ZERO_CORRELATION: f64 = 1e-8;
/// At or above `1 - DIVERGENT_MARGIN` the mutual information is treated as infinite.
pub const DIVERGENT_MARGIN: f64 = 1e-12;

/// A covariance matrix whose rows and columns are named variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledCovariance {
    labels: Vec<String>,
    matrix: DMatrix<f64>,
}

impl LabeledCovariance {
    /// Validates symmetry, positive semidefiniteness and label uniqueness.
    pub fn new(labels: Vec<String>, matrix: DMatrix<f64>) -> Result<Self> {
        let d = labels.len();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for a {}x{} matrix",
                d,
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidCovariance(format!("duplicate label `{l}`")));
            }
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCovariance("non-finite entry".into()));
        }
        let scale = matrix.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..d {
            for j in 0..i {
                if (matrix[(i, j)] - matrix[(j, i)]).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::InvalidCovariance(format!(
                        "asymmetric at ({}, {})",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let (min, max) = linalg::eigen_range(&matrix);
        if min < -PSD_TOL * max.max(0.0) {
            return Err(Error::InvalidCovariance(format!(
                "not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        Ok(Self { labels, matrix })
    }

    /// Convenience constructor from string slices and a row-major buffer.
    pub fn from_rows(labels: &[&str], rows: &[f64]) -> Result<Self> {
        let d = labels.len();
        if rows.len() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {d} labels",
                rows.len()
            )));
        }
        Self::new(
            labels.iter().map(|s| s.to_string()).collect(),
            DMatrix::from_row_slice(d, d, rows),
        )
    }

    /// Identity covariance over the given labels.
    pub fn identity(labels: &[&str]) -> Self {
        let d = labels.len();
        Self {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            matrix: DMatrix::identity(d, d),
        }
    }

    pub(crate) fn from_parts_unchecked(labels: Vec<String>, matrix: DMatrix<f64>) -> Self {
        Self { labels, matrix }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn indices<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.index_of(n.as_ref())).collect()
    }

    /// Entry by label pair.
    pub fn get(&self, a: &str, b: &str) -> Result<f64> {
        Ok(self.matrix[(self.index_of(a)?, self.index_of(b)?)])
    }

    /// Correlation matrix with the same labels.
    pub fn to_correlation(&self) -> Result<Self> {
        let d = self.dim();
        for i in 0..d {
            if self.matrix[(i, i)] <= 0.0 {
                return Err(Error::DegenerateVariance(self.labels[i].clone()));
            }
        }
        let sd: Vec<f64> = (0..d).map(|i| self.matrix[(i, i)].sqrt()).collect();
        let m = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                1.0
            } else {
                self.matrix[(i, j)] / (sd[i] * sd[j])
            }
        });
        Ok(Self::from_parts_unchecked(self.labels.clone(), m))
    }

    /// Covariance of a subset of the variables, in the order given.
    pub fn marginal<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        let idx = self.indices(names)?;
        Ok(Self::from_parts_unchecked(
            idx.iter().map(|&i| self.labels[i].clone()).collect(),
            linalg::select(&self.matrix, &idx, &idx),
        ))
    }
}

/// One conditional-independence hypothesis `a ⊥ b | cond`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CiTest {
    pub a: String,
    pub b: String,
    /// Sorted, duplicate free.
    pub cond: Vec<String>,
}

impl CiTest {
    pub fn new<S: Into<String>>(
        a: impl Into<String>,
        b: impl Into<String>,
        cond: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let a = a.into();
        let b = b.into();
        let mut cond: Vec<String> = cond.into_iter().map(Into::into).collect();
        cond.sort();
        cond.dedup();
        if a == b {
            return Err(Error::InvalidInput(format!("test compares `{a}` with itself")));
        }
        if cond.iter().any(|c| *c == a || *c == b) {
            return Err(Error::InvalidInput(format!(
                "conditioning set of {a},{b} contains a tested variable"
            )));
        }
        if a.is_empty() || b.is_empty() || cond.iter().any(|c| c.is_empty()) {
            return Err(Error::InvalidInput("empty variable name".into()));
        }
        Ok(Self { a, b, cond })
    }

    /// Unconditional test `a ⊥ b`.
    pub fn marginal(a: impl Into<String>, b: impl Into<String>) -> Result<Self> {
        Self::new(a, b, Vec::<String>::new())
    }

    /// Parses the command-line grammar `A,B|C1,C2` (empty conditioning: `A,B|` or `A,B`).
    pub fn parse_cli(s: &str) -> Result<Self> {
        let (pair, cond) = match s.split_once('|') {
            Some((p, c)) => (p, c),
            None => (s, ""),
        };
        let (a, b) = pair
            .split_once(',')
            .ok_or_else(|| Error::InvalidInput(format!("test `{s}` must look like A,B|C1,C2")))?;
        let cond: Vec<&str> = cond
            .split(',')
            .map(str::trim)
            .filter(|c| !c.is_empty())
            .collect();
        Self::new(a.trim(), b.trim(), cond)
    }

    /// Parses the CSV key form `A_B|C1;C2`, splitting the pair at its first underscore.
    pub fn parse_key(s: &str) -> Result<Self> {
        let (pair, cond) = s
            .split_once('|')
            .ok_or_else(|| Error::InvalidInput(format!("test key `{s}` lacks `|`")))?;
        let (a, b) = pair
            .split_once('_')
            .ok_or_else(|| Error::InvalidInput(format!("test key `{s}` lacks `_`")))?;
        let cond: Vec<&str> = cond.split(';').filter(|c| !c.is_empty()).collect();
        Self::new(a, b, cond)
    }

    /// Variables referenced by the test.
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        [self.a.as_str(), self.b.as_str()]
            .into_iter()
            .chain(self.cond.iter().map(String::as_str))
    }
}

/// Serializes as `A_B|C1;C2`.
impl fmt::Display for CiTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}|{}", self.a, self.b, self.cond.join(";"))
    }
}

impl FromStr for CiTest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_cli(s)
    }
}

/// Covariance of `targets` after conditioning on `given`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalCovariance {
    pub targets: Vec<String>,
    pub given: Vec<String>,
    pub matrix: DMatrix<f64>,
}

/// Schur complement `Σ_TT − Σ_TG Σ_GG⁻¹ Σ_GT` over index sets.
pub(crate) fn schur_indices(
    m: &DMatrix<f64>,
    targets: &[usize],
    given: &[usize],
    describe: impl Fn() -> String,
) -> Result<DMatrix<f64>> {
    let tt = linalg::select(m, targets, targets);
    if given.is_empty() {
        return Ok(tt);
    }
    let gg = linalg::select(m, given, given);
    let chol = linalg::spd_factor(&gg, describe)?;
    let gt = linalg::select(m, given, targets);
    let solved = chol.solve(&gt);
    let mut out = tt - gt.transpose() * solved;
    linalg::symmetrize_upper(&mut out);
    Ok(out)
}

/// Conditional covariance of `targets` given `given`.
pub fn schur_conditional<S: AsRef<str>>(
    cov: &LabeledCovariance,
    targets: &[S],
    given: &[S],
) -> Result<ConditionalCovariance> {
    let t = cov.indices(targets)?;
    let g = cov.indices(given)?;
    if t.iter().any(|i| g.contains(i)) {
        return Err(Error::InvalidInput(
            "targets and conditioning set overlap".into(),
        ));
    }
    let matrix = schur_indices(cov.matrix(), &t, &g, || names(cov, &g))?;
    Ok(ConditionalCovariance {
        targets: targets.iter().map(|s| s.as_ref().to_string()).collect(),
        given: given.iter().map(|s| s.as_ref().to_string()).collect(),
        matrix,
    })
}

fn names(cov: &LabeledCovariance, idx: &[usize]) -> String {
    idx.iter()
        .map(|&i| cov.labels()[i].as_str())
        .collect::<Vec<_>>()
        .join(",")
}

/// Partial correlation over raw indices. The pair is put in index order first so the
/// result is bit-identical under swapping `a` and `b`.
pub(crate) fn partial_correlation_indices(
    m: &DMatrix<f64>,
    a: usize,
    b: usize,
    cond: &[usize],
    describe: impl Fn() -> String,
) -> Result<f64> {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let phi = schur_indices(m, &[lo, hi], cond, &describe)?;
    let (vlo, vhi) = (phi[(0, 0)], phi[(1, 1)]);
    if !(vlo > DEGENERATE_VARIANCE * m[(lo, lo)]) || !(vlo > 0.0) {
        return Err(Error::DegenerateVariance(describe()));
    }
    if !(vhi > DEGENERATE_VARIANCE * m[(hi, hi)]) || !(vhi > 0.0) {
        return Err(Error::DegenerateVariance(describe()));
    }
    Ok((phi[(0, 1)] / (vlo * vhi).sqrt()).clamp(-1.0, 1.0))
}

fn test_indices(cov: &LabeledCovariance, test: &CiTest) -> Result<(usize, usize, Vec<usize>)> {
    Ok((
        cov.index_of(&test.a)?,
        cov.index_of(&test.b)?,
        cov.indices(&test.cond)?,
    ))
}

/// Partial correlation `ρ_{A,B|C}`.
pub fn partial_correlation(cov: &LabeledCovariance, test: &CiTest) -> Result<f64> {
    let (a, b, c) = test_indices(cov, test)?;
    partial_correlation_indices(cov.matrix(), a, b, &c, || test.to_string())
}

/// Mutual information of a Gaussian pair with correlation `rho`, in nats.
pub fn information_from_correlation(rho: f64, what: impl Fn() -> String) -> Result<f64> {
    let r = rho.abs();
    if r >= 1.0 - DIVERGENT_MARGIN {
        return Err(Error::DivergentInformation(what()));
    }
    if r < ZERO_CORRELATION {
        return Ok(0.0);
    }
    let info = -0.5 * (-rho * rho).ln_1p();
    // ln_1p(-x) for x in (0, 1) is strictly negative, so this only guards NaN input.
    if !(info >= 0.0) {
        return Err(Error::InternalConsistency(format!(
            "negative mutual information {info:e} for {}",
            what()
        )));
    }
    Ok(info)
}

pub(crate) fn cmi_indices(
    m: &DMatrix<f64>,
    a: usize,
    b: usize,
    cond: &[usize],
    describe: impl Fn() -> String,
) -> Result<f64> {
    let rho = partial_correlation_indices(m, a, b, cond, &describe)?;
    information_from_correlation(rho, describe)
}

/// Conditional mutual information `I(A:B|C)` in nats.
///
/// For scalar `A`, `B` the determinant form `½ log(Φ_AA Φ_BB / det Φ)` reduces to
/// `−½ log(1 − ρ²)`, which is what gets evaluated.
pub fn conditional_mutual_information(cov: &LabeledCovariance, test: &CiTest) -> Result<f64> {
    let (a, b, c) = test_indices(cov, test)?;
    cmi_indices(cov.matrix(), a, b, &c, || test.to_string())
}

/// `D(P‖Q)` for zero-mean Gaussians with covariances `p` and `q`.
pub fn gaussian_kl(p: &LabeledCovariance, q: &LabeledCovariance) -> Result<f64> {
    if p.labels() != q.labels() {
        return Err(Error::DimensionMismatch(format!(
            "labels [{}] vs [{}]",
            p.labels().join(","),
            q.labels().join(",")
        )));
    }
    let d = p.dim();
    let chol = linalg::spd_factor(q.matrix(), || "Q".to_string())?;
    let trace = chol.solve(p.matrix()).trace();
    let ln_det_q = 2.0
        * chol
            .l_dirty()
            .diagonal()
            .iter()
            .map(|v| v.ln())
            .sum::<f64>();
    let ln_det_p = linalg::log_det(p.matrix());
    if ln_det_p == f64::NEG_INFINITY {
        return Ok(f64::INFINITY);
    }
    let kl = 0.5 * (trace - d as f64 + ln_det_q - ln_det_p);
    Ok(kl.max(0.0))
}
