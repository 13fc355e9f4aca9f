//! Closed-form information projection of a Gaussian onto `A ⊥ B | C`.
//!
//! Write the variables as `{A, B} ∪ C ∪ X`, with `X̄ = {A, B} ∪ C`. The projection keeps
//! `P(C)`, `P(A | C)`, `P(B | C)` and `P(X | A, B, C)` and only drops the conditional
//! coupling of `A` and `B`:
//!
//! 1. `Σ⊥_ab = Σ_aC Σ_CC⁻¹ Σ_Cb` (the conditional covariance of `A, B` given `C` becomes 0),
//!    with the diagonal entries of the `{A, B}` block untouched;
//! 2. with `W = Σ_XX̄ Σ_X̄X̄⁻¹` held fixed, `Σ⊥_XX̄ = W Σ⊥_X̄X̄` and
//!    `Σ⊥_XX = Σ_XX + W (Σ⊥_X̄X̄ − Σ_X̄X̄) Wᵀ`.
//!
//! Since `Σ⊥_X̄X̄ − Σ_X̄X̄` is nonzero only at `(a, b)`, step 2 touches the `X × {A, B}` and
//! `X × X` blocks alone; everything else is copied from the input.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussian::{self, CiTest, LabeledCovariance};
use crate::linalg;

/// Smallest eigenvalue tolerated in the projected matrix, as a fraction of its trace.
const PSD_TRACE_TOL: f64 = 1e-8;

/// Output of [`project_ci`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    /// `Σ⊥`, same labels and ordering as the input.
    pub projected: LabeledCovariance,
    pub test: CiTest,
    /// `D(P‖P⊥)`, equal to `I_P(A:B|C)`.
    pub divergence: f64,
}

/// Variable roles for a test against a label set.
#[derive(Debug, Clone)]
pub(crate) struct Roles {
    pub a: usize,
    pub b: usize,
    pub cond: Vec<usize>,
    pub rest: Vec<usize>,
}

impl Roles {
    pub(crate) fn new(cov: &LabeledCovariance, test: &CiTest) -> Result<Self> {
        let a = cov.index_of(&test.a)?;
        let b = cov.index_of(&test.b)?;
        let cond = cov.indices(&test.cond)?;
        let rest = (0..cov.dim())
            .filter(|i| *i != a && *i != b && !cond.contains(i))
            .collect();
        Ok(Self { a, b, cond, rest })
    }

    /// `X̄ = [a, b, cond...]`.
    pub(crate) fn closure(&self) -> Vec<usize> {
        let mut v = vec![self.a, self.b];
        v.extend_from_slice(&self.cond);
        v
    }
}

fn describe(cov: &LabeledCovariance, idx: &[usize]) -> String {
    idx.iter()
        .map(|&i| cov.labels()[i].as_str())
        .collect::<Vec<_>>()
        .join(",")
}

/// Projects `cov` onto the set of Gaussians satisfying `test`.
pub fn project_ci(cov: &LabeledCovariance, test: &CiTest) -> Result<ProjectionResult> {
    let roles = Roles::new(cov, test)?;
    let m = cov.matrix();
    let (a, b) = (roles.a, roles.b);

    let explained = if roles.cond.is_empty() {
        0.0
    } else {
        let cc = linalg::select(m, &roles.cond, &roles.cond);
        let chol = linalg::spd_factor(&cc, || describe(cov, &roles.cond))?;
        let s_ca = linalg::select_vec(m, &roles.cond, a);
        let s_cb = linalg::select_vec(m, &roles.cond, b);
        s_ca.dot(&chol.solve(&s_cb))
    };
    let delta = explained - m[(a, b)];

    let mut out = m.clone();
    out[(a, b)] = explained;
    out[(b, a)] = explained;

    if !roles.rest.is_empty() {
        let closure = roles.closure();
        let bar = linalg::select(m, &closure, &closure);
        let chol = linalg::spd_factor(&bar, || describe(cov, &closure))?;
        // Columns 0 and 1 of W are the weights on A and B.
        let w = chol.solve(&linalg::select(m, &closure, &roles.rest)).transpose();
        for (r, &xr) in roles.rest.iter().enumerate() {
            let (wa, wb) = (w[(r, 0)], w[(r, 1)]);
            out[(xr, a)] = m[(xr, a)] + wb * delta;
            out[(a, xr)] = out[(xr, a)];
            out[(xr, b)] = m[(xr, b)] + wa * delta;
            out[(b, xr)] = out[(xr, b)];
            for (s, &xs) in roles.rest.iter().enumerate().skip(r) {
                let v = m[(xr, xs)] + delta * (wa * w[(s, 1)] + wb * w[(s, 0)]);
                out[(xr, xs)] = v;
                out[(xs, xr)] = v;
            }
        }
    }

    let (min, _) = linalg::eigen_range(&out);
    if min < -PSD_TRACE_TOL * out.trace().abs() {
        return Err(Error::NonPsdResult {
            min_eigenvalue: min,
        });
    }

    let divergence = gaussian::conditional_mutual_information(cov, test)?;
    Ok(ProjectionResult {
        projected: LabeledCovariance::from_parts_unchecked(cov.labels().to_vec(), out),
        test: test.clone(),
        divergence,
    })
}

/// Largest deviation between original and projected versions of each preserved conditional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalsReport {
    /// `P(C)`: covariance of the conditioning block.
    pub marginal_cond: f64,
    /// `P(A | C)`: regression weights and residual variance.
    pub a_given_cond: f64,
    /// `P(B | C)`.
    pub b_given_cond: f64,
    /// `P(X | A, B, C)`.
    pub rest_given_closure: f64,
}

impl ConditionalsReport {
    pub fn max(&self) -> f64 {
        [
            self.marginal_cond,
            self.a_given_cond,
            self.b_given_cond,
            self.rest_given_closure,
        ]
        .into_iter()
        .fold(0.0, |m, v| if v.is_nan() { f64::NAN } else { m.max(v) })
    }
}

/// Regression weights `Σ_TI Σ_II⁻¹` and residual covariance of `targets` on `inputs`.
fn regression(
    m: &DMatrix<f64>,
    targets: &[usize],
    inputs: &[usize],
) -> Option<(DMatrix<f64>, DMatrix<f64>)> {
    let tt = linalg::select(m, targets, targets);
    if inputs.is_empty() {
        return Some((DMatrix::zeros(targets.len(), 0), tt));
    }
    let ii = linalg::select(m, inputs, inputs);
    let chol = linalg::spd_factor(&ii, String::new).ok()?;
    let it = linalg::select(m, inputs, targets);
    let weights = chol.solve(&it).transpose();
    let resid = tt - &weights * it;
    Some((weights, resid))
}

fn max_abs_diff(x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    x.iter()
        .zip(y.iter())
        .fold(0.0, |acc, (p, q)| acc.max((p - q).abs()))
}

fn conditional_deviation(
    original: &DMatrix<f64>,
    projected: &DMatrix<f64>,
    targets: &[usize],
    inputs: &[usize],
) -> f64 {
    if targets.is_empty() {
        return 0.0;
    }
    match (
        regression(original, targets, inputs),
        regression(projected, targets, inputs),
    ) {
        (Some((w0, r0)), Some((w1, r1))) => max_abs_diff(&w0, &w1).max(max_abs_diff(&r0, &r1)),
        _ => f64::NAN,
    }
}

/// Checks that `result` leaves the four conditionals of `cov` unchanged.
///
/// Unverifiable identities (singular input blocks) are reported as NaN; an empty
/// conditioning set or empty `X` makes the corresponding identity vacuous (exactly 0).
pub fn projection_preserves_conditionals(
    cov: &LabeledCovariance,
    result: &ProjectionResult,
) -> ConditionalsReport {
    let Ok(roles) = Roles::new(cov, &result.test) else {
        return ConditionalsReport {
            marginal_cond: f64::NAN,
            a_given_cond: f64::NAN,
            b_given_cond: f64::NAN,
            rest_given_closure: f64::NAN,
        };
    };
    let m0 = cov.matrix();
    let m1 = result.projected.matrix();
    let cc0 = linalg::select(m0, &roles.cond, &roles.cond);
    let cc1 = linalg::select(m1, &roles.cond, &roles.cond);
    ConditionalsReport {
        marginal_cond: max_abs_diff(&cc0, &cc1),
        a_given_cond: conditional_deviation(m0, m1, &[roles.a], &roles.cond),
        b_given_cond: conditional_deviation(m0, m1, &[roles.b], &roles.cond),
        rest_given_closure: conditional_deviation(m0, m1, &roles.rest, &roles.closure()),
    }
}
