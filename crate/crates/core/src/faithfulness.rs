//! λ-strong faithfulness audit: d-connected pairs whose partial correlation is too weak.

use crate::dependence::enumerate_tests;
use crate::error::{Error, Result};
use crate::gaussian::{partial_correlation, CiTest, LabeledCovariance};
use crate::graph::Dag;

/// Slack on the `|ρ| ≤ λ` boundary so values equal to λ up to roundoff are flagged.
const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub test: CiTest,
    pub partial_correlation: f64,
}

/// Every test with conditioning sets up to `max_cond_size` that the DAG leaves d-connected
/// yet has `|ρ_{A,B|C}| ≤ lambda`. D-separated tests are skipped.
pub fn audit(
    cov: &LabeledCovariance,
    dag: &Dag,
    lambda: f64,
    max_cond_size: usize,
) -> Result<Vec<Violation>> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidInput(format!("lambda {lambda} must lie in (0, 1)")));
    }
    for node in dag.nodes() {
        cov.index_of(node)?;
    }
    for label in cov.labels() {
        dag.index_of(label)?;
    }
    let mut out = Vec::new();
    for test in enumerate_tests(cov.labels(), max_cond_size)? {
        if dag.d_separated(&test.a, &test.b, &test.cond)? {
            continue;
        }
        let rho = partial_correlation(cov, &test)?;
        if rho.abs() <= lambda + BOUNDARY_SLACK {
            out.push(Violation {
                test,
                partial_correlation: rho,
            });
        }
    }
    Ok(out)
}
