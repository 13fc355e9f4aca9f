//! CI meta-dependence (CIMD) between two conditional-independence tests.
//!
//! `CIMD(T₁, T₂, P) = I_P(T₁) − I_{P_{T₂}}(T₁)`: how much of `T₁`'s conditional mutual
//! information disappears once `P` is projected onto `T₂`. Positive values mean moving
//! towards `T₂` also moves towards `T₁`; negative values mean it moves away.

use crate::error::{Error, Result};
use crate::gaussian::{conditional_mutual_information, CiTest, LabeledCovariance};
use crate::projection::project_ci;

/// Default CIMD-lim cutoff, in nats.
pub const DEFAULT_CUTOFF: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct CimdValue {
    pub t1: CiTest,
    pub t2: CiTest,
    /// `i_p_t1 − i_proj_t1`.
    pub raw: f64,
    /// `I_P(T₁)`.
    pub i_p_t1: f64,
    /// `I_{P_{T₂}}(T₁)`.
    pub i_proj_t1: f64,
    /// `I_P(T₂)`.
    pub i_p_t2: f64,
    /// `raw` when `limited_active`, else 0.
    pub limited: f64,
    pub limited_active: bool,
}

/// Unlimited CIMD. `limited` equals `raw` and `limited_active` is always true.
pub fn cimd(cov: &LabeledCovariance, t1: &CiTest, t2: &CiTest) -> Result<CimdValue> {
    cimd_lim(cov, t1, t2, f64::INFINITY)
}

/// CIMD zeroed out when either pre-projection mutual information exceeds `cutoff`.
pub fn cimd_lim(cov: &LabeledCovariance, t1: &CiTest, t2: &CiTest, cutoff: f64) -> Result<CimdValue> {
    if cutoff.is_nan() || cutoff < 0.0 {
        return Err(Error::InvalidInput(format!("cutoff {cutoff} must be >= 0")));
    }
    let i_p_t1 = conditional_mutual_information(cov, t1)?;
    let i_p_t2 = conditional_mutual_information(cov, t2)?;
    let projected = project_ci(cov, t2)?.projected;
    let i_proj_t1 = conditional_mutual_information(&projected, t1)?;
    let raw = i_p_t1 - i_proj_t1;
    let limited_active = i_p_t1 <= cutoff && i_p_t2 <= cutoff;
    Ok(CimdValue {
        t1: t1.clone(),
        t2: t2.clone(),
        raw,
        i_p_t1,
        i_proj_t1,
        i_p_t2,
        limited: if limited_active { raw } else { 0.0 },
        limited_active,
    })
}

/// All tests over `labels` with conditioning sets of size up to `max_cond_size`.
///
/// Pairs follow label order; for each pair the conditioning sets run by size, then
/// lexicographically by label position.
pub fn enumerate_tests<S: AsRef<str>>(labels: &[S], max_cond_size: usize) -> Result<Vec<CiTest>> {
    let d = labels.len();
    if d < 2 || max_cond_size > d - 2 {
        return Err(Error::InvalidInput(format!(
            "max conditioning size {max_cond_size} exceeds {} for {d} variables",
            d.saturating_sub(2)
        )));
    }
    let name = |i: usize| labels[i].as_ref().to_string();
    let mut out = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            let others: Vec<usize> = (0..d).filter(|&i| i != a && i != b).collect();
            for size in 0..=max_cond_size {
                for subset in combinations(others.len(), size) {
                    let cond: Vec<String> = subset.iter().map(|&k| name(others[k])).collect();
                    out.push(CiTest {
                        a: name(a),
                        b: name(b),
                        cond: canonical_order(cond),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn canonical_order(mut cond: Vec<String>) -> Vec<String> {
    cond.sort();
    cond
}

/// k-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bivariate(rho: f64) -> LabeledCovariance {
        LabeledCovariance::from_rows(&["A", "B"], &[1.0, rho, rho, 1.0]).unwrap()
    }

    #[test]
    fn self_projection_annihilates() {
        let t = CiTest::marginal("A", "B").unwrap();
        let v = cimd(&bivariate(0.5), &t, &t).unwrap();
        assert_eq!(v.i_proj_t1, 0.0);
        assert!((v.raw - (-0.5 * 0.75f64.ln())).abs() < 1e-15);
        assert_eq!(v.limited, v.raw);
    }

    #[test]
    fn limited_zeroes_strong_dependence() {
        // I(A:B) = 0.5 nats.
        let rho = (1.0 - (-1.0f64).exp()).sqrt();
        let cov = LabeledCovariance::from_rows(
            &["A", "B", "C"],
            &[1.0, rho, 0.0, rho, 1.0, 0.0, 0.0, 0.0, 1.0],
        )
        .unwrap();
        let t1 = CiTest::marginal("A", "C").unwrap();
        let t2 = CiTest::marginal("A", "B").unwrap();
        let v = cimd_lim(&cov, &t1, &t2, DEFAULT_CUTOFF).unwrap();
        assert!((v.i_p_t2 - 0.5).abs() < 1e-12);
        assert!(!v.limited_active);
        assert_eq!(v.limited, 0.0);
    }

    #[test]
    fn independent_everywhere_is_zero() {
        let cov = LabeledCovariance::identity(&["A", "B", "C"]);
        let t1 = CiTest::marginal("A", "B").unwrap();
        let t2 = CiTest::marginal("B", "C").unwrap();
        let v = cimd_lim(&cov, &t1, &t2, DEFAULT_CUTOFF).unwrap();
        assert!(v.limited_active);
        assert_eq!(v.raw, 0.0);
        assert_eq!(v.limited, 0.0);
    }

    #[test]
    fn enumeration_counts_and_order() {
        let t = enumerate_tests(&["A", "B", "C"], 1).unwrap();
        let keys: Vec<String> = t.iter().map(|t| t.to_string()).collect();
        assert_eq!(
            keys,
            ["A_B|", "A_B|C", "A_C|", "A_C|B", "B_C|", "B_C|A"]
        );
        assert_eq!(enumerate_tests(&["A", "B", "C", "D"], 0).unwrap().len(), 6);
        assert_eq!(enumerate_tests(&["A", "B", "C", "D"], 2).unwrap().len(), 24);
        assert!(enumerate_tests(&["A", "B", "C"], 2).is_err());
    }

    #[test]
    fn bad_cutoff_rejected() {
        let t = CiTest::marginal("A", "B").unwrap();
        assert!(cimd_lim(&bivariate(0.1), &t, &t, -1.0).is_err());
    }
}
