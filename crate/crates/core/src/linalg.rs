//! Small dense-matrix helpers shared by the covariance modules.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::error::{Error, Result};

/// Largest condition number accepted for a block that must be inverted.
pub const MAX_CONDITION: f64 = 1e12;

/// Copies the `rows` x `cols` sub-block of `m`.
pub fn select(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub fn select_vec(m: &DMatrix<f64>, rows: &[usize], col: usize) -> DVector<f64> {
    DVector::from_fn(rows.len(), |i, _| m[(rows[i], col)])
}

/// Extreme eigenvalues `(min, max)` of a symmetric matrix. Empty matrices give `(0, 0)`.
pub fn eigen_range(m: &DMatrix<f64>) -> (f64, f64) {
    if m.nrows() == 0 {
        return (0.0, 0.0);
    }
    if m.nrows() == 1 {
        return (m[(0, 0)], m[(0, 0)]);
    }
    let eig = SymmetricEigen::new(m.clone());
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (min, max)
}

/// Cholesky factor of a symmetric positive-definite block, rejecting blocks whose
/// condition number reaches [`MAX_CONDITION`].
pub fn spd_factor(m: &DMatrix<f64>, what: impl Fn() -> String) -> Result<Cholesky<f64, Dyn>> {
    let (min, max) = eigen_range(m);
    if m.nrows() > 0 && (!(max > 0.0) || !(min * MAX_CONDITION > max)) {
        return Err(Error::SingularConditioningSet(what()));
    }
    Cholesky::new(m.clone()).ok_or_else(|| Error::SingularConditioningSet(what()))
}

/// Natural log-determinant of a positive-definite matrix; `-inf` if it is singular.
pub fn log_det(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    match Cholesky::new(m.clone()) {
        Some(ch) => {
            2.0 * ch
                .l_dirty()
                .diagonal()
                .iter()
                .map(|v| v.ln())
                .sum::<f64>()
        }
        None => {
            let eig = SymmetricEigen::new(m.clone());
            if eig.eigenvalues.iter().any(|&v| v <= 0.0) {
                f64::NEG_INFINITY
            } else {
                eig.eigenvalues.iter().map(|v| v.ln()).sum()
            }
        }
    }
}

/// Mirrors the upper triangle onto the lower one.
pub fn symmetrize_upper(m: &mut DMatrix<f64>) {
    for i in 0..m.nrows() {
        for j in 0..i {
            m[(i, j)] = m[(j, i)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_block_is_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            spd_factor(&m, || "x".into()),
            Err(Error::SingularConditioningSet(_))
        ));
        let z = DMatrix::from_element(1, 1, 0.0);
        assert!(spd_factor(&z, || "z".into()).is_err());
    }

    #[test]
    fn empty_block_factors() {
        let m = DMatrix::<f64>::zeros(0, 0);
        assert!(spd_factor(&m, || "empty".into()).is_ok());
        assert_eq!(log_det(&m), 0.0);
    }

    #[test]
    fn log_det_matches_product() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        assert!((log_det(&m) - (1.75f64).ln()).abs() < 1e-14);
    }
}
