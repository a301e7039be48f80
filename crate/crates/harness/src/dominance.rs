use epkit::{hermitian_eig, operator_norm, CMatrix, LinalgError, ToleranceConfig};

use crate::error::Result;

fn require_hermitian(m: &CMatrix, tol: &ToleranceConfig) -> Result<()> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            op: "psd_dominates",
            rows: m.rows(),
            cols: m.cols(),
        }
        .into());
    }
    let residual = operator_norm(&(m - &m.adjoint()));
    if residual > tol.eq_atol * (1.0 + operator_norm(m)) {
        return Err(LinalgError::NotHermitian { residual }.into());
    }
    Ok(())
}

/// Loewner order test `A >= B`: the smallest eigenvalue of `A - B` is at least
/// `-eq_atol (1 + ||A||_2)`.
pub fn psd_dominates(a: &CMatrix, b: &CMatrix, tol: &ToleranceConfig) -> Result<bool> {
    if a.shape() != b.shape() {
        return Err(LinalgError::DimensionMismatch {
            op: "psd_dominates",
            left: a.shape(),
            right: b.shape(),
        }
        .into());
    }
    require_hermitian(a, tol)?;
    require_hermitian(b, tol)?;
    Ok(dominance_margin(a, b, tol)? >= -tol.eq_atol * (1.0 + operator_norm(a)))
}

/// Smallest eigenvalue of `A - B` after symmetrization.
pub fn dominance_margin(a: &CMatrix, b: &CMatrix, tol: &ToleranceConfig) -> Result<f64> {
    let d = a - b;
    let h = (&d + &d.adjoint()).scale_real(0.5);
    Ok(hermitian_eig(&h, tol)?.eigenvalues.last().copied().unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::HarnessError;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn identity_dominates_zero() {
        assert!(psd_dominates(&CMatrix::identity(3), &CMatrix::zeros(3, 3), &tol()).unwrap());
    }

    #[test]
    fn indefinite_difference() {
        let a = CMatrix::from_real_diag(&[1.0, 0.0]);
        let b = CMatrix::from_real_diag(&[0.0, 1.0]);
        assert!(!psd_dominates(&a, &b, &tol()).unwrap());
    }

    #[test]
    fn errors() {
        let j = CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(
            psd_dominates(&j, &CMatrix::zeros(2, 2), &tol()),
            Err(HarnessError::Linalg(LinalgError::NotHermitian { .. }))
        ));
        assert!(matches!(
            psd_dominates(&CMatrix::identity(2), &CMatrix::identity(3), &tol()),
            Err(HarnessError::Linalg(LinalgError::DimensionMismatch { .. }))
        ));
    }
}
