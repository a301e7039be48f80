//! Orthonormal bases, orthogonal projectors and subspace comparison.
//!
//! Ranges, null spaces and carriers are read off a single
//! [`SvdFactorization`], so the three are mutually consistent for a given
//! matrix. Inclusion `A ⊆ B` is decided by the residual `||(I - P_B) V_A||_2`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{LinalgError, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::RealScalar;
use crate::svd::{operator_norm, singular_values, svd, SvdFactorization};
use crate::tolerance::ToleranceConfig;

/// Orthonormal basis of a subspace of `C^ambient_dim`, stored as the columns
/// of an `ambient_dim x k` matrix. `k = 0` is the trivial subspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct OrthonormalBasis<T: RealScalar> {
    ambient_dim: usize,
    vectors: ComplexMatrix<T>,
}

impl<T: RealScalar> OrthonormalBasis<T> {
    /// Wraps columns that are already orthonormal, checking `V*V = I` within `eq_atol`.
    pub fn new(vectors: ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<Self> {
        let k = vectors.cols();
        let gram = vectors.adjoint_mul(&vectors)?;
        let residual = operator_norm(&(&gram - &ComplexMatrix::identity(k)));
        if residual > tol.atol() {
            return Err(LinalgError::InvalidDimension(format!(
                "columns are not orthonormal (residual {:e})",
                residual.to_f64_lossy()
            )));
        }
        Ok(Self::from_orthonormal(vectors))
    }

    pub(crate) fn from_orthonormal(vectors: ComplexMatrix<T>) -> Self {
        Self {
            ambient_dim: vectors.rows(),
            vectors,
        }
    }

    /// Orthonormal basis of the span of arbitrary generator columns.
    pub fn span_of(generators: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<Self> {
        range_basis(generators, tol)
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self::from_orthonormal(ComplexMatrix::zeros(ambient_dim, 0))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.cols()
    }

    pub fn vectors(&self) -> &ComplexMatrix<T> {
        &self.vectors
    }

    pub fn projector(&self) -> Projector<T> {
        projector(self)
    }
}

/// Orthogonal projector `P = V V*` onto a subspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Projector<T: RealScalar> {
    matrix: ComplexMatrix<T>,
}

impl<T: RealScalar> Projector<T> {
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    /// `||P - Q||_2`, the gap between the two subspaces.
    pub fn distance(&self, other: &Projector<T>) -> T {
        operator_norm(&(&self.matrix - &other.matrix))
    }

    /// `I - P`.
    pub fn complement(&self) -> Projector<T> {
        Projector {
            matrix: &ComplexMatrix::identity(self.matrix.rows()) - &self.matrix,
        }
    }

    /// Largest of `||P^2 - P||_2` and `||P - P*||_2`.
    pub fn defect(&self) -> T {
        let idem = operator_norm(&(&(&self.matrix * &self.matrix) - &self.matrix));
        let herm = operator_norm(&(&self.matrix - &self.matrix.adjoint()));
        idem.max(herm)
    }
}

impl<T: RealScalar> SvdFactorization<T> {
    pub fn range_basis(&self) -> OrthonormalBasis<T> {
        OrthonormalBasis::from_orthonormal(self.range_vectors())
    }

    pub fn null_basis(&self) -> OrthonormalBasis<T> {
        OrthonormalBasis::from_orthonormal(self.null_vectors())
    }

    /// Carrier `N(M)^⊥`, which equals the range of the adjoint.
    pub fn carrier_basis(&self) -> OrthonormalBasis<T> {
        OrthonormalBasis::from_orthonormal(self.carrier_vectors())
    }

    /// `R(M)^⊥ = N(M*)`.
    pub fn cokernel_basis(&self) -> OrthonormalBasis<T> {
        OrthonormalBasis::from_orthonormal(self.cokernel_vectors())
    }
}

/// Orthonormal basis of the range `R(M)`: left singular vectors above the cutoff.
pub fn range_basis<T: RealScalar>(m: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<OrthonormalBasis<T>> {
    Ok(svd(m, tol)?.range_basis())
}

/// Orthonormal basis of the null space `N(M)`.
pub fn null_basis<T: RealScalar>(m: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<OrthonormalBasis<T>> {
    Ok(svd(m, tol)?.null_basis())
}

/// Orthonormal basis of the carrier `C(M) = N(M)^⊥`.
pub fn carrier_basis<T: RealScalar>(m: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<OrthonormalBasis<T>> {
    Ok(svd(m, tol)?.carrier_basis())
}

pub fn projector<T: RealScalar>(basis: &OrthonormalBasis<T>) -> Projector<T> {
    let v = &basis.vectors;
    let n = basis.ambient_dim;
    let mut p = ComplexMatrix::zeros(n, n);
    for k in 0..v.cols() {
        for i in 0..n {
            let a = v[(i, k)];
            for j in 0..n {
                p[(i, j)] = p[(i, j)] + a * v[(j, k)].conj();
            }
        }
    }
    Projector { matrix: p }
}

fn check_ambient<T: RealScalar>(a: &OrthonormalBasis<T>, b: &OrthonormalBasis<T>, op: &'static str) -> Result<()> {
    if a.ambient_dim != b.ambient_dim {
        return Err(LinalgError::DimensionMismatch {
            op,
            left: a.vectors.shape(),
            right: b.vectors.shape(),
        });
    }
    Ok(())
}

/// `||(I - P_B) V_A||_2`: how far `A` sticks out of `B`.
pub fn inclusion_residual<T: RealScalar>(a: &OrthonormalBasis<T>, b: &OrthonormalBasis<T>) -> Result<T> {
    check_ambient(a, b, "inclusion_residual")?;
    if a.dim() == 0 {
        return Ok(T::zero());
    }
    // V_A - V_B (V_B* V_A)
    let coeffs = b.vectors.adjoint_mul(&a.vectors)?;
    let along = b.vectors.multiply(&coeffs)?;
    Ok(operator_norm(&(&a.vectors - &along)))
}

/// Whether `A ⊆ B` within `eq_atol`.
pub fn subspace_leq<T: RealScalar>(
    a: &OrthonormalBasis<T>,
    b: &OrthonormalBasis<T>,
    tol: &ToleranceConfig,
) -> Result<bool> {
    Ok(inclusion_residual(a, b)? <= tol.atol())
}

/// Whether `A = B`: inclusion both ways.
pub fn subspace_eq<T: RealScalar>(
    a: &OrthonormalBasis<T>,
    b: &OrthonormalBasis<T>,
    tol: &ToleranceConfig,
) -> Result<bool> {
    Ok(subspace_leq(a, b, tol)? && subspace_leq(b, a, tol)?)
}

/// `||P_A - P_B||_2`.
pub fn subspace_gap<T: RealScalar>(a: &OrthonormalBasis<T>, b: &OrthonormalBasis<T>) -> Result<T> {
    check_ambient(a, b, "subspace_gap")?;
    Ok(projector(a).distance(&projector(b)))
}

/// Principal angles between `A` and `B` in radians, ascending.
///
/// There are `min(dim A, dim B)` of them; the cosines are the singular values
/// of `V_A* V_B`.
pub fn principal_angles<T: RealScalar>(a: &OrthonormalBasis<T>, b: &OrthonormalBasis<T>) -> Result<Vec<T>> {
    check_ambient(a, b, "principal_angles")?;
    if a.dim() == 0 || b.dim() == 0 {
        return Ok(Vec::new());
    }
    let cross = a.vectors.adjoint_mul(&b.vectors)?;
    let cosines = singular_values(&cross)?;
    Ok(cosines.into_iter().map(|c| c.min(T::one()).acos()).collect())
}

/// Column vector helper for tests and generators.
pub fn column_matrix<T: RealScalar>(v: &[Complex<T>]) -> ComplexMatrix<T> {
    ComplexMatrix::from_columns(v.len(), &[v.to_vec()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CMatrix;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn span(cols: &[&[f64]]) -> OrthonormalBasis<f64> {
        let n = cols[0].len();
        let c: Vec<Vec<Complex<f64>>> = cols
            .iter()
            .map(|v| v.iter().map(|&x| Complex::new(x, 0.0)).collect())
            .collect();
        OrthonormalBasis::span_of(&ComplexMatrix::from_columns(n, &c), &tol()).unwrap()
    }

    #[test]
    fn range_of_diag() {
        let b = range_basis(&CMatrix::from_real_diag(&[1.0, 0.0]), &tol()).unwrap();
        assert_eq!(b.dim(), 1);
        assert_eq!(b.vectors()[(0, 0)].norm(), 1.0);
        assert_eq!(b.vectors()[(1, 0)].norm(), 0.0);
    }

    #[test]
    fn range_of_nilpotent_cell() {
        let b = range_basis(&CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]), &tol()).unwrap();
        assert_eq!(b.dim(), 1);
        assert_eq!(b.vectors()[(0, 0)].norm(), 1.0);
    }

    #[test]
    fn null_spaces() {
        let b = null_basis(&CMatrix::from_real_diag(&[1.0, 0.0]), &tol()).unwrap();
        assert_eq!(b.dim(), 1);
        assert_eq!(b.vectors()[(1, 0)].norm(), 1.0);
        assert_eq!(null_basis(&CMatrix::identity(3), &tol()).unwrap().dim(), 0);
    }

    #[test]
    fn projector_examples() {
        let p = span(&[&[1.0, 0.0]]).projector();
        assert_eq!(p.matrix(), &CMatrix::from_real_diag(&[1.0, 0.0]));
        let p = OrthonormalBasis::<f64>::empty(3).projector();
        assert!(p.matrix().is_zero());
    }

    #[test]
    fn inclusion_examples() {
        let e1 = span(&[&[1.0, 0.0, 0.0]]);
        let e2 = span(&[&[0.0, 1.0, 0.0]]);
        let e12 = span(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        assert!(subspace_leq(&e1, &e12, &tol()).unwrap());
        assert!(!subspace_leq(&e1, &e2, &tol()).unwrap());
        assert!(!subspace_eq(&e1, &e12, &tol()).unwrap());
    }

    #[test]
    fn scaling_invariance() {
        let a = span(&[&[1.0, 1.0]]);
        let b = span(&[&[2.0, 2.0]]);
        assert!(subspace_eq(&a, &b, &tol()).unwrap());
    }

    #[test]
    fn empty_subspace_rules() {
        let empty = OrthonormalBasis::<f64>::empty(2);
        let e1 = span(&[&[1.0, 0.0]]);
        assert!(subspace_leq(&empty, &e1, &tol()).unwrap());
        assert!(!subspace_leq(&e1, &empty, &tol()).unwrap());
        assert!(subspace_eq(&empty, &OrthonormalBasis::empty(2), &tol()).unwrap());
        assert!(!subspace_eq(&empty, &e1, &tol()).unwrap());
    }

    #[test]
    fn ambient_mismatch() {
        let a = OrthonormalBasis::<f64>::empty(2);
        let b = OrthonormalBasis::<f64>::empty(3);
        assert!(matches!(
            subspace_leq(&a, &b, &tol()),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn principal_angles_right_angle() {
        let a = span(&[&[1.0, 0.0]]);
        let b = span(&[&[0.0, 1.0]]);
        let ang = principal_angles(&a, &b).unwrap();
        assert!((ang[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn new_rejects_non_orthonormal() {
        let m = CMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]);
        assert!(OrthonormalBasis::new(m, &tol()).is_err());
        assert!(OrthonormalBasis::new(CMatrix::identity(2), &tol()).is_ok());
    }
}
