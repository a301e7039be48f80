//! EP, hypo-EP and normality predicates.
//!
//! A square matrix is EP when its range equals the range of its adjoint. The
//! closed-range part of the definition holds automatically in finite
//! dimension. Hypo-EP (`R(M) ⊆ R(M*)`) coincides with EP here because the two
//! ranges have equal dimension.

use serde::{Deserialize, Serialize};

use crate::error::{LinalgError, Result};
use crate::matrix::ComplexMatrix;
use crate::pinv::spectral_radius;
use crate::scalar::RealScalar;
use crate::subspace::{principal_angles, range_basis, subspace_eq, subspace_leq, OrthonormalBasis};
use crate::svd::{operator_norm, svd};
use crate::tolerance::ToleranceConfig;

/// Per-matrix verdicts and the scalar diagnostics behind them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub dim: usize,
    pub rank: usize,
    pub is_ep: bool,
    pub is_hypo_ep: bool,
    pub is_normal: bool,
    /// Reduced minimum modulus; 0 when `zero_operator` is set.
    pub gamma: f64,
    pub spectral_radius: f64,
    /// `||M† M - M M†||_2`.
    pub commutator_residual: f64,
    /// `||P_R(M) - P_R(M*)||_2`.
    pub range_gap: f64,
    /// Largest principal angle between `R(M)` and `R(M*)` in radians.
    pub max_principal_angle: f64,
    pub zero_operator: bool,
    /// Whether the range test and the commutator test agree at `eq_atol`.
    pub commutator_agrees: bool,
}

fn require_square<T: RealScalar>(m: &ComplexMatrix<T>, op: &'static str) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(LinalgError::NotSquare {
            op,
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

fn ranges<T: RealScalar>(
    m: &ComplexMatrix<T>,
    tol: &ToleranceConfig,
) -> Result<(OrthonormalBasis<T>, OrthonormalBasis<T>)> {
    Ok((range_basis(m, tol)?, range_basis(&m.adjoint(), tol)?))
}

/// `R(M) = R(M*)`, each range taken from its own factorization.
pub fn is_ep<T: RealScalar>(m: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<bool> {
    require_square(m, "is_ep")?;
    let (r, ra) = ranges(m, tol)?;
    subspace_eq(&r, &ra, tol)
}

/// `R(M) ⊆ R(M*)`.
pub fn is_hypo_ep<T: RealScalar>(m: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<bool> {
    require_square(m, "is_hypo_ep")?;
    let (r, ra) = ranges(m, tol)?;
    subspace_leq(&r, &ra, tol)
}

/// `||M M* - M* M||_2 <= eq_atol (1 + ||M||_2^2)`.
pub fn is_normal<T: RealScalar>(m: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<bool> {
    require_square(m, "is_normal")?;
    Ok(normality_residual(m)? <= tol.atol::<T>() * (T::one() + operator_norm(m).powi(2)))
}

pub fn normality_residual<T: RealScalar>(m: &ComplexMatrix<T>) -> Result<T> {
    let adj = m.adjoint();
    Ok(operator_norm(&(&m.multiply(&adj)? - &adj.multiply(m)?)))
}

/// `||M† M - M M†||_2` with `M†` from the given factorization's rank.
pub fn commutator_residual<T: RealScalar>(m: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<T> {
    require_square(m, "commutator_residual")?;
    let mp = svd(m, tol)?.pseudoinverse();
    Ok(operator_norm(&(&mp.multiply(m)? - &m.multiply(&mp)?)))
}

/// Consolidated report for a square matrix.
///
/// Rank, `gamma`, the pseudoinverse and `P_R(M)` share one factorization of
/// `M`; `R(M*)` comes from a factorization of the adjoint, as in [`is_ep`].
pub fn classify<T: RealScalar>(m: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<ClassificationReport> {
    require_square(m, "classify")?;
    let f = svd(m, tol)?;
    let range = f.range_basis();
    let adj_range = range_basis(&m.adjoint(), tol)?;
    let ep = subspace_eq(&range, &adj_range, tol)?;
    let hypo = subspace_leq(&range, &adj_range, tol)?;

    let mp = f.pseudoinverse();
    let commutator = operator_norm(&(&mp.multiply(m)? - &m.multiply(&mp)?)).to_f64_lossy();
    let range_gap = range.projector().distance(&adj_range.projector()).to_f64_lossy();
    let angles = principal_angles(&range, &adj_range)?;
    let max_angle = if range.dim() != adj_range.dim() {
        std::f64::consts::FRAC_PI_2
    } else {
        angles.iter().map(|a| a.to_f64_lossy()).fold(0.0, f64::max)
    };

    Ok(ClassificationReport {
        dim: m.rows(),
        rank: f.rank(),
        is_ep: ep,
        is_hypo_ep: hypo,
        is_normal: is_normal(m, tol)?,
        gamma: f.smallest_nonzero().to_f64_lossy(),
        spectral_radius: spectral_radius(m, tol)?.to_f64_lossy(),
        commutator_residual: commutator,
        range_gap,
        max_principal_angle: max_angle,
        zero_operator: f.rank() == 0,
        commutator_agrees: ep == (commutator <= tol.eq_atol),
    })
}
