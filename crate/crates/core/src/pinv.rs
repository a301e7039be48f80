//! Moore-Penrose pseudoinverse and the quantities derived from it.
//!
//! The pseudoinverse inverts `M` on its carrier `N(M)^⊥` and annihilates
//! `R(M)^⊥`. It is assembled spectrally from the SVD, inverting only the
//! singular values above the rank cutoff, so the carrier restriction and the
//! numerical rank come from the same decision.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::eigen::hermitian_eig;
use crate::error::{LinalgError, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::RealScalar;
use crate::subspace::{carrier_basis, null_basis, range_basis, subspace_gap};
use crate::svd::{operator_norm, svd};
use crate::tolerance::ToleranceConfig;

/// Factors of the polar decomposition `M = U |M|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct PolarFactors<T: RealScalar> {
    /// Partial isometry with initial space `R(M*)` and `N(U) = N(M)`.
    pub isometry_part: ComplexMatrix<T>,
    /// `|M| = (M* M)^{1/2}`, Hermitian positive semidefinite.
    pub modulus_part: ComplexMatrix<T>,
}

/// Residuals of the Moore-Penrose identity suite for one matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpIdentityReport {
    pub residuals: BTreeMap<String, f64>,
    /// `eq_atol (1 + ||M||_2 + ||M†||_2)`.
    pub threshold: f64,
    pub pass: bool,
}

impl MpIdentityReport {
    pub fn worst(&self) -> (String, f64) {
        self.residuals
            .iter()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, v)| (k.clone(), *v))
            .unwrap_or_default()
    }
}

pub fn pseudoinverse<T: RealScalar>(m: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<ComplexMatrix<T>> {
    Ok(svd(m, tol)?.pseudoinverse())
}

/// Spectral-norm residuals of the four Penrose equations for a candidate
/// pseudoinverse `mp` of `m`.
pub fn penrose_residuals<T: RealScalar>(m: &ComplexMatrix<T>, mp: &ComplexMatrix<T>) -> Result<BTreeMap<String, T>> {
    if mp.shape() != (m.cols(), m.rows()) {
        return Err(LinalgError::DimensionMismatch {
            op: "penrose_residuals",
            left: m.shape(),
            right: mp.shape(),
        });
    }
    let m_mp = m.multiply(mp)?;
    let mp_m = mp.multiply(m)?;
    let mut out = BTreeMap::new();
    out.insert("m_mp_m".to_string(), operator_norm(&(&m_mp.multiply(m)? - m)));
    out.insert("mp_m_mp".to_string(), operator_norm(&(&mp_m.multiply(mp)? - mp)));
    out.insert("m_mp_hermitian".to_string(), operator_norm(&(&m_mp - &m_mp.adjoint())));
    out.insert("mp_m_hermitian".to_string(), operator_norm(&(&mp_m - &mp_m.adjoint())));
    Ok(out)
}

/// Evaluates the standard Moore-Penrose identities in finite dimension.
///
/// Subspace identities are measured as projector gaps, operator identities as
/// spectral-norm residuals. Each side is built from its own factorization.
pub fn mp_identity_suite<T: RealScalar>(m: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<MpIdentityReport> {
    let adj = m.adjoint();
    let f = svd(m, tol)?;
    let mp = f.pseudoinverse();
    let adj_p = pseudoinverse(&adj, tol)?;

    let range_proj = f.range_basis().projector().into_matrix();
    let mp_range = range_basis(&mp, tol)?;
    let mp_range_proj = mp_range.projector().into_matrix();

    let mut r: BTreeMap<String, f64> = BTreeMap::new();
    let mut put = |name: &str, v: T| {
        r.insert(name.to_string(), v.to_f64_lossy());
    };
    put(
        "null_pinv_eq_null_adjoint",
        subspace_gap(&null_basis(&mp, tol)?, &null_basis(&adj, tol)?)?,
    );
    put(
        "range_pinv_eq_carrier",
        subspace_gap(&mp_range, &carrier_basis(m, tol)?)?,
    );
    put(
        "pinv_m_eq_carrier_projector",
        operator_norm(&(&mp.multiply(m)? - &mp_range_proj)),
    );
    put(
        "m_pinv_eq_range_projector",
        operator_norm(&(&m.multiply(&mp)? - &range_proj)),
    );
    put("pinv_of_pinv", operator_norm(&(&pseudoinverse(&mp, tol)? - m)));
    put("pinv_adjoint_eq_adjoint_pinv", operator_norm(&(&adj_p - &mp.adjoint())));
    put(
        "null_adjoint_pinv_eq_null",
        subspace_gap(&null_basis(&adj_p, tol)?, &null_basis(m, tol)?)?,
    );
    let gram = adj.multiply(m)?;
    put(
        "pinv_gram_left",
        operator_norm(&(&pseudoinverse(&gram, tol)? - &mp.multiply(&adj_p)?)),
    );
    let cogram = m.multiply(&adj)?;
    put(
        "pinv_gram_right",
        operator_norm(&(&pseudoinverse(&cogram, tol)? - &adj_p.multiply(&mp)?)),
    );

    let threshold = tol.eq_atol * (1.0 + f.norm().to_f64_lossy() + operator_norm(&mp).to_f64_lossy());
    let pass = r.values().all(|&v| v <= threshold);
    Ok(MpIdentityReport {
        residuals: r,
        threshold,
        pass,
    })
}

/// Reduced minimum modulus: the smallest singular value above the rank
/// cutoff, equal to `1 / ||M†||_2`. Returns 0 for a numerically zero matrix.
pub fn reduced_min_modulus<T: RealScalar>(m: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<T> {
    Ok(svd(m, tol)?.smallest_nonzero())
}

/// Largest eigenvalue modulus.
pub fn spectral_radius<T: RealScalar>(m: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<T> {
    let ev = crate::eigen::eigenvalues(m, tol)?;
    Ok(ev.iter().map(|z| z.norm()).fold(T::zero(), T::max))
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

/// Polar decomposition with `U = sum_{sigma_i > cutoff} u_i v_i*` and `|M| = V diag(sigma) V*`.
///
/// `U` annihilates `N(M)`, so it is a partial isometry rather than a unitary
/// completion.
pub fn polar_decomposition<T: RealScalar>(m: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<PolarFactors<T>> {
    require_square(m, "polar_decomposition")?;
    let f = svd(m, tol)?;
    let isometry_part = f.weighted_outer(f.rank(), |_| T::one());
    let v = f.right_vectors();
    let n = m.cols();
    let mut modulus = ComplexMatrix::zeros(n, n);
    for (k, &s) in f.singular_values().iter().enumerate() {
        if s == T::zero() {
            continue;
        }
        for i in 0..n {
            let a = v[(i, k)] * s;
            for j in 0..n {
                modulus[(i, j)] = modulus[(i, j)] + a * v[(j, k)].conj();
            }
        }
    }
    Ok(PolarFactors {
        isometry_part,
        modulus_part: modulus,
    })
}

/// `|M|^alpha` via the Hermitian eigendecomposition of `|M|`.
///
/// Eigenvalues at or below `rank_rtol * lambda_max` (including negative
/// roundoff) are treated as exact zeros, so `R(|M|^alpha)` has the same
/// numerical rank as `|M|` for every `alpha`.
pub fn fractional_abs_power<T: RealScalar>(
    m: &ComplexMatrix<T>,
    alpha: T,
    tol: &ToleranceConfig,
) -> Result<ComplexMatrix<T>> {
    require_square(m, "fractional_abs_power")?;
    if !alpha.is_finite() || alpha <= T::zero() {
        return Err(LinalgError::InvalidExponent(alpha.to_f64_lossy()));
    }
    let modulus = polar_decomposition(m, tol)?.modulus_part;
    let eig = hermitian_eig(&modulus, tol)?;
    let top = eig.eigenvalues.first().copied().unwrap_or_else(T::zero).max(T::zero());
    let cutoff = tol.rtol::<T>() * top;
    Ok(eig.apply_function(|lambda| if lambda > cutoff { lambda.powf(alpha) } else { T::zero() }))
}

/// Block-diagonal direct sum `A ⊕ B`.
pub fn direct_sum<T: RealScalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.direct_sum(b)
}
