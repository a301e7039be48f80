//! Dense complex linear algebra for Moore-Penrose pseudoinverses and EP
//! matrices.
//!
//! The kernels are generic over the real scalar type ([`RealScalar`], `f32` or
//! `f64`); the aliases below fix the working precision used by the harness and
//! CLI.
//!
//! ```
//! use epkit::{classify, CMatrix, ToleranceConfig};
//!
//! let jordan = CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
//! let report = classify(&jordan, &ToleranceConfig::default()).unwrap();
//! assert!(!report.is_ep);
//! assert_eq!(report.gamma, 1.0);
//! ```

pub mod classify;
pub mod eigen;
pub mod error;
pub mod matrix;
pub mod matrix_file;
pub mod models;
pub mod pinv;
pub mod scalar;
pub mod subspace;
pub mod svd;
pub mod tolerance;

pub use classify::{
    classify, commutator_residual, is_ep, is_hypo_ep, is_normal, normality_residual, ClassificationReport,
};
pub use eigen::{eigenvalues, hermitian_eig, HermitianEigen};
pub use error::{LinalgError, Result};
pub use matrix::{ComplexMatrix, MAX_DIM};
pub use matrix_file::MatrixFile;
pub use models::{limit_study, FamilyId, LimitRow, ModelFamily};
pub use pinv::{
    direct_sum, fractional_abs_power, mp_identity_suite, penrose_residuals, polar_decomposition, pseudoinverse,
    reduced_min_modulus, spectral_radius, MpIdentityReport, PolarFactors,
};
pub use scalar::RealScalar;
pub use subspace::{
    carrier_basis, inclusion_residual, null_basis, principal_angles, projector, range_basis, subspace_eq, subspace_gap,
    subspace_leq, OrthonormalBasis, Projector,
};
pub use svd::{operator_norm, singular_values, svd, SvdFactorization};
pub use tolerance::{ToleranceConfig, DEFAULT_EQ_ATOL, DEFAULT_RANK_RTOL};

pub use num_complex::Complex;

/// Double-precision complex matrix.
pub type CMatrix = ComplexMatrix<f64>;
/// Single-precision complex matrix.
pub type CMatrix32 = ComplexMatrix<f32>;
pub type C64 = Complex<f64>;
pub type Svd = SvdFactorization<f64>;
pub type Basis = OrthonormalBasis<f64>;
pub type Polar = PolarFactors<f64>;
