//! Finite diagonal truncations of classical unbounded and bounded operators on
//! `L²[0,1]` and `ℓ²`, for limit studies of `gamma`, spectral radius and the
//! pseudoinverse norm as the truncation grows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classify::is_ep;
use crate::error::{LinalgError, Result};
use crate::matrix::{ComplexMatrix, MAX_DIM};
use crate::pinv::spectral_radius;
use crate::scalar::RealScalar;
use crate::svd::{operator_norm, svd};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyId {
    /// Multiplication by `1/sqrt(t)` on `L²[0,1]`, sampled at grid midpoints.
    MultInvSqrt,
    /// `(x_1, 2 x_2, 3 x_3, ...)`.
    DiagN,
    /// `(x_1, 2 x_2, x_3/3, 4 x_4, x_5/5, ...)`.
    DiagAlternating,
    /// `(x_1, x_2/2, ..., x_n/n, 0, ...)`.
    DiagHarmonicTruncated,
}

impl FamilyId {
    pub const ALL: [FamilyId; 4] = [
        FamilyId::MultInvSqrt,
        FamilyId::DiagN,
        FamilyId::DiagAlternating,
        FamilyId::DiagHarmonicTruncated,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::MultInvSqrt => "mult_inv_sqrt",
            FamilyId::DiagN => "diag_n",
            FamilyId::DiagAlternating => "diag_alternating",
            FamilyId::DiagHarmonicTruncated => "diag_harmonic_truncated",
        }
    }

    /// The `n` prescribed diagonal entries of the order-`n` truncation.
    pub fn entries(self, n: usize) -> Vec<f64> {
        (1..=n)
            .map(|j| {
                let jf = j as f64;
                match self {
                    FamilyId::MultInvSqrt => 1.0 / ((jf - 0.5) / n as f64).sqrt(),
                    FamilyId::DiagN => jf,
                    FamilyId::DiagAlternating => {
                        if j == 1 || j % 2 == 0 {
                            jf
                        } else {
                            1.0 / jf
                        }
                    }
                    FamilyId::DiagHarmonicTruncated => 1.0 / jf,
                }
            })
            .collect()
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| LinalgError::InvalidDimension(format!("unknown model family `{s}`")))
    }
}

/// A model family, optionally zero-padded into a larger ambient dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFamily {
    pub id: FamilyId,
    pub ambient: Option<usize>,
}

impl ModelFamily {
    pub fn new(id: FamilyId) -> Self {
        Self { id, ambient: None }
    }

    pub fn embedded(id: FamilyId, ambient: usize) -> Self {
        Self {
            id,
            ambient: Some(ambient),
        }
    }

    /// Order-`n` truncation as a diagonal matrix of size `ambient.unwrap_or(n)`.
    pub fn realize<T: RealScalar>(&self, n: usize) -> Result<ComplexMatrix<T>> {
        if n == 0 {
            return Err(LinalgError::InvalidDimension(
                "truncation order must be at least 1".into(),
            ));
        }
        let dim = self.ambient.unwrap_or(n);
        if dim < n || dim > MAX_DIM {
            return Err(LinalgError::InvalidDimension(format!(
                "ambient dimension {dim} must lie in {n}..={MAX_DIM}"
            )));
        }
        let mut diag: Vec<T> = self.id.entries(n).into_iter().map(T::of).collect();
        diag.resize(dim, T::zero());
        Ok(ComplexMatrix::from_real_diag(&diag))
    }
}

pub fn realize<T: RealScalar>(family: &ModelFamily, n: usize) -> Result<ComplexMatrix<T>> {
    family.realize(n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub n: usize,
    pub gamma: f64,
    pub spectral_radius: f64,
    pub is_ep: bool,
    pub pinv_norm: f64,
}

/// Metrics of the truncations `n = 1..=n_max`.
///
/// The harmonic family is embedded in dimension `n_max` unless the family
/// already fixes an ambient dimension, so every row shares one space.
pub fn limit_study(family: &ModelFamily, n_max: usize, tol: &ToleranceConfig) -> Result<Vec<LimitRow>> {
    if n_max < 2 {
        return Err(LinalgError::InvalidDimension(format!(
            "n_max must be at least 2, got {n_max}"
        )));
    }
    let family = match (family.id, family.ambient) {
        (FamilyId::DiagHarmonicTruncated, None) => ModelFamily::embedded(family.id, n_max),
        _ => *family,
    };
    (1..=n_max)
        .map(|n| {
            let m: ComplexMatrix<f64> = family.realize(n)?;
            let f = svd(&m, tol)?;
            Ok(LimitRow {
                n,
                gamma: f.smallest_nonzero(),
                spectral_radius: spectral_radius(&m, tol)?,
                is_ep: is_ep(&m, tol)?,
                pinv_norm: operator_norm(&f.pseudoinverse()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CMatrix;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn diag_n_three() {
        let m: CMatrix = ModelFamily::new(FamilyId::DiagN).realize(3).unwrap();
        assert_eq!(m, CMatrix::from_real_diag(&[1.0, 2.0, 3.0]));
    }

    #[test]
    fn harmonic_embedded() {
        let m: CMatrix = ModelFamily::embedded(FamilyId::DiagHarmonicTruncated, 6)
            .realize(4)
            .unwrap();
        assert_eq!(m, CMatrix::from_real_diag(&[1.0, 0.5, 1.0 / 3.0, 0.25, 0.0, 0.0]));
    }

    #[test]
    fn mult_inv_sqrt_midpoints() {
        let m: CMatrix = ModelFamily::new(FamilyId::MultInvSqrt).realize(2).unwrap();
        assert_eq!(m[(0, 0)].re, 2.0);
        assert!((m[(1, 1)].re - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        let big: CMatrix = ModelFamily::new(FamilyId::MultInvSqrt).realize(40).unwrap();
        assert!((0..40).all(|i| big[(i, i)].re >= 1.0));
    }

    #[test]
    fn alternating_entries() {
        assert_eq!(
            FamilyId::DiagAlternating.entries(6),
            vec![1.0, 2.0, 1.0 / 3.0, 4.0, 1.0 / 5.0, 6.0]
        );
    }

    #[test]
    fn invalid_dimensions() {
        assert!(ModelFamily::new(FamilyId::DiagN).realize::<f64>(0).is_err());
        assert!(ModelFamily::embedded(FamilyId::DiagN, 2).realize::<f64>(3).is_err());
        assert!(limit_study(&ModelFamily::new(FamilyId::DiagN), 1, &tol()).is_err());
    }

    #[test]
    fn parse_names() {
        for f in FamilyId::ALL {
            assert_eq!(f.name().parse::<FamilyId>().unwrap(), f);
        }
        assert!("bogus".parse::<FamilyId>().is_err());
    }

    #[test]
    fn diag_n_study() {
        let rows = limit_study(&ModelFamily::new(FamilyId::DiagN), 10, &tol()).unwrap();
        assert!(rows.iter().all(|r| r.gamma == 1.0 && r.is_ep));
        let radii: Vec<f64> = rows.iter().map(|r| r.spectral_radius).collect();
        assert_eq!(radii, (1..=10).map(|k| k as f64).collect::<Vec<_>>());
    }
}
