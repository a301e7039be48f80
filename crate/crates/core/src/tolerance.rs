use serde::{Deserialize, Serialize};

use crate::error::{LinalgError, Result};
use crate::scalar::RealScalar;

pub const DEFAULT_RANK_RTOL: f64 = 1e-10;
pub const DEFAULT_EQ_ATOL: f64 = 1e-8;

/// Numerical thresholds shared by every rank and equality decision.
///
/// `rank_rtol` is the relative singular-value cutoff: a singular value counts
/// towards the rank iff `sigma > rank_rtol * sigma_max`. `eq_atol` bounds
/// residuals of matrix and projector equalities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub rank_rtol: f64,
    pub eq_atol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_rtol: DEFAULT_RANK_RTOL,
            eq_atol: DEFAULT_EQ_ATOL,
        }
    }
}

impl ToleranceConfig {
    pub fn new(rank_rtol: f64, eq_atol: f64) -> Result<Self> {
        let open_unit = |x: f64| x > 0.0 && x < 1.0;
        if !open_unit(rank_rtol) {
            return Err(LinalgError::InvalidTolerance(format!(
                "rank_rtol must lie in (0, 1), got {rank_rtol}"
            )));
        }
        if !open_unit(eq_atol) {
            return Err(LinalgError::InvalidTolerance(format!(
                "eq_atol must lie in (0, 1), got {eq_atol}"
            )));
        }
        Ok(Self { rank_rtol, eq_atol })
    }

    pub fn with_eq_atol(self, eq_atol: f64) -> Result<Self> {
        Self::new(self.rank_rtol, eq_atol)
    }

    pub(crate) fn rtol<T: RealScalar>(&self) -> T {
        T::of(self.rank_rtol)
    }

    pub(crate) fn atol<T: RealScalar>(&self) -> T {
        T::of(self.eq_atol)
    }
}
