//! On-disk JSON form of a double-precision matrix.
//!
//! ```json
//! {"version": "1", "rows": 2, "cols": 2, "data": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}
//! ```
//!
//! `data` is row-major; every entry is `[re, im]`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{LinalgError, Result};
use crate::matrix::ComplexMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub version: String,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub const VERSION: &'static str = "1";

    pub fn from_matrix(m: &ComplexMatrix<f64>) -> Self {
        Self {
            version: Self::VERSION.to_string(),
            rows: m.rows(),
            cols: m.cols(),
            data: (0..m.rows())
                .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    /// Validates version, shape and finiteness, then builds the matrix.
    pub fn to_matrix(&self) -> Result<ComplexMatrix<f64>> {
        if self.version != Self::VERSION {
            return Err(LinalgError::InvalidFormat(format!(
                "unsupported version {:?}, expected {:?}",
                self.version,
                Self::VERSION
            )));
        }
        if self.rows == 0 || self.cols == 0 {
            return Err(LinalgError::InvalidFormat(format!(
                "rows and cols must be positive, got {}x{}",
                self.rows, self.cols
            )));
        }
        if self.data.len() != self.rows {
            return Err(LinalgError::InvalidFormat(format!(
                "declared {} rows but data has {}",
                self.rows,
                self.data.len()
            )));
        }
        if let Some(i) = self.data.iter().position(|r| r.len() != self.cols) {
            return Err(LinalgError::InvalidFormat(format!(
                "row {i} has {} entries, expected {}",
                self.data[i].len(),
                self.cols
            )));
        }
        let flat = self
            .data
            .iter()
            .flatten()
            .map(|&[re, im]| Complex::new(re, im))
            .collect();
        ComplexMatrix::try_new(self.rows, self.cols, flat)
    }
}
