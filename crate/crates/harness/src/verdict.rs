use std::collections::BTreeMap;

use epkit::{CMatrix, MatrixFile, ToleranceConfig};
use serde::{Deserialize, Serialize};

/// Residual multiple of `eq_atol` beyond which a trial fails; residuals
/// between `eq_atol` and this multiple only raise a warning.
pub const FAILURE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: MatrixFile,
}

/// The lowest-indexed failing trial of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub seed: u64,
    pub detail: String,
    pub matrices: Vec<NamedMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub theorem_id: String,
    pub trials: usize,
    pub failures: usize,
    /// Largest residual among checks expected to vanish.
    pub worst_residual: f64,
    pub counterexample: Option<Counterexample>,
    pub elapsed_ms: u64,
    /// Instances on which the property was expected to hold.
    pub accepting: usize,
    /// Control instances on which it was expected to fail.
    pub rejecting: usize,
    /// Checks whose residual fell in the warning band.
    pub warnings: usize,
    /// Set when the run could not exercise both directions of the property.
    pub config_error: Option<String>,
    pub notes: Vec<String>,
    /// Named diagnostics; per-trial values are reduced by maximum.
    pub metrics: BTreeMap<String, f64>,
}

impl TheoremVerdict {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.config_error.is_none()
    }
}

/// Outcome of a single trial, built up check by check.
#[derive(Debug, Clone)]
pub(crate) struct Trial {
    atol: f64,
    pub accepting: usize,
    pub rejecting: usize,
    pub failure: Option<String>,
    pub warnings: usize,
    pub worst: f64,
    pub matrices: Vec<NamedMatrix>,
    pub metrics: BTreeMap<String, f64>,
}

impl Trial {
    pub fn new(tol: &ToleranceConfig) -> Self {
        Self {
            atol: tol.eq_atol,
            accepting: 0,
            rejecting: 0,
            failure: None,
            warnings: 0,
            worst: 0.0,
            matrices: Vec::new(),
            metrics: BTreeMap::new(),
        }
    }

    fn fail(&mut self, detail: String) {
        if self.failure.is_none() {
            self.failure = Some(detail);
        }
    }

    /// `residual` should vanish: fails above `FAILURE_FACTOR * eq_atol`.
    pub fn small(&mut self, what: &str, residual: f64) {
        self.worst = self.worst.max(if residual.is_nan() { f64::MAX } else { residual });
        if residual.is_nan() || residual > FAILURE_FACTOR * self.atol {
            self.fail(format!(
                "{what}: residual {residual:e} exceeds {:e}",
                FAILURE_FACTOR * self.atol
            ));
        } else if residual > self.atol {
            self.warnings += 1;
        }
    }

    /// `value` should be bounded away from zero: fails at or below `eq_atol`.
    pub fn large(&mut self, what: &str, value: f64) {
        if value.is_nan() || value <= self.atol {
            self.fail(format!("{what}: expected a nonzero gap, got {value:e}"));
        } else if value <= FAILURE_FACTOR * self.atol {
            self.warnings += 1;
        }
    }

    pub fn holds(&mut self, what: &str, ok: bool) {
        if !ok {
            self.fail(format!("{what}: does not hold"));
        }
    }

    pub fn keep(&mut self, name: &str, m: &CMatrix) {
        self.matrices.push(NamedMatrix {
            name: name.to_string(),
            matrix: MatrixFile::from_matrix(m),
        });
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        let e = self.metrics.entry(name.to_string()).or_insert(value);
        *e = e.max(value);
    }
}

/// Folds trials in index order into a verdict.
pub(crate) fn aggregate(theorem_id: &str, trials: Vec<(u64, Trial)>) -> TheoremVerdict {
    let mut v = TheoremVerdict {
        theorem_id: theorem_id.to_string(),
        trials: trials.len(),
        failures: 0,
        worst_residual: 0.0,
        counterexample: None,
        elapsed_ms: 0,
        accepting: 0,
        rejecting: 0,
        warnings: 0,
        config_error: None,
        notes: Vec::new(),
        metrics: BTreeMap::new(),
    };
    for (index, (seed, t)) in trials.into_iter().enumerate() {
        v.accepting += t.accepting;
        v.rejecting += t.rejecting;
        v.warnings += t.warnings;
        v.worst_residual = v.worst_residual.max(t.worst);
        for (k, x) in t.metrics {
            let e = v.metrics.entry(k).or_insert(x);
            *e = e.max(x);
        }
        if let Some(detail) = t.failure {
            v.failures += 1;
            if v.counterexample.is_none() {
                v.counterexample = Some(Counterexample {
                    trial: index,
                    seed,
                    detail,
                    matrices: t.matrices,
                });
            }
        }
    }
    if v.accepting == 0 || v.rejecting == 0 {
        v.config_error = Some(format!(
            "property needs both accepting and rejecting instances, saw {} and {}",
            v.accepting, v.rejecting
        ));
    }
    v
}
