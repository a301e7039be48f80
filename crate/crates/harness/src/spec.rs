use std::fmt;
use std::str::FromStr;

use epkit::MAX_DIM;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Structured matrix families drawn by [`gen_matrix`](crate::gen_matrix).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `V blockdiag(A, 0) V*` with `A` invertible.
    Ep,
    /// A nilpotent 2x2 cell hidden in a random basis.
    NonEp,
    /// `V diag(d, 0) V*` with nonzero complex `d`.
    NormalEp,
    /// EP `T` and a polynomial `S = p(T)` of degree at most 3.
    CommutingPair,
    /// EP `T` and `S = c T` with `|c| <= min(a, b)`.
    PerturbationPair,
    /// Independent EP `S` and `T`.
    ProductPair,
    /// `T_k = (1 + 2^-k) T` for an EP `T`, with declared limit `T`.
    Sequence,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Ep,
        Family::NonEp,
        Family::NormalEp,
        Family::CommutingPair,
        Family::PerturbationPair,
        Family::ProductPair,
        Family::Sequence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ep => "ep",
            Family::NonEp => "non_ep",
            Family::NormalEp => "normal_ep",
            Family::CommutingPair => "commuting_pair",
            Family::PerturbationPair => "perturbation_pair",
            Family::ProductPair => "product_pair",
            Family::Sequence => "sequence",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| HarnessError::InvalidSpec(format!("unknown family `{s}`")))
    }
}

/// Dominance constants for perturbation pairs: `||S x|| <= a ||T x||` and
/// `||S* z|| <= b ||T* z||`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub a: f64,
    pub b: f64,
}

impl PerturbationSpec {
    /// Constants above this are refused; behaviour near 1 is not exercised.
    pub const MAX_CONSTANT: f64 = 0.9;

    pub fn new(a: f64, b: f64) -> Result<Self> {
        let s = Self { a, b };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b)] {
            if !(v > 0.0 && v <= Self::MAX_CONSTANT) {
                return Err(HarnessError::InvalidSpec(format!(
                    "perturbation constant {name} = {v} outside (0, {}]",
                    Self::MAX_CONSTANT
                )));
            }
        }
        Ok(())
    }
}

impl Default for PerturbationSpec {
    fn default() -> Self {
        Self { a: 0.5, b: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub dim: usize,
    pub rank: usize,
    /// Upper bound on the condition number of the invertible core block.
    pub condition_bound: f64,
    pub seed: u64,
    pub family: Family,
    #[serde(default)]
    pub perturbation: PerturbationSpec,
}

impl GeneratorSpec {
    pub const DEFAULT_CONDITION_BOUND: f64 = 100.0;

    pub fn new(family: Family, dim: usize, rank: usize, seed: u64) -> Self {
        Self {
            dim,
            rank,
            condition_bound: Self::DEFAULT_CONDITION_BOUND,
            seed,
            family,
            perturbation: PerturbationSpec::default(),
        }
    }

    pub fn with_condition_bound(mut self, bound: f64) -> Self {
        self.condition_bound = bound;
        self
    }

    pub fn with_perturbation(mut self, p: PerturbationSpec) -> Self {
        self.perturbation = p;
        self
    }

    pub fn with_family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.dim > MAX_DIM {
            return Err(HarnessError::InvalidSpec(format!(
                "dim {} outside 1..={MAX_DIM}",
                self.dim
            )));
        }
        if self.rank > self.dim {
            return Err(HarnessError::InvalidSpec(format!(
                "rank {} exceeds dim {}",
                self.rank, self.dim
            )));
        }
        if !(self.condition_bound >= 1.0 && self.condition_bound.is_finite()) {
            return Err(HarnessError::InvalidSpec(format!(
                "condition_bound {} must be finite and at least 1",
                self.condition_bound
            )));
        }
        self.perturbation.validate()
    }
}
