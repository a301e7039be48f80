//! Seeded generators of structured complex matrices and a table of property
//! verifiers for EP matrices.
//!
//! ```
//! use epkit::ToleranceConfig;
//! use epkit_harness::{run_theorem_check, Family, GeneratorSpec};
//!
//! let spec = GeneratorSpec::new(Family::Ep, 6, 4, 42);
//! let verdict = run_theorem_check("thm2.1", &spec, 20, &ToleranceConfig::default()).unwrap();
//! assert!(verdict.passed());
//! ```

mod dominance;
mod error;
pub mod generate;
mod runner;
mod spec;
mod verdict;
mod verifiers;

pub use dominance::{dominance_margin, psd_dominates};
pub use error::{HarnessError, Result};
pub use generate::{gen_matrix, trial_seed, EpParts, Generated, SEQUENCE_LENGTH};
pub use runner::{run_theorem_check, run_theorem_check_with, theorem_table, CheckOptions, TheoremEntry, THEOREM_IDS};
pub use spec::{Family, GeneratorSpec, PerturbationSpec};
pub use verdict::{Counterexample, NamedMatrix, TheoremVerdict, FAILURE_FACTOR};
pub use verifiers::{bounded_over_window, ep_residual, FaultInjection, CONVERGENCE_TOL, E_DELTA};
