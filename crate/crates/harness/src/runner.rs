use std::time::Instant;

use epkit::ToleranceConfig;
use rayon::prelude::*;

use crate::error::{HarnessError, Result};
use crate::generate::{rng_from_seed, trial_seed};
use crate::spec::GeneratorSpec;
use crate::verdict::{aggregate, TheoremVerdict, Trial};
use crate::verifiers::{self, Ctx, FaultInjection, HarmonicWindow, Verifier, E_DELTA};

/// One row of the dispatch table.
pub struct TheoremEntry {
    pub id: &'static str,
    pub summary: &'static str,
    verifier: Verifier,
    notes: &'static [&'static str],
}

const TABLE: [TheoremEntry; 15] = [
    TheoremEntry {
        id: "thm1.5",
        summary: "for T_k -> T: T_k† -> T†, T_k†T_k -> T†T and bounded ||T_k†|| hold or fail together",
        verifier: verifiers::pinv_convergence,
        notes: &[
            "positive sequences are T_k = (1 + 2^-k) T; the rejecting sequence is diag(1, 1/2, ..., 1/k, 0, ...) for k <= 50",
            "convergence of T_k† is tested against T†",
        ],
    },
    TheoremEntry {
        id: "thm2.1",
        summary: "T is EP iff T† T = T T†",
        verifier: verifiers::commutator_equivalence,
        notes: &[],
    },
    TheoremEntry {
        id: "thm2.2",
        summary: "T1 + T2 (direct sum) is EP iff both blocks are; pseudoinverse and gamma act blockwise",
        verifier: verifiers::direct_sum_ep,
        notes: &[],
    },
    TheoremEntry {
        id: "thm2.3",
        summary: "T is EP iff the partial isometry of its polar decomposition is EP",
        verifier: verifiers::polar_isometry,
        notes: &[],
    },
    TheoremEntry {
        id: "thm2.4",
        summary: "T is EP iff R(T) = N(T)^perp",
        verifier: verifiers::range_equals_carrier,
        notes: &[],
    },
    TheoremEntry {
        id: "thm2.5",
        summary: "for EP T: S T = T S iff S T† = T† S",
        verifier: verifiers::commutant_transfer,
        notes: &["commuting operators are polynomials in T, or block-diagonal in the frame of T for the converse"],
    },
    TheoremEntry {
        id: "thm2.6",
        summary: "T is EP iff every power T^n is EP; for EP T, R(T^n) = R(T) and (T^n)† = (T†)^n",
        verifier: verifiers::powers,
        notes: &["the rejecting direction tests n = 1..4 jointly; a single power n >= 2 of a non-EP matrix can be EP"],
    },
    TheoremEntry {
        id: "thm2.7",
        summary: "for EP T the nonzero spectrum is the spectrum of the carrier compression, which is invertible",
        verifier: verifiers::spectral_compression,
        notes: &["resolvent norm bounds are not checked, only the spectral sets"],
    },
    TheoremEntry {
        id: "thm2.12",
        summary: "for EP S, T: ST is EP iff R(ST) = R(T) and N(ST) = N(T)",
        verifier: verifiers::product_ep,
        notes: &[
            "the matrix-representation hypothesis on T* is vacuous for matrices and omitted",
            "EP => conditions is checked on shared-frame products; it fails in general (S = 0)",
        ],
    },
    TheoremEntry {
        id: "thm2.13",
        summary: "R(|T|^a) = R(|T|) for all a > 0, and equals R(T) for EP T",
        verifier: verifiers::fractional_ranges,
        notes: &["exponents 0.25, 0.5, 1, 1.5, 2, 3"],
    },
    TheoremEntry {
        id: "thm2.15",
        summary: "R(T) = R(|T|) = R(|T|^a) for some a in (0, 1) implies T is EP",
        verifier: verifiers::fractional_converse,
        notes: &["a = 1/2"],
    },
    TheoremEntry {
        id: "thm2.16",
        summary: "EP T, S with S*S <= a^2 T*T: T + S is hypo-EP, and EP under the adjoint bound too",
        verifier: verifiers::perturbation,
        notes: &["hypo-EP and EP coincide for matrices, so both are reported through the same range test"],
    },
    TheoremEntry {
        id: "thm2.19",
        summary: "T is EP iff T (I - T T†) = 0 and T* (I - T* (T*)†) = 0",
        verifier: verifiers::projector_identities,
        notes: &[],
    },
    TheoremEntry {
        id: "thm3.2",
        summary: "norm limits of EP operators with gamma >= delta are EP with gamma >= delta",
        verifier: verifiers::e_delta_closed,
        notes: &["delta = 0.1; sequences of length 50 with T_k = V_k blockdiag((1 + 2^-k) A, 0) V_k*"],
    },
    TheoremEntry {
        id: "thm3.4",
        summary: "for EP T: gamma(T) <= r(T), and gamma(T^n) <= ||T||^(n-1) gamma(T)",
        verifier: verifiers::gamma_below_radius,
        notes: &["control: the nilpotent cell [[0, 1], [0, 0]] is not EP and has gamma = 1 > r = 0"],
    },
];

/// Every id accepted by [`run_theorem_check`], in table order.
pub const THEOREM_IDS: [&str; 15] = [
    "thm1.5", "thm2.1", "thm2.2", "thm2.3", "thm2.4", "thm2.5", "thm2.6", "thm2.7", "thm2.12", "thm2.13", "thm2.15",
    "thm2.16", "thm2.19", "thm3.2", "thm3.4",
];

pub fn theorem_table() -> &'static [TheoremEntry] {
    &TABLE
}

fn lookup(id: &str) -> Result<&'static TheoremEntry> {
    TABLE
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| HarnessError::UnknownTheorem(id.to_string()))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckOptions {
    pub fault: FaultInjection,
}

/// Rejects specs a verifier cannot run meaningfully.
fn check_spec(id: &str, spec: &GeneratorSpec, tol: &ToleranceConfig) -> Result<()> {
    spec.validate()?;
    let invalid = |msg: String| Err(HarnessError::InvalidSpec(msg));
    if spec.dim < 2 {
        return invalid("dim must be at least 2 so that non-EP controls exist".into());
    }
    // Powers of the core block must keep their rank under the cutoff.
    let max_power = match id {
        "thm2.6" => 4,
        "thm3.4" => 3,
        _ => 1,
    };
    if spec.condition_bound.powi(max_power) * 10.0 > 1.0 / tol.rank_rtol {
        return invalid(format!(
            "condition_bound {} too large: its power {max_power} approaches the rank cutoff {}",
            spec.condition_bound, tol.rank_rtol
        ));
    }
    match id {
        "thm2.2" if 2 * spec.dim > epkit::MAX_DIM => invalid(format!("direct sums need 2 * dim <= {}", epkit::MAX_DIM)),
        "thm3.2" if spec.rank == 0 => invalid(format!("sequences in E_{E_DELTA} need rank >= 1")),
        _ => Ok(()),
    }
}

pub fn run_theorem_check(
    theorem_id: &str,
    spec: &GeneratorSpec,
    trials: usize,
    tol: &ToleranceConfig,
) -> Result<TheoremVerdict> {
    run_theorem_check_with(theorem_id, spec, trials, tol, &CheckOptions::default())
}

/// Runs `trials` independent trials in parallel. Trial `i` draws from the seed
/// `trial_seed(spec.seed, i)`, so the verdict does not depend on scheduling.
pub fn run_theorem_check_with(
    theorem_id: &str,
    spec: &GeneratorSpec,
    trials: usize,
    tol: &ToleranceConfig,
    options: &CheckOptions,
) -> Result<TheoremVerdict> {
    let entry = lookup(theorem_id)?;
    check_spec(theorem_id, spec, tol)?;
    let start = Instant::now();
    let harmonic = HarmonicWindow::compute(tol)?;
    let ctx = Ctx {
        spec,
        tol,
        fault: options.fault,
        harmonic: &harmonic,
    };
    let results: Vec<(u64, Trial)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(spec.seed, i as u64);
            let mut rng = rng_from_seed(seed);
            let mut trial = Trial::new(tol);
            if let Err(e) = (entry.verifier)(&ctx, &mut rng, &mut trial) {
                trial.holds(&format!("trial completed without error ({e})"), false);
            }
            (seed, trial)
        })
        .collect();
    let mut verdict = aggregate(entry.id, results);
    verdict.notes = entry.notes.iter().map(|s| s.to_string()).collect();
    match theorem_id {
        "thm1.5" => {
            verdict
                .metrics
                .insert("negative_sup_pinv_norm".into(), harmonic.sup_pinv_norm());
            verdict
                .metrics
                .insert("negative_bounded".into(), f64::from(u8::from(harmonic.bounded())));
            let last = |v: &[f64]| v.last().copied().unwrap_or(0.0);
            verdict
                .metrics
                .insert("negative_last_pinv_step".into(), last(&harmonic.pinv_steps));
            verdict
                .metrics
                .insert("negative_last_projector_step".into(), last(&harmonic.projector_steps));
            verdict
                .metrics
                .insert("negative_last_operator_step".into(), last(&harmonic.operator_steps));
        }
        "thm3.2" => {
            let exit = harmonic.exit_index(E_DELTA).map_or(0.0, |k| k as f64);
            verdict.metrics.insert("control_exit_index".into(), exit);
            verdict
                .metrics
                .insert("control_final_gamma".into(), *harmonic.gammas.last().unwrap_or(&0.0));
        }
        _ => {}
    }
    verdict.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::Family;

    #[test]
    fn table_and_ids_agree() {
        let ids: Vec<&str> = TABLE.iter().map(|e| e.id).collect();
        assert_eq!(ids, THEOREM_IDS);
    }

    #[test]
    fn unknown_id() {
        let spec = GeneratorSpec::new(Family::Ep, 4, 2, 0);
        assert!(matches!(
            run_theorem_check("thm9.9", &spec, 1, &ToleranceConfig::default()),
            Err(HarnessError::UnknownTheorem(_))
        ));
    }

    #[test]
    fn spec_requirements() {
        let tol = ToleranceConfig::default();
        let tiny = GeneratorSpec::new(Family::Ep, 1, 1, 0);
        assert!(matches!(
            run_theorem_check("thm2.1", &tiny, 1, &tol),
            Err(HarnessError::InvalidSpec(_))
        ));
        let stiff = GeneratorSpec::new(Family::Ep, 4, 2, 0).with_condition_bound(1e3);
        assert!(run_theorem_check("thm2.6", &stiff, 1, &tol).is_err());
        assert!(run_theorem_check("thm3.4", &stiff, 1, &tol).is_ok());
        let flat = GeneratorSpec::new(Family::Ep, 4, 0, 0);
        assert!(run_theorem_check("thm3.2", &flat, 1, &tol).is_err());
    }
}
