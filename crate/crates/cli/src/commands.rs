use std::fs;
use std::path::Path;
use std::time::Instant;

use epkit::{classify, limit_study, FamilyId, MatrixFile, ModelFamily, ToleranceConfig};
use epkit_harness::{
    run_theorem_check_with, CheckOptions, Family, FaultInjection, GeneratorSpec, HarnessError, TheoremVerdict,
    THEOREM_IDS,
};

use crate::args::{Cli, Command, RunArgs};
use crate::report::{LimitStudy, Payload, ReportFile, SuiteReport};

/// Usage and input errors; the process exits with status 2 and writes no report.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {reason}")]
    Input { path: String, reason: String },
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub fn execute(cli: &Cli) -> Result<ReportFile, CliError> {
    let start = Instant::now();
    let tol =
        ToleranceConfig::new(cli.common.tol_rank, cli.common.tol_eq).map_err(|e| CliError::Usage(e.to_string()))?;
    let payload = match &cli.command {
        Command::Classify { input } => Payload::Classification(cmd_classify(input, &tol)?),
        Command::Verify {
            theorem_id,
            theorem,
            run,
        } => {
            let id = theorem_id.as_deref().or(theorem.as_deref()).unwrap_or_default();
            Payload::Verdict(cmd_verify(id, run, &tol)?)
        }
        Command::Suite { run } => Payload::Suite(cmd_suite(run, &tol)?),
        Command::Model {
            family_id,
            family,
            n_max,
        } => {
            let id = family_id.as_deref().or(family.as_deref()).unwrap_or_default();
            Payload::LimitStudy(cmd_model(id, *n_max, &tol)?)
        }
    };
    let mut report = ReportFile::new(tol, payload);
    if cli.common.timing {
        report.wall_time_ms = start.elapsed().as_millis() as u64;
    } else {
        strip_timing(&mut report.payload);
    }
    Ok(report)
}

fn strip_timing(payload: &mut Payload) {
    match payload {
        Payload::Verdict(v) => v.elapsed_ms = 0,
        Payload::Suite(s) => s.verdicts.iter_mut().for_each(|v| v.elapsed_ms = 0),
        Payload::Classification(_) | Payload::LimitStudy(_) => {}
    }
}

pub fn cmd_classify(input: &Path, tol: &ToleranceConfig) -> Result<epkit::ClassificationReport, CliError> {
    let fail = |reason: String| CliError::Input {
        path: input.display().to_string(),
        reason,
    };
    let text = fs::read_to_string(input).map_err(|e| fail(e.to_string()))?;
    let file: MatrixFile = serde_json::from_str(&text).map_err(|e| fail(e.to_string()))?;
    let m = file.to_matrix().map_err(|e| fail(e.to_string()))?;
    classify(&m, tol).map_err(|e| fail(e.to_string()))
}

fn spec_of(run: &RunArgs) -> GeneratorSpec {
    GeneratorSpec::new(Family::Ep, run.dim, run.rank(), run.seed)
}

fn options_of(run: &RunArgs) -> CheckOptions {
    CheckOptions {
        fault: if run.inject_fault {
            FaultInjection::CorruptEp
        } else {
            FaultInjection::None
        },
    }
}

pub fn cmd_verify(id: &str, run: &RunArgs, tol: &ToleranceConfig) -> Result<TheoremVerdict, CliError> {
    Ok(run_theorem_check_with(
        id,
        &spec_of(run),
        run.trials,
        tol,
        &options_of(run),
    )?)
}

pub fn cmd_suite(run: &RunArgs, tol: &ToleranceConfig) -> Result<SuiteReport, CliError> {
    let spec = spec_of(run);
    let verdicts = THEOREM_IDS
        .iter()
        .map(|id| run_theorem_check_with(id, &spec, run.trials, tol, &options_of(run)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SuiteReport {
        seed: run.seed,
        dim: spec.dim,
        rank: spec.rank,
        trials: run.trials,
        passed: verdicts.iter().all(TheoremVerdict::passed),
        verdicts,
    })
}

pub fn cmd_model(id: &str, n_max: usize, tol: &ToleranceConfig) -> Result<LimitStudy, CliError> {
    let family: FamilyId = id.parse().map_err(|_| {
        let known: Vec<&str> = FamilyId::ALL.iter().map(|f| f.name()).collect();
        CliError::Usage(format!(
            "unknown model family `{id}`; expected one of {}",
            known.join(", ")
        ))
    })?;
    if n_max > epkit::MAX_DIM {
        return Err(CliError::Usage(format!("n_max must be at most {}", epkit::MAX_DIM)));
    }
    let rows = limit_study(&ModelFamily::new(family), n_max, tol).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(LimitStudy { family, n_max, rows })
}
