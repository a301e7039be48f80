use epkit::ToleranceConfig;
use epkit_harness::{
    run_theorem_check, run_theorem_check_with, CheckOptions, Family, FaultInjection, GeneratorSpec, HarnessError,
    TheoremVerdict, THEOREM_IDS,
};

fn spec(seed: u64) -> GeneratorSpec {
    GeneratorSpec::new(Family::Ep, 6, 4, seed)
}

fn without_timing(mut v: TheoremVerdict) -> TheoremVerdict {
    v.elapsed_ms = 0;
    v
}

#[test]
fn reruns_are_identical() {
    let tol = ToleranceConfig::default();
    for id in ["thm2.1", "thm3.4", "thm2.16"] {
        let a = without_timing(run_theorem_check(id, &spec(42), 40, &tol).unwrap());
        let b = without_timing(run_theorem_check(id, &spec(42), 40, &tol).unwrap());
        assert_eq!(a, b, "{id}");
        assert!(a.passed(), "{a:?}");
    }
}

#[test]
fn verdict_independent_of_thread_count() {
    let tol = ToleranceConfig::default();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| without_timing(run_theorem_check("thm2.6", &spec(7), 32, &tol).unwrap()))
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn corrupted_ep_inputs_are_caught() {
    let tol = ToleranceConfig::default();
    let opts = CheckOptions {
        fault: FaultInjection::CorruptEp,
    };
    let v = run_theorem_check_with("thm2.1", &spec(3), 20, &tol, &opts).unwrap();
    assert!(!v.passed());
    assert!(v.failures > 0);
    let cx = v.counterexample.expect("a counterexample");
    // Trials are folded in index order, so the first trial is the one reported.
    assert_eq!(cx.trial, 0);
    assert!(!cx.matrices.is_empty());
    for m in &cx.matrices {
        m.matrix.to_matrix().unwrap();
    }
}

#[test]
fn loose_equality_tolerance_still_passes() {
    let tol = ToleranceConfig::new(1e-10, 1e-2).unwrap();
    for id in THEOREM_IDS {
        let v = run_theorem_check(id, &GeneratorSpec::new(Family::Ep, 8, 6, 1), 30, &tol).unwrap();
        assert!(v.passed(), "{id}: {v:?}");
    }
}

#[test]
fn unknown_and_unsupported_requests() {
    let tol = ToleranceConfig::default();
    assert!(matches!(
        run_theorem_check("thm9.9", &spec(0), 1, &tol),
        Err(HarnessError::UnknownTheorem(_))
    ));
    let tiny = GeneratorSpec::new(Family::Ep, 1, 1, 0);
    assert!(matches!(
        run_theorem_check("thm2.1", &tiny, 1, &tol),
        Err(HarnessError::InvalidSpec(_))
    ));
    let steep = spec(0).with_condition_bound(1e3);
    assert!(matches!(
        run_theorem_check("thm2.6", &steep, 1, &tol),
        Err(HarnessError::InvalidSpec(_))
    ));
    assert!(run_theorem_check("thm2.1", &steep, 4, &tol).unwrap().passed());
}

#[test]
fn zero_trials_is_a_configuration_error() {
    // Zero trials leave nothing accepted or rejected.
    let v = run_theorem_check("thm2.1", &spec(0), 0, &ToleranceConfig::default()).unwrap();
    assert!(v.config_error.is_some());
    assert!(!v.passed());
}

#[test]
fn limit_metrics_reported() {
    let tol = ToleranceConfig::default();
    let v = run_theorem_check("thm1.5", &spec(1), 10, &tol).unwrap();
    assert_eq!(v.metrics["negative_sup_pinv_norm"], 50.0);
    assert_eq!(v.metrics["negative_bounded"], 0.0);
    let v = run_theorem_check("thm3.2", &spec(1), 10, &tol).unwrap();
    assert!(v.metrics["control_exit_index"] > 0.0);
    assert!(v.metrics["control_final_gamma"] < 0.1);
}
