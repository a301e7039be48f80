mod common;

use common::*;
use epkit::{
    carrier_basis, classify, commutator_residual, is_ep, is_hypo_ep, is_normal, limit_study, range_basis,
    reduced_min_modulus, subspace_eq, CMatrix, Complex, FamilyId, LinalgError, ModelFamily, ToleranceConfig,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

/// `V blockdiag(A, 0) V*` with unitary `V` and invertible `A`: range and
/// adjoint range are both `V (C^k + 0)`.
fn ep_instance(r: &mut ChaCha8Rng, n: usize, k: usize) -> CMatrix {
    let v = random_unitary(r, n);
    let a = random_matrix(r, k, k);
    let block = CMatrix::from_fn(n, n, |i, j| {
        if i < k && j < k {
            a[(i, j)]
        } else {
            Complex::new(0.0, 0.0)
        }
    });
    &(&v * &block) * &v.adjoint()
}

/// A nilpotent cell hidden in a random basis.
fn non_ep_instance(r: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let v = random_unitary(r, n);
    let mut block = CMatrix::zeros(n, n);
    block[(0, 1)] = Complex::new(1.0 + r.random_range(0.0..1.0), 0.0);
    for i in 2..n.min(4) {
        block[(i, i)] = Complex::new(1.0, 0.5);
    }
    &(&v * &block) * &v.adjoint()
}

#[test]
fn block_construction_is_ep() {
    let mut r = rng(51);
    for _ in 0..30 {
        let m = ep_instance(&mut r, 5, 3);
        assert!(is_ep(&m, &tol()).unwrap());
        assert!(is_hypo_ep(&m, &tol()).unwrap());
        assert!(commutator_residual(&m, &tol()).unwrap() <= 1e-8);
        assert!(subspace_eq(
            &range_basis(&m, &tol()).unwrap(),
            &carrier_basis(&m, &tol()).unwrap(),
            &tol()
        )
        .unwrap());
    }
}

#[test]
fn hidden_nilpotent_is_not_ep() {
    let mut r = rng(52);
    for n in [2, 3, 5, 8] {
        let m = non_ep_instance(&mut r, n);
        assert!(!is_ep(&m, &tol()).unwrap());
        assert!(!is_hypo_ep(&m, &tol()).unwrap());
        assert!(commutator_residual(&m, &tol()).unwrap() > 1e-8);
        let report = classify(&m, &tol()).unwrap();
        assert!(report.commutator_agrees);
        assert!(report.range_gap > 1e-8);
    }
}

#[test]
fn ep_invariant_under_adjoint_and_hypo_collapse() {
    let mut r = rng(53);
    for t in 0..40 {
        let m = if t % 2 == 0 {
            ep_instance(&mut r, 6, 1 + t % 5)
        } else {
            non_ep_instance(&mut r, 6)
        };
        let ep = is_ep(&m, &tol()).unwrap();
        assert_eq!(ep, is_ep(&m.adjoint(), &tol()).unwrap());
        assert_eq!(ep, is_hypo_ep(&m, &tol()).unwrap());
        assert_eq!(ep, t % 2 == 0);
    }
}

#[test]
fn hermitian_and_unitary_are_normal() {
    let mut r = rng(54);
    for _ in 0..10 {
        let h = random_hermitian(&mut r, 5);
        assert!(is_normal(&h, &tol()).unwrap());
        assert!(is_ep(&h, &tol()).unwrap());
        let u = random_unitary(&mut r, 5);
        assert!(is_normal(&u, &tol()).unwrap());
    }
    let rot = CMatrix::from_real_rows(&[[0.0, -1.0], [1.0, 0.0]]);
    assert!(is_normal(&rot, &tol()).unwrap());
    let jordan = CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
    assert!(!is_normal(&jordan, &tol()).unwrap());
}

#[test]
fn report_invariants() {
    let mut r = rng(55);
    for t in 0..20 {
        let m = if t % 2 == 0 {
            ep_instance(&mut r, 4, 2)
        } else {
            non_ep_instance(&mut r, 4)
        };
        let rep = classify(&m, &tol()).unwrap();
        assert!(!rep.is_ep || rep.is_hypo_ep);
        assert!(!rep.is_normal || rep.is_ep);
        assert_eq!(rep.is_ep, rep.commutator_residual <= tol().eq_atol);
        assert_eq!(rep.dim, 4);
        assert!((rep.gamma - reduced_min_modulus(&m, &tol()).unwrap()).abs() <= 1e-15);
    }
}

#[test]
fn classify_rejects_rectangular() {
    let m = CMatrix::zeros(2, 3);
    assert!(matches!(classify(&m, &tol()), Err(LinalgError::NotSquare { .. })));
    assert!(is_ep(&m, &tol()).is_err());
    assert!(is_normal(&m, &tol()).is_err());
}

#[test]
fn zero_operator_flag() {
    let rep = classify(&CMatrix::zeros(3, 3), &tol()).unwrap();
    assert!(rep.zero_operator);
    assert_eq!(rep.gamma, 0.0);
    assert_eq!(rep.rank, 0);
    assert!(rep.is_ep);
}

#[test]
fn model_families_are_normal_and_exact() {
    for id in FamilyId::ALL {
        for n in [1, 2, 7, 20] {
            let m: CMatrix = ModelFamily::new(id).realize(n).unwrap();
            assert!(is_normal(&m, &tol()).unwrap());
            assert!(is_ep(&m, &tol()).unwrap());
            let min = id.entries(n).into_iter().fold(f64::INFINITY, f64::min);
            assert!((reduced_min_modulus(&m, &tol()).unwrap() - min).abs() <= 1e-14);
        }
    }
}

#[test]
fn harmonic_truncation_study() {
    let rows = limit_study(&ModelFamily::new(FamilyId::DiagHarmonicTruncated), 50, &tol()).unwrap();
    assert_eq!(rows.len(), 50);
    for row in &rows {
        let n = row.n as f64;
        assert!(row.is_ep);
        assert!((row.gamma - 1.0 / n).abs() <= 1e-14);
        assert!((row.pinv_norm - n).abs() <= 1e-12);
        assert_eq!(row.spectral_radius, 1.0);
    }
}

#[test]
fn alternating_study_decays_on_odd_slots() {
    let rows = limit_study(&ModelFamily::new(FamilyId::DiagAlternating), 10, &tol()).unwrap();
    for row in &rows {
        let min = FamilyId::DiagAlternating
            .entries(row.n)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        assert!((row.gamma - min).abs() <= 1e-14);
    }
    assert!((rows[9].gamma - 1.0 / 9.0).abs() <= 1e-14);
}
