//! Test-only oracles, independent of the kernels under test.
#![allow(dead_code)]

use epkit::{CMatrix, Complex, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Random matrix of exact rank `rank` as a product of thin random factors.
pub fn random_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize, rank: usize) -> CMatrix {
    let a = random_matrix(rng, rows, rank);
    let b = random_matrix(rng, rank, cols);
    naive_product(&a, &b)
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let a = random_matrix(rng, n, n);
    &a + &a.adjoint()
}

/// Unitary from modified Gram-Schmidt on a random square matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let a = random_matrix(rng, n, n);
    let cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    CMatrix::from_columns(n, &gram_schmidt(&cols))
}

pub fn naive_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.cols(), b.rows());
    let mut out = CMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = Complex::new(0.0, 0.0);
            for k in 0..a.cols() {
                acc += a[(i, k)] * b[(k, j)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Modified Gram-Schmidt, dropping vectors that are numerically dependent.
pub fn gram_schmidt(vectors: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = inner(q, &w);
                for (x, y) in w.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let n = norm(&w);
        if n > 1e-10 * norm(v).max(1e-300) {
            out.push(w.into_iter().map(|z| z / n).collect());
        }
    }
    out
}

/// Distance between `V V*` for two orthonormal column sets, via explicit projectors.
pub fn projector_from_columns(n: usize, cols: &[Vec<C64>]) -> CMatrix {
    let mut p = CMatrix::zeros(n, n);
    for c in cols {
        for i in 0..n {
            for j in 0..n {
                p[(i, j)] += c[i] * c[j].conj();
            }
        }
    }
    p
}

/// Largest singular value by power iteration on `M* M`, independent of the Jacobi kernel.
pub fn power_norm(m: &CMatrix) -> f64 {
    let n = m.cols();
    let mut v: Vec<C64> = (0..n)
        .map(|k| Complex::new(1.0 + k as f64 * 0.37, 0.11 * k as f64))
        .collect();
    let g = naive_product(&m.adjoint(), m);
    let mut lambda = 0.0;
    for _ in 0..5000 {
        let w = g.mul_vec(&v);
        let nw = norm(&w);
        if nw == 0.0 {
            return 0.0;
        }
        let next = nw / norm(&v);
        v = w.into_iter().map(|z| z / nw).collect();
        if (next - lambda).abs() <= 1e-15 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.sqrt()
}

/// Characteristic polynomial coefficients `c_0..c_n` (monic, `c_n = 1`) by
/// Faddeev-LeVerrier.
pub fn char_poly(a: &CMatrix) -> Vec<C64> {
    let n = a.rows();
    let mut c = vec![Complex::new(0.0, 0.0); n + 1];
    c[n] = Complex::new(1.0, 0.0);
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = naive_product(a, &m);
        for i in 0..n {
            next[(i, i)] += c[n - k + 1];
        }
        m = next;
        let am = naive_product(a, &m);
        let tr: C64 = (0..n).map(|i| am[(i, i)]).sum();
        c[n - k] = -tr / k as f64;
    }
    c
}

fn horner(c: &[C64], z: C64) -> C64 {
    c.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &x| acc * z + x)
}

fn horner_deriv(c: &[C64], z: C64) -> C64 {
    let n = c.len() - 1;
    (1..=n)
        .rev()
        .fold(Complex::new(0.0, 0.0), |acc, k| acc * z + c[k] * k as f64)
}

/// Roots of a monic polynomial by Durand-Kerner, polished with Newton steps.
pub fn poly_roots(c: &[C64]) -> Vec<C64> {
    let n = c.len() - 1;
    let bound = 1.0 + c[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let seed = Complex::new(0.4, 0.9);
    let mut z: Vec<C64> = (0..n).map(|k| seed.powu(k as u32) * bound).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = horner(c, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let d = horner_deriv(c, *zi);
            if d.norm() > 0.0 {
                *zi -= horner(c, *zi) / d;
            }
        }
    }
    z
}

/// Bottleneck-style greedy matching distance between two multisets.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| b_key(a[j]).total_cmp(&b_key(a[i])));
    for i in order {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, z)| (k, (a[i] - z).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("same length");
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

fn b_key(z: C64) -> f64 {
    z.norm()
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).max_abs()
}
