//! Eigenvalue kernels.
//!
//! [`hermitian_eig`] runs cyclic complex Jacobi rotations and returns a full
//! unitary eigenbasis. [`eigenvalues`] handles general square matrices:
//! Householder reduction to upper Hessenberg form followed by single-shift
//! complex QR iterations with Wilkinson shifts and deflation.

use num_complex::Complex;

use crate::error::{LinalgError, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::{cabs2, phase, sign_nonzero, RealScalar};
use crate::svd::operator_norm;
use crate::tolerance::ToleranceConfig;

const MAX_JACOBI_SWEEPS: usize = 100;
const QR_ITERATIONS_PER_EIGENVALUE: usize = 60;

/// Eigen-decomposition `H = Q diag(lambda) Q*` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen<T: RealScalar> {
    /// Real eigenvalues in non-increasing order.
    pub eigenvalues: Vec<T>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: RealScalar> HermitianEigen<T> {
    /// `Q diag(f(lambda)) Q*`.
    pub fn apply_function(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let q = &self.eigenvectors;
        let n = q.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == T::zero() {
                continue;
            }
            for i in 0..n {
                let a = q[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * q[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Eigenvalues and eigenvectors of a Hermitian matrix.
///
/// Fails with [`LinalgError::NotHermitian`] when
/// `||H - H*||_2 > eq_atol (1 + ||H||_2)`. The Hermitian part `(H + H*)/2` is
/// what gets diagonalized.
pub fn hermitian_eig<T: RealScalar>(h: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<HermitianEigen<T>> {
    if !h.is_square() {
        return Err(LinalgError::NotSquare {
            op: "hermitian_eig",
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let skew = operator_norm(&(h - &h.adjoint()));
    let bound = tol.atol::<T>() * (T::one() + operator_norm(h));
    if skew > bound {
        return Err(LinalgError::NotHermitian {
            residual: skew.to_f64_lossy(),
        });
    }
    let n = h.rows();
    let half = T::of(0.5);
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * half);
    let mut q = ComplexMatrix::<T>::identity(n);

    let eps = T::epsilon();
    let mut converged = false;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q_idx in (p + 1)..n {
                let apq = a[(p, q_idx)];
                let b = apq.norm();
                let app = a[(p, p)].re;
                let aqq = a[(q_idx, q_idx)].re;
                if b == T::zero() || b <= eps * (app.abs() * aqq.abs()).sqrt() {
                    continue;
                }
                rotated = true;
                // Reduce the 2x2 block to real symmetric form with a phase, then
                // apply the symmetric Schur rotation.
                let ph = phase(apq);
                let tau = (aqq - app) / (T::of(2.0) * b);
                let t = sign_nonzero(tau) / (tau.abs() + tau.hypot(T::one()));
                let c = T::one() / t.hypot(T::one());
                let s = c * t;
                // G = [[c, s], [-s conj(ph), c conj(ph)]]
                let g00 = Complex::new(c, T::zero());
                let g01 = Complex::new(s, T::zero());
                let g10 = ph.conj() * (-s);
                let g11 = ph.conj() * c;
                for i in 0..n {
                    let x = a[(i, p)];
                    let y = a[(i, q_idx)];
                    a[(i, p)] = x * g00 + y * g10;
                    a[(i, q_idx)] = x * g01 + y * g11;
                }
                for j in 0..n {
                    let x = a[(p, j)];
                    let y = a[(q_idx, j)];
                    a[(p, j)] = g00.conj() * x + g10.conj() * y;
                    a[(q_idx, j)] = g01.conj() * x + g11.conj() * y;
                }
                a[(p, q_idx)] = Complex::new(T::zero(), T::zero());
                a[(q_idx, p)] = Complex::new(T::zero(), T::zero());
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q_idx, q_idx)] = Complex::new(a[(q_idx, q_idx)].re, T::zero());
                for i in 0..n {
                    let x = q[(i, p)];
                    let y = q[(i, q_idx)];
                    q[(i, p)] = x * g00 + y * g10;
                    q[(i, q_idx)] = x * g01 + y * g11;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::ConvergenceFailure {
            routine: "hermitian jacobi",
            iterations: MAX_JACOBI_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .re
            .partial_cmp(&a[(i, i)].re)
            .expect("finite eigenvalues")
            .then(i.cmp(&j))
    });
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| q[(i, order[j])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// All `n` eigenvalues of a square matrix, with multiplicity.
///
/// Ordered by non-increasing modulus, ties broken by real then imaginary
/// part. Deterministic for fixed input.
pub fn eigenvalues<T: RealScalar>(m: &ComplexMatrix<T>, _tol: &ToleranceConfig) -> Result<Vec<Complex<T>>> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            op: "eigenvalues",
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut h = hessenberg(m);
    shifted_qr(&mut h)?;
    let mut lambdas: Vec<Complex<T>> = (0..n).map(|i| h[(i, i)]).collect();
    lambdas.sort_by(|a, b| {
        b.norm()
            .partial_cmp(&a.norm())
            .expect("finite eigenvalues")
            .then(a.re.partial_cmp(&b.re).expect("finite"))
            .then(a.im.partial_cmp(&b.im).expect("finite"))
    });
    Ok(lambdas)
}

/// Householder reduction to upper Hessenberg form (similarity transform).
pub(crate) fn hessenberg<T: RealScalar>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = m.rows();
    let mut h = m.clone();
    if n < 3 {
        return h;
    }
    for k in 0..n - 2 {
        let x: Vec<Complex<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|&z| cabs2(z)).sum::<T>().sqrt();
        if xnorm == T::zero() {
            continue;
        }
        let tail: T = x[1..].iter().map(|&z| cabs2(z)).sum();
        if tail == T::zero() {
            continue;
        }
        // v = x + e^{i arg x0} ||x|| e1, reflector I - 2 v v* / (v* v)
        let alpha = phase(x[0]) * xnorm;
        let mut v = x;
        v[0] = v[0] + alpha;
        let vnorm2: T = v.iter().map(|&z| cabs2(z)).sum();
        let two_over = T::of(2.0) / vnorm2;
        // left: H[k+1.., :] -= v (2/v*v) (v* H[k+1.., :])
        for j in 0..n {
            let mut s = Complex::new(T::zero(), T::zero());
            for (idx, &vi) in v.iter().enumerate() {
                s = s + vi.conj() * h[(k + 1 + idx, j)];
            }
            let s = s * two_over;
            for (idx, &vi) in v.iter().enumerate() {
                h[(k + 1 + idx, j)] = h[(k + 1 + idx, j)] - vi * s;
            }
        }
        // right: H[:, k+1..] -= (H[:, k+1..] v) (2/v*v) v*
        for i in 0..n {
            let mut s = Complex::new(T::zero(), T::zero());
            for (idx, &vi) in v.iter().enumerate() {
                s = s + h[(i, k + 1 + idx)] * vi;
            }
            let s = s * two_over;
            for (idx, &vi) in v.iter().enumerate() {
                h[(i, k + 1 + idx)] = h[(i, k + 1 + idx)] - s * vi.conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex::new(T::zero(), T::zero());
        }
    }
    h
}

/// Reduces an upper Hessenberg matrix to upper triangular form in place.
fn shifted_qr<T: RealScalar>(h: &mut ComplexMatrix<T>) -> Result<()> {
    let n = h.rows();
    if n == 0 {
        return Ok(());
    }
    let eps = T::epsilon();
    let zero = Complex::new(T::zero(), T::zero());
    let budget = QR_ITERATIONS_PER_EIGENVALUE * n.max(1);
    let norm_scale = h.max_abs();
    let mut total_iters = 0usize;
    let mut iters_since_deflation = 0usize;
    let mut hi = n - 1;
    while hi > 0 {
        // Locate the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if diag == T::zero() {
                diag = norm_scale;
            }
            if sub <= eps * diag || sub <= T::min_positive_value() {
                h[(lo, lo - 1)] = zero;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iters_since_deflation = 0;
            continue;
        }
        total_iters += 1;
        iters_since_deflation += 1;
        if total_iters > budget {
            return Err(LinalgError::ConvergenceFailure {
                routine: "shifted qr",
                iterations: budget,
            });
        }

        let a = h[(hi - 1, hi - 1)];
        let b = h[(hi - 1, hi)];
        let c = h[(hi, hi - 1)];
        let d = h[(hi, hi)];
        let shift = if iters_since_deflation % 11 == 10 {
            // Exceptional shift to break cycles.
            d + Complex::new(h[(hi, hi - 1)].norm() * T::of(0.75), T::zero())
        } else {
            wilkinson_shift(a, b, c, d)
        };

        for i in lo..=hi {
            h[(i, i)] = h[(i, i)] - shift;
        }
        // QR of the active block by Givens rotations, then RQ.
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (cs, sn) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * cs + y * sn;
                h[(k + 1, j)] = -(sn.conj()) * x + y * cs;
            }
            rotations.push((cs, sn));
        }
        for (offset, &(cs, sn)) in rotations.iter().enumerate() {
            let k = lo + offset;
            let top = (k + 2).min(hi);
            for i in lo..=top {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * cs + y * sn.conj();
                h[(i, k + 1)] = -(sn * x) + y * cs;
            }
        }
        for i in lo..=hi {
            h[(i, i)] = h[(i, i)] + shift;
        }
    }
    Ok(())
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift<T: RealScalar>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let half = T::of(0.5);
    let mean = (a + d) * half;
    let diff = (a - d) * half;
    let disc = (diff * diff + b * c).sqrt();
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Rotation `(c, s)` with real `c` such that
/// `[[c, s], [-conj(s), c]] [x, y]^T = [r, 0]^T`.
fn givens<T: RealScalar>(x: Complex<T>, y: Complex<T>) -> (T, Complex<T>) {
    let ny = y.norm();
    if ny == T::zero() {
        return (T::one(), Complex::new(T::zero(), T::zero()));
    }
    let nx = x.norm();
    if nx == T::zero() {
        return (T::zero(), y.conj() / ny);
    }
    let r = nx.hypot(ny);
    let c = nx / r;
    let s = (x / nx) * y.conj() / r;
    (c, s)
}
