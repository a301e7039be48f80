//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! Columns of the working matrix are orthogonalized pairwise by complex plane
//! rotations until every pair is orthogonal to working precision. The
//! accumulated rotations form the right singular vectors; the column norms are
//! the singular values. Diagonal inputs need no rotation and are factored
//! exactly.

use num_complex::Complex;

use crate::error::{LinalgError, Result};
use crate::matrix::{dot, vec_norm, ComplexMatrix};
use crate::scalar::{cabs2, sign_nonzero, RealScalar};
use crate::tolerance::ToleranceConfig;

const MAX_SWEEPS: usize = 80;

type Column<T> = Vec<Complex<T>>;

/// Full singular value decomposition `M = U diag(sigma) V*`.
///
/// `U` is `rows x rows`, `V` is `cols x cols`, both unitary, and
/// `sigma` holds the `min(rows, cols)` singular values in non-increasing
/// order. The numerical rank counts `sigma_i > rank_rtol * sigma_1`; every
/// range, null space and pseudoinverse derived from one factorization uses
/// that same rank.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdFactorization<T: RealScalar> {
    left_vectors: ComplexMatrix<T>,
    singular_values: Vec<T>,
    right_vectors: ComplexMatrix<T>,
    numerical_rank: usize,
}

impl<T: RealScalar> SvdFactorization<T> {
    pub fn left_vectors(&self) -> &ComplexMatrix<T> {
        &self.left_vectors
    }

    pub fn right_vectors(&self) -> &ComplexMatrix<T> {
        &self.right_vectors
    }

    pub fn singular_values(&self) -> &[T] {
        &self.singular_values
    }

    pub fn rank(&self) -> usize {
        self.numerical_rank
    }

    pub fn rows(&self) -> usize {
        self.left_vectors.rows()
    }

    pub fn cols(&self) -> usize {
        self.right_vectors.rows()
    }

    /// Largest singular value, 0 for an empty or zero matrix.
    pub fn norm(&self) -> T {
        self.singular_values.first().copied().unwrap_or_else(T::zero)
    }

    /// Smallest singular value above the rank cutoff; 0 when the rank is 0.
    pub fn smallest_nonzero(&self) -> T {
        if self.numerical_rank == 0 {
            T::zero()
        } else {
            self.singular_values[self.numerical_rank - 1]
        }
    }

    /// Orthonormal basis of the range, `rows x rank`.
    pub fn range_vectors(&self) -> ComplexMatrix<T> {
        self.left_vectors.columns(0, self.numerical_rank)
    }

    /// Orthonormal basis of the orthogonal complement of the range (the null
    /// space of the adjoint), `rows x (rows - rank)`.
    pub fn cokernel_vectors(&self) -> ComplexMatrix<T> {
        self.left_vectors.columns(self.numerical_rank, self.rows())
    }

    /// Orthonormal basis of the carrier `N(M)^⊥`, `cols x rank`.
    pub fn carrier_vectors(&self) -> ComplexMatrix<T> {
        self.right_vectors.columns(0, self.numerical_rank)
    }

    /// Orthonormal basis of the null space, `cols x (cols - rank)`.
    pub fn null_vectors(&self) -> ComplexMatrix<T> {
        self.right_vectors.columns(self.numerical_rank, self.cols())
    }

    /// `U diag(sigma) V*` using all singular values.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let k = self.singular_values.len();
        self.weighted_outer(k, |s| s)
    }

    /// Pseudoinverse `V_r diag(1/sigma_r) U_r*` over the singular values above the cutoff.
    pub fn pseudoinverse(&self) -> ComplexMatrix<T> {
        let r = self.numerical_rank;
        let (m, n) = (self.rows(), self.cols());
        let mut out = ComplexMatrix::zeros(n, m);
        for k in 0..r {
            let inv = T::one() / self.singular_values[k];
            for i in 0..n {
                let v = self.right_vectors[(i, k)] * inv;
                for j in 0..m {
                    out[(i, j)] = out[(i, j)] + v * self.left_vectors[(j, k)].conj();
                }
            }
        }
        out
    }

    /// `sum_{k < count} f(sigma_k) u_k v_k*`.
    pub(crate) fn weighted_outer(&self, count: usize, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let (m, n) = (self.rows(), self.cols());
        let mut out = ComplexMatrix::zeros(m, n);
        for k in 0..count {
            let w = f(self.singular_values[k]);
            if w == T::zero() {
                continue;
            }
            for i in 0..m {
                let u = self.left_vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + u * self.right_vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Computes the full SVD of `m` with the rank cutoff from `tol`.
pub fn svd<T: RealScalar>(m: &ComplexMatrix<T>, tol: &ToleranceConfig) -> Result<SvdFactorization<T>> {
    let (rows, cols) = m.shape();
    let (left, sigma, right) = if rows >= cols {
        let (u, s, v) = jacobi_full(m)?;
        (u, s, v)
    } else {
        // M* = U' S V'*  =>  M = V' S U'*
        let (u, s, v) = jacobi_full(&m.adjoint())?;
        (v, s, u)
    };
    let numerical_rank = rank_from_values(&sigma, tol.rtol());
    Ok(SvdFactorization {
        left_vectors: left,
        singular_values: sigma,
        right_vectors: right,
        numerical_rank,
    })
}

/// Singular values only, in non-increasing order.
pub fn singular_values<T: RealScalar>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    let cols = if m.rows() >= m.cols() {
        to_columns(m)
    } else {
        to_columns(&m.adjoint())
    };
    let (cols, _) = jacobi_sweeps(cols, None)?;
    let mut sigma: Vec<T> = cols.iter().map(|c| vec_norm(c)).collect();
    sigma.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    Ok(sigma)
}

/// Spectral norm `sigma_1`; 0 for the zero matrix.
pub fn operator_norm<T: RealScalar>(m: &ComplexMatrix<T>) -> T {
    if m.rows() == 0 || m.cols() == 0 || m.is_zero() {
        return T::zero();
    }
    match singular_values(m) {
        Ok(s) => s[0],
        // Jacobi sweeps on finite input converge long before the budget; fall
        // back to the Frobenius norm bound rather than fail a norm query.
        Err(_) => m.frobenius_norm(),
    }
}

pub(crate) fn rank_from_values<T: RealScalar>(sigma: &[T], rtol: T) -> usize {
    match sigma.first() {
        Some(&s1) if s1 > T::zero() => sigma.iter().take_while(|&&s| s > rtol * s1).count(),
        _ => 0,
    }
}

fn to_columns<T: RealScalar>(m: &ComplexMatrix<T>) -> Vec<Column<T>> {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

/// Jacobi SVD of a tall (`rows >= cols`) matrix returning full `U`, sigma, full `V`.
fn jacobi_full<T: RealScalar>(m: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, Vec<T>, ComplexMatrix<T>)> {
    let (rows, cols) = m.shape();
    debug_assert!(rows >= cols);
    let identity: Vec<Column<T>> = (0..cols).map(|j| unit_vector(cols, j)).collect();
    let (work, right) = jacobi_sweeps(to_columns(m), Some(identity))?;
    let right = right.expect("right vectors requested");

    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<T> = work.iter().map(|c| vec_norm(c)).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).expect("finite norms").then(a.cmp(&b)));
    let sigma: Vec<T> = order.iter().map(|&j| norms[j]).collect();

    // Columns whose norm is at roundoff level relative to sigma_1 carry no
    // reliable direction; their left vectors come from basis completion.
    let s1 = sigma.first().copied().unwrap_or_else(T::zero);
    let floor = s1 * T::epsilon() * T::of(rows.max(1) as f64);
    let mut left: Vec<Column<T>> = Vec::with_capacity(rows);
    for &j in &order {
        if norms[j] > floor && norms[j] > T::min_positive_value() {
            let inv = T::one() / norms[j];
            left.push(work[j].iter().map(|&z| z * inv).collect());
        } else {
            break;
        }
    }
    let left = complete_basis(left, rows);
    let right_sorted: Vec<Column<T>> = order.iter().map(|&j| right[j].clone()).collect();
    Ok((
        ComplexMatrix::from_columns(rows, &left),
        sigma,
        ComplexMatrix::from_columns(cols, &right_sorted),
    ))
}

/// Cyclic one-sided Jacobi. Rotations applied to `work` are mirrored on `right`.
#[allow(clippy::type_complexity)]
fn jacobi_sweeps<T: RealScalar>(
    mut work: Vec<Column<T>>,
    mut right: Option<Vec<Column<T>>>,
) -> Result<(Vec<Column<T>>, Option<Vec<Column<T>>>)> {
    let n = work.len();
    let eps = T::epsilon();
    let mut norms2: Vec<T> = work.iter().map(|c| c.iter().map(|&z| cabs2(z)).sum()).collect();
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norms2[p];
                let beta = norms2[q];
                if alpha == T::zero() || beta == T::zero() {
                    continue;
                }
                let g = dot(&work[p], &work[q]);
                let g_abs = g.norm();
                if g_abs <= eps * (alpha.sqrt() * beta.sqrt()) {
                    continue;
                }
                rotated = true;
                let phase = g / g_abs;
                let phase_conj = phase.conj();
                let zeta = (beta - alpha) / (T::of(2.0) * g_abs);
                let t = sign_nonzero(zeta) / (zeta.abs() + zeta.hypot(T::one()));
                let c = T::one() / t.hypot(T::one());
                let s = c * t;
                rotate_pair(&mut work, p, q, c, s, phase_conj);
                if let Some(v) = right.as_mut() {
                    rotate_pair(v, p, q, c, s, phase_conj);
                }
                norms2[p] = work[p].iter().map(|&z| cabs2(z)).sum();
                norms2[q] = work[q].iter().map(|&z| cabs2(z)).sum();
            }
        }
        if !rotated {
            return Ok((work, right));
        }
    }
    Err(LinalgError::ConvergenceFailure {
        routine: "jacobi svd",
        iterations: MAX_SWEEPS,
    })
}

/// `[a_p, a_q] <- [c a_p - s w, s a_p + c w]` with `w = phase_conj * a_q`.
fn rotate_pair<T: RealScalar>(cols: &mut [Column<T>], p: usize, q: usize, c: T, s: T, phase_conj: Complex<T>) {
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let w = *y * phase_conj;
        let xp = *x;
        *x = xp * c - w * s;
        *y = xp * s + w * c;
    }
}

fn unit_vector<T: RealScalar>(n: usize, k: usize) -> Column<T> {
    let mut v = vec![Complex::new(T::zero(), T::zero()); n];
    v[k] = Complex::new(T::one(), T::zero());
    v
}

/// Extends orthonormal columns to an orthonormal basis of the whole space.
///
/// Candidates are standard basis vectors; at each step the one with the
/// largest component outside the current span is taken and orthogonalized
/// with two Gram-Schmidt passes. Deterministic for fixed input.
pub(crate) fn complete_basis<T: RealScalar>(mut basis: Vec<Column<T>>, dim: usize) -> Vec<Column<T>> {
    // outside[k] = squared norm of e_k outside the current span, kept up to
    // date as vectors are added. Only the chosen candidate is orthogonalized.
    let mut outside = vec![T::one(); dim];
    let absorb = |b: &Column<T>, outside: &mut [T]| {
        for (o, z) in outside.iter_mut().zip(b) {
            *o = *o - cabs2(*z);
        }
    };
    for b in &basis {
        absorb(b, &mut outside);
    }
    while basis.len() < dim {
        let k = (0..dim)
            .fold(None, |best: Option<usize>, k| match best {
                Some(j) if outside[j] >= outside[k] => Some(j),
                _ => Some(k),
            })
            .expect("dim > 0");
        let r = orthogonalize(unit_vector(dim, k), &basis);
        let inv = T::one() / vec_norm(&r);
        let v: Column<T> = r.into_iter().map(|z| z * inv).collect();
        absorb(&v, &mut outside);
        basis.push(v);
    }
    basis
}

fn orthogonalize<T: RealScalar>(mut v: Column<T>, basis: &[Column<T>]) -> Column<T> {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, &v);
            for (x, &y) in v.iter_mut().zip(b) {
                *x = *x - y * c;
            }
        }
    }
    v
}
