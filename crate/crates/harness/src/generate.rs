//! Seeded generators for structured matrices.
//!
//! Every generator is a pure function of its RNG state, so a given seed
//! reproduces bit-identical matrices on every platform with IEEE doubles.

use epkit::{is_ep, CMatrix, Complex, ToleranceConfig, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::spec::{Family, GeneratorSpec, PerturbationSpec};

/// Number of terms in generated sequences.
pub const SEQUENCE_LENGTH: usize = 50;

const MAX_ATTEMPTS: usize = 8;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master`; independent of execution order.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index.wrapping_mul(0xd1b5_4a32_d192_ed03))
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Entries i.i.d. standard complex Gaussian.
pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

fn unit_phase(rng: &mut ChaCha8Rng) -> C64 {
    Complex::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Haar-like unitary: Gram-Schmidt (two passes) on a Gaussian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    loop {
        let g = gaussian_matrix(rng, n, n);
        let mut q: Vec<Vec<C64>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut w = g.column(j);
            for _ in 0..2 {
                for p in &q {
                    let c: C64 = p.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                    w.iter_mut().zip(p).for_each(|(x, y)| *x -= c * y);
                }
            }
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                break;
            }
            q.push(w.into_iter().map(|z| z / norm).collect());
        }
        if q.len() == n {
            return CMatrix::from_columns(n, &q);
        }
    }
}

/// Singular values for a `k`-block with condition number exactly `cond`:
/// extremes pinned at `cond` and 1, interior log-uniform.
fn conditioned_values(rng: &mut ChaCha8Rng, k: usize, cond: f64) -> Vec<f64> {
    let mut s: Vec<f64> = (0..k).map(|_| cond.powf(rng.random_range(0.0..=1.0))).collect();
    if k >= 1 {
        s[0] = cond;
    }
    if k >= 2 {
        s[k - 1] = 1.0;
    }
    s
}

/// Invertible `k x k` block `W1 diag(s) W2*` with singular values in `[1, cond]`.
pub fn conditioned_block(rng: &mut ChaCha8Rng, k: usize, cond: f64) -> CMatrix {
    let s = conditioned_values(rng, k, cond);
    let w1 = random_unitary(rng, k);
    let w2 = random_unitary(rng, k);
    let sigma = CMatrix::from_real_diag(&s);
    &(&w1 * &sigma) * &w2.adjoint()
}

/// `V blockdiag(block, 0) V*` for a unitary frame `V` and a leading block.
pub fn embed(frame: &CMatrix, block: &CMatrix) -> CMatrix {
    let k = block.rows();
    if k == 0 {
        return CMatrix::zeros(frame.rows(), frame.rows());
    }
    let vk = frame.columns(0, k);
    &(&vk * block) * &vk.adjoint()
}

/// An EP matrix kept in factored form `V blockdiag(A, 0) V*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpParts {
    pub frame: CMatrix,
    pub core: CMatrix,
}

impl EpParts {
    pub fn dim(&self) -> usize {
        self.frame.rows()
    }

    pub fn rank(&self) -> usize {
        self.core.rows()
    }

    pub fn assemble(&self) -> CMatrix {
        embed(&self.frame, &self.core)
    }

    /// Same frame, different core block.
    pub fn with_core(&self, core: &CMatrix) -> CMatrix {
        embed(&self.frame, core)
    }

    /// Orthonormal basis of the common range `R(T) = R(T*)`.
    pub fn range_vectors(&self) -> CMatrix {
        self.frame.columns(0, self.rank())
    }
}

pub fn ep_parts(rng: &mut ChaCha8Rng, dim: usize, rank: usize, cond: f64) -> EpParts {
    let frame = random_unitary(rng, dim);
    let core = conditioned_block(rng, rank, cond);
    EpParts { frame, core }
}

/// Rank-`rank` matrix whose core carries a nilpotent cell `[[0, s], [0, 0]]`,
/// so that `R(T) != R(T*)`. Requires `1 <= rank < dim`.
pub fn non_ep_raw(rng: &mut ChaCha8Rng, dim: usize, rank: usize, cond: f64) -> Result<CMatrix> {
    if rank == 0 || rank >= dim {
        return Err(HarnessError::InvalidSpec(format!(
            "non-EP instances need 1 <= rank < dim, got rank {rank} in dim {dim}"
        )));
    }
    let head = conditioned_block(rng, rank - 1, cond);
    let s = cond.powf(rng.random_range(0.0..=1.0)) * unit_phase(rng);
    let core = CMatrix::from_fn(rank + 1, rank + 1, |i, j| {
        if i < rank - 1 && j < rank - 1 {
            head[(i, j)]
        } else if i == rank - 1 && j == rank {
            s
        } else {
            Complex::new(0.0, 0.0)
        }
    });
    let frame = random_unitary(rng, dim);
    Ok(embed(&frame, &core))
}

/// [`non_ep_raw`] with self-validation against the EP test.
pub fn non_ep(rng: &mut ChaCha8Rng, dim: usize, rank: usize, cond: f64, tol: &ToleranceConfig) -> Result<CMatrix> {
    for _ in 0..MAX_ATTEMPTS {
        let m = non_ep_raw(rng, dim, rank, cond)?;
        if !is_ep(&m, tol)? {
            return Ok(m);
        }
    }
    Err(HarnessError::GeneratorExhausted {
        family: "non_ep",
        attempts: MAX_ATTEMPTS,
    })
}

/// `V diag(d_1..d_rank, 0..0) V*` with `|d_j|` in `[1, cond]` and random phases.
pub fn normal_ep_parts(rng: &mut ChaCha8Rng, dim: usize, rank: usize, cond: f64) -> EpParts {
    let frame = random_unitary(rng, dim);
    let s = conditioned_values(rng, rank, cond);
    let d: Vec<C64> = s.into_iter().map(|x| unit_phase(rng) * x).collect();
    EpParts {
        frame,
        core: CMatrix::from_diag(&d),
    }
}

/// `c0 I + c1 X + c2 X^2 + c3 X^3` with `X = T / ||T||_F` and Gaussian
/// coefficients; commutes with `T` by construction.
pub fn random_polynomial_in(rng: &mut ChaCha8Rng, t: &CMatrix) -> CMatrix {
    let n = t.rows();
    let scale = t.frobenius_norm();
    let x = if scale > 0.0 {
        t.scale_real(1.0 / scale)
    } else {
        t.clone()
    };
    let mut power = CMatrix::identity(n);
    let mut out = CMatrix::zeros(n, n);
    for _ in 0..=3 {
        out = &out + &power.scale(gaussian(rng));
        power = &power * &x;
    }
    out
}

/// `c` with `|c| <= min(a, b)`, so `S = c T` satisfies both dominance bounds.
pub fn dominated_scalar(rng: &mut ChaCha8Rng, p: &PerturbationSpec) -> C64 {
    unit_phase(rng) * (p.a.min(p.b) * rng.random_range(0.0..=1.0))
}

/// EP `S = V blockdiag(B, 0) V*` sharing `T`'s frame, with `B` random and scaled
/// so that `||B A^-1||` and `||A^-1 B||` stay at most `0.9 min(a, b)`.
pub fn loose_perturbation(
    rng: &mut ChaCha8Rng,
    t: &EpParts,
    p: &PerturbationSpec,
    tol: &ToleranceConfig,
) -> Result<CMatrix> {
    let k = t.rank();
    if k == 0 {
        return Ok(CMatrix::zeros(t.dim(), t.dim()));
    }
    let b = conditioned_block(rng, k, 10.0);
    let a_inv = epkit::pseudoinverse(&t.core, tol)?;
    let worst = epkit::operator_norm(&(&b * &a_inv)).max(epkit::operator_norm(&(&a_inv * &b)));
    let target = 0.9 * p.a.min(p.b) * rng.random_range(0.1..=1.0);
    Ok(t.with_core(&b.scale_real(target / worst)))
}

/// `T_k = (1 + 2^-k) T` for `k = 1..=SEQUENCE_LENGTH`.
pub fn geometric_sequence(t: &CMatrix) -> Vec<CMatrix> {
    (1..=SEQUENCE_LENGTH as i32)
        .map(|k| t.scale_real(1.0 + 2f64.powi(-k)))
        .collect()
}

/// Output of [`gen_matrix`]; the shape depends on the family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generated {
    Single(CMatrix),
    /// `s` is the companion operator, `t` the base operator.
    Pair {
        s: CMatrix,
        t: CMatrix,
    },
    Sequence {
        terms: Vec<CMatrix>,
        limit: CMatrix,
    },
}

impl Generated {
    pub fn single(self) -> Option<CMatrix> {
        match self {
            Generated::Single(m) => Some(m),
            _ => None,
        }
    }
}

fn validated_ep(rng: &mut ChaCha8Rng, spec: &GeneratorSpec, tol: &ToleranceConfig) -> Result<EpParts> {
    for _ in 0..MAX_ATTEMPTS {
        let parts = ep_parts(rng, spec.dim, spec.rank, spec.condition_bound);
        if is_ep(&parts.assemble(), tol)? {
            return Ok(parts);
        }
    }
    Err(HarnessError::GeneratorExhausted {
        family: "ep",
        attempts: MAX_ATTEMPTS,
    })
}

/// Draws one instance of `spec.family`, deterministically from `spec.seed`.
/// EP-labelled output is validated with the default tolerances.
pub fn gen_matrix(spec: &GeneratorSpec) -> Result<Generated> {
    spec.validate()?;
    let tol = ToleranceConfig::default();
    let rng = &mut rng_from_seed(spec.seed);
    let (n, r, cond) = (spec.dim, spec.rank, spec.condition_bound);
    Ok(match spec.family {
        Family::Ep => Generated::Single(validated_ep(rng, spec, &tol)?.assemble()),
        Family::NonEp => Generated::Single(non_ep(rng, n, r, cond, &tol)?),
        Family::NormalEp => Generated::Single(normal_ep_parts(rng, n, r, cond).assemble()),
        Family::CommutingPair => {
            let t = validated_ep(rng, spec, &tol)?.assemble();
            Generated::Pair {
                s: random_polynomial_in(rng, &t),
                t,
            }
        }
        Family::PerturbationPair => {
            let t = validated_ep(rng, spec, &tol)?.assemble();
            let c = dominated_scalar(rng, &spec.perturbation);
            Generated::Pair { s: t.scale(c), t }
        }
        Family::ProductPair => {
            let t = validated_ep(rng, spec, &tol)?.assemble();
            let s = validated_ep(rng, spec, &tol)?.assemble();
            Generated::Pair { s, t }
        }
        Family::Sequence => {
            let limit = validated_ep(rng, spec, &tol)?.assemble();
            Generated::Sequence {
                terms: geometric_sequence(&limit),
                limit,
            }
        }
    })
}
