//! One trial function per property in the dispatch table.
//!
//! Each trial evaluates an accepting instance, on which the property must
//! hold, and a rejecting control, on which its conclusion must fail or which
//! shows that a hypothesis cannot be dropped.

use epkit::{
    carrier_basis, commutator_residual, direct_sum, eigenvalues, fractional_abs_power, inclusion_residual, limit_study,
    null_basis, operator_norm, polar_decomposition, pseudoinverse, range_basis, reduced_min_modulus, spectral_radius,
    subspace_gap, svd, CMatrix, Complex, FamilyId, ModelFamily, ToleranceConfig, C64,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dominance::{dominance_margin, psd_dominates};
use crate::error::Result;
use crate::generate::{
    conditioned_block, dominated_scalar, embed, ep_parts, gaussian_matrix, geometric_sequence, loose_perturbation,
    non_ep, non_ep_raw, normal_ep_parts, random_polynomial_in, random_unitary, EpParts, SEQUENCE_LENGTH,
};
use crate::spec::GeneratorSpec;
use crate::verdict::Trial;

/// Test hooks that deliberately break a generator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum FaultInjection {
    #[default]
    None,
    /// The EP generator returns non-EP matrices while still labelling them EP.
    CorruptEp,
}

pub(crate) struct Ctx<'a> {
    pub spec: &'a GeneratorSpec,
    pub tol: &'a ToleranceConfig,
    pub fault: FaultInjection,
    pub harmonic: &'a HarmonicWindow,
}

/// Minimum of the E_delta class used for sequence closedness.
pub const E_DELTA: f64 = 0.1;
/// Distance at which a generated sequence counts as converged to its limit.
pub const CONVERGENCE_TOL: f64 = 1e-9;
const ALPHAS: [f64; 6] = [0.25, 0.5, 1.0, 1.5, 2.0, 3.0];

fn rel(x: f64, scale: f64) -> f64 {
    x / (1.0 + scale)
}

/// Largest inclusion residual between `R(M)` and `R(M*)`, each from its own factorization.
pub fn ep_residual(m: &CMatrix, tol: &ToleranceConfig) -> Result<f64> {
    let r = range_basis(m, tol)?;
    let ra = range_basis(&m.adjoint(), tol)?;
    Ok(inclusion_residual(&r, &ra)?.max(inclusion_residual(&ra, &r)?))
}

/// `||(I - P_R(M*)) V_R(M)||`, the hypo-EP half of [`ep_residual`].
fn hypo_residual(m: &CMatrix, tol: &ToleranceConfig) -> Result<f64> {
    Ok(inclusion_residual(
        &range_basis(m, tol)?,
        &range_basis(&m.adjoint(), tol)?,
    )?)
}

fn range_gap(a: &CMatrix, b: &CMatrix, tol: &ToleranceConfig) -> Result<f64> {
    Ok(subspace_gap(&range_basis(a, tol)?, &range_basis(b, tol)?)?)
}

/// Greedy matching distance between eigenvalue multisets of equal size.
fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| a[j].norm().total_cmp(&a[i].norm()));
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for i in order {
        let best = (0..b.len())
            .filter(|&k| !used[k])
            .min_by(|&x, &y| (a[i] - b[x]).norm().total_cmp(&(a[i] - b[y]).norm()));
        match best {
            Some(k) => {
                used[k] = true;
                worst = worst.max((a[i] - b[k]).norm());
            }
            None => return f64::INFINITY,
        }
    }
    worst
}

impl Ctx<'_> {
    fn cond(&self) -> f64 {
        self.spec.condition_bound
    }

    /// Rank used for non-EP controls, which need `1 <= rank < dim`.
    fn control_rank(&self) -> usize {
        self.spec.rank.clamp(1, self.spec.dim - 1)
    }

    /// EP instance in factored form plus the matrix handed to the checks;
    /// the two differ only under fault injection.
    fn ep(&self, rng: &mut ChaCha8Rng) -> Result<(EpParts, CMatrix)> {
        let parts = ep_parts(rng, self.spec.dim, self.spec.rank, self.cond());
        let m = match self.fault {
            FaultInjection::None => parts.assemble(),
            FaultInjection::CorruptEp => non_ep_raw(rng, self.spec.dim, self.control_rank(), self.cond())?,
        };
        Ok((parts, m))
    }

    fn non_ep(&self, rng: &mut ChaCha8Rng) -> Result<CMatrix> {
        non_ep(rng, self.spec.dim, self.control_rank(), self.cond(), self.tol)
    }
}

pub(crate) type Verifier = fn(&Ctx<'_>, &mut ChaCha8Rng, &mut Trial) -> Result<()>;

pub(crate) fn commutator_equivalence(ctx: &Ctx<'_>, rng: &mut ChaCha8Rng, trial: &mut Trial) -> Result<()> {
    let tol = ctx.tol;
    let (_, t) = ctx.ep(rng)?;
    trial.keep("t", &t);
    trial.accepting += 1;
    trial.small("EP instance has R(T) = R(T*)", ep_residual(&t, tol)?);
    trial.small(
        "EP instance commutes with its pseudoinverse",
        commutator_residual(&t, tol)?,
    );

    let n = ctx.non_ep(rng)?;
    trial.keep("n", &n);
    trial.rejecting += 1;
    trial.large("non-EP control has R(N) != R(N*)", ep_residual(&n, tol)?);
    trial.large(
        "non-EP control fails to commute with its pseudoinverse",
        commutator_residual(&n, tol)?,
    );
    Ok(())
}

fn direct_sum_laws(trial: &mut Trial, a: &CMatrix, b: &CMatrix, tol: &ToleranceConfig) -> Result<()> {
    let s = direct_sum(a, b);
    let lhs = pseudoinverse(&s, tol)?;
    let rhs = direct_sum(&pseudoinverse(a, tol)?, &pseudoinverse(b, tol)?);
    let scale = operator_norm(a) + operator_norm(b);
    trial.small(
        "pseudoinverse of a direct sum is blockwise",
        rel(operator_norm(&(&lhs - &rhs)), scale),
    );
    let (ga, gb) = (reduced_min_modulus(a, tol)?, reduced_min_modulus(b, tol)?);
    if ga > 0.0 && gb > 0.0 {
        let gs = reduced_min_modulus(&s, tol)?;
        trial.small(
            "gamma of a direct sum is the smaller gamma",
            (gs - ga.min(gb)).abs() / (1.0 + ga.min(gb)),
        );
    }
    Ok(())
}

pub(crate) fn direct_sum_ep(ctx: &Ctx<'_>, rng: &mut ChaCha8Rng, trial: &mut Trial) -> Result<()> {
    let tol = ctx.tol;
    let (_, t1) = ctx.ep(rng)?;
    let (_, t2) = ctx.ep(rng)?;
    trial.keep("t1", &t1);
    trial.keep("t2", &t2);
    trial.accepting += 1;
    trial.small("sum of EP blocks is EP", ep_residual(&direct_sum(&t1, &t2), tol)?);
    direct_sum_laws(trial, &t1, &t2, tol)?;

    let n = ctx.non_ep(rng)?;
    trial.keep("n", &n);
    let mixed = if rng.random_bool(0.5) {
        direct_sum(&n, &t2)
    } else {
        direct_sum(&t2, &n)
    };
    trial.rejecting += 1;
    trial.large("sum with a non-EP block is not EP", ep_residual(&mixed, tol)?);
    direct_sum_laws(trial, &n, &t1, tol)
}

pub(crate) fn polar_isometry(ctx: &Ctx<'_>, rng: &mut ChaCha8Rng, trial: &mut Trial) -> Result<()> {
    let tol = ctx.tol;
    let (_, t) = ctx.ep(rng)?;
    trial.keep("t", &t);
    trial.accepting += 1;
    let u = polar_decomposition(&t, tol)?.isometry_part;
    trial.small("EP instance", ep_residual(&t, tol)?);
    trial.small("isometric polar factor of EP is EP", ep_residual(&u, tol)?);
    trial.small(
        "polar factor is a partial isometry",
        operator_norm(&(&(&(&u * &u.adjoint()) * &u) - &u)),
    );

    let n = ctx.non_ep(rng)?;
    trial.keep("n", &n);
    trial.rejecting += 1;
    let un = polar_decomposition(&n, tol)?.isometry_part;
    trial.large("isometric polar factor of non-EP is not EP", ep_residual(&un, tol)?);
    Ok(())
}

pub(crate) fn range_equals_carrier(ctx: &Ctx<'_>, rng: &mut ChaCha8Rng, trial: &mut Trial) -> Result<()> {
    let tol = ctx.tol;
    let carrier_gap =
        |m: &CMatrix| -> Result<f64> { Ok(subspace_gap(&range_basis(m, tol)?, &carrier_basis(m, tol)?)?) };
    let (_, t) = ctx.ep(rng)?;
    trial.keep("t", &t);
    trial.accepting += 1;
    trial.small("EP instance", ep_residual(&t, tol)?);
    trial.small("EP instance has R(T) = N(T)^perp", carrier_gap(&t)?);

    let n = ctx.non_ep(rng)?;
    trial.keep("n", &n);
    trial.rejecting += 1;
    trial.large("non-EP control has R(N) != N(N)^perp", carrier_gap(&n)?);
    Ok(())
}

fn commutator(a: &CMatrix, b: &CMatrix) -> f64 {
    operator_norm(&(&(a * b) - &(b * a)))
}

pub(crate) fn commutant_transfer(ctx: &Ctx<'_>, rng: &mut ChaCha8Rng, trial: &mut Trial) -> Result<()> {
    let tol = ctx.tol;
    let (parts, t) = ctx.ep(rng)?;
    trial.keep("t", &t);
    trial.accepting += 1;
    let tp = pseudoinverse(&t, tol)?;
    let tp_norm = operator_norm(&tp);
    let s = random_polynomial_in(rng, &t);
    trial.keep("s", &s);
    trial.small(
        "polynomial in EP T commutes with its pseudoinverse",
        rel(commutator(&s, &tp), operator_norm(&s) * tp_norm),
    );

    // Converse: blockdiag(q(A), R) in T's frame commutes with T† = V blockdiag(A^-1, 0) V*.
    let k = parts.rank();
    let q = random_polynomial_in(rng, &parts.core);
    let free = gaussian_matrix(rng, parts.dim() - k, parts.dim() - k);
    let s2 = embed(&parts.frame, &direct_sum(&q, &free));
    trial.keep("s_converse", &s2);
    let t_true = parts.assemble();
    let tp_true = pseudoinverse(&t_true, tol)?;
    let s2_norm = operator_norm(&s2);
    trial.small(
        "constructed S commutes with the pseudoinverse",
        rel(commutator(&s2, &tp_true), s2_norm * operator_norm(&tp_true)),
    );
    trial.small(
        "commuting with the pseudoinverse implies commuting with T",
        rel(commutator(&s2, &t_true), s2_norm * operator_norm(&t_true)),
    );

    let n = ctx.non_ep(rng)?;
    trial.keep("n", &n);
    trial.rejecting += 1;
    trial.large(
        "non-EP N commutes with itself but not with its pseudoinverse",
        commutator_residual(&n, tol)?,
    );
    Ok(())
}

pub(crate) fn powers(ctx: &Ctx<'_>, rng: &mut ChaCha8Rng, trial: &mut Trial) -> Result<()> {
    let tol = ctx.tol;
    let (_, t) = ctx.ep(rng)?;
    trial.keep("t", &t);
    trial.accepting += 1;
    let tp = pseudoinverse(&t, tol)?;
    let tp_norm = operator_norm(&tp);
    let mut tn = t.clone();
    let mut tpn = tp.clone();
    for n in 2..=4 {
        tn = &tn * &t;
        tpn = &tpn * &tp;
        trial.small(&format!("power {n} of EP is EP"), ep_residual(&tn, tol)?);
        trial.small(&format!("power {n} keeps the range"), range_gap(&tn, &t, tol)?);
        let diff = operator_norm(&(&pseudoinverse(&tn, tol)? - &tpn));
        trial.small(
            &format!("pseudoinverse of power {n} is power of pseudoinverse"),
            rel(diff, tp_norm.powi(n)),
        );
    }

    let n = ctx.non_ep(rng)?;
    trial.keep("n", &n);
    trial.rejecting += 1;
    let mut worst = ep_residual(&n, tol)?;
    let mut nn = n.clone();
    for _ in 2..=4 {
        nn = &nn * &n;
        let r = ep_residual(&nn, tol)?;
        worst = worst.max(r);
    }
    trial.large("powers of non-EP are not all EP", worst);
    trial.metric("control_square_ep_residual", ep_residual(&(&n * &n), tol)?);
    Ok(())
}

pub(crate) fn spectral_compression(ctx: &Ctx<'_>, rng: &mut ChaCha8Rng, trial: &mut Trial) -> Result<()> {
    let tol = ctx.tol;
    let (_, t) = ctx.ep(rng)?;
    trial.keep("t", &t);
    trial.accepting += 1;
    let f = svd(&t, tol)?;
    let (n, r) = (t.rows(), f.rank());
    let norm = f.norm();
    let ev = eigenvalues(&t, tol)?;
    if r == 0 {
        trial.small(
            "zero operator has zero spectrum",
            ev.iter().map(|z| z.norm()).fold(0.0, f64::max),
        );
    } else {
        let b = f.carrier_vectors();
        let c = b.adjoint_mul(&(&t * &b))?;
        let mut expected = eigenvalues(&c, tol)?;
        expected.extend(std::iter::repeat_n(Complex::new(0.0, 0.0), n - r));
        trial.small(
            "spectrum equals compression spectrum plus zeros",
            rel(multiset_distance(&ev, &expected), norm),
        );
        let gamma = f.smallest_nonzero();
        let c_min = reduced_min_modulus(&c, tol)?;
        let c_rank = svd(&c, tol)?.rank();
        trial.holds("compression to the carrier is invertible", c_rank == r);
        trial.small(
            "compression has smallest singular value gamma",
            (c_min - gamma).abs() / (1.0 + gamma),
        );
        let min_ev = eigenvalues(&c, tol)?
            .iter()
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min);
        trial.small(
            "nonzero spectrum stays at least gamma from 0",
            rel((gamma - min_ev).max(0.0), norm),
        );
    }

    let nc = ctx.non_ep(rng)?;
    trial.keep("n", &nc);
    trial.rejecting += 1;
    let fnc = svd(&nc, tol)?;
    let b = fnc.carrier_vectors();
    let c = b.adjoint_mul(&(&nc * &b))?;
    let smin = *epkit::singular_values(&c)?.last().unwrap_or(&0.0);
    trial.small("non-EP compression to the carrier is singular", rel(smin, fnc.norm()));
    Ok(())
}

pub(crate) fn product_ep(ctx: &Ctx<'_>, rng: &mut ChaCha8Rng, trial: &mut Trial) -> Result<()> {
    let tol = ctx.tol;
    let conditions = |s: &CMatrix, t: &CMatrix| -> Result<f64> {
        let st = s * t;
        let r = range_gap(&st, t, tol)?;
        let n = subspace_gap(&null_basis(&st, tol)?, &null_basis(t, tol)?)?;
        Ok(r.max(n))
    };

    // Accepting: S and T share a frame, so ST = V blockdiag(BA, 0) V*.
    let (parts, t) = ctx.ep(rng)?;
    let s = parts.with_core(&conditioned_block(rng, parts.rank(), ctx.cond()));
    trial.keep("s", &s);
    trial.keep("t", &t);
    trial.accepting += 1;
    trial.small("shared-frame product is EP", ep_residual(&(&s * &t), tol)?);
    trial.small("shared-frame product keeps range and null space", conditions(&s, &t)?);

    // Rejecting: independent EP factors; whenever ST fails to be EP some condition must fail.
    let k = ctx.control_rank();
    let s2 = ep_parts(rng, ctx.spec.dim, k, ctx.cond()).assemble();
    let t2 = ep_parts(rng, ctx.spec.dim, k, ctx.cond()).assemble();
    trial.keep("s_independent", &s2);
    trial.keep("t_independent", &t2);
    let ep_r = ep_residual(&(&s2 * &t2), tol)?;
    let cond_r = conditions(&s2, &t2)?;
    if cond_r <= tol.eq_atol {
        trial.small("range and null conditions force EP", ep_r);
    }
    if ep_r > tol.eq_atol {
        trial.rejecting += 1;
        trial.large("non-EP product violates a range or null condition", cond_r);
    }
    Ok(())
}

fn abs_power_gaps(m: &CMatrix, tol: &ToleranceConfig) -> Result<(CMatrix, f64)> {
    let modulus = polar_decomposition(m, tol)?.modulus_part;
    let r = range_basis(&modulus, tol)?;
    let mut worst = 0.0f64;
    for a in ALPHAS {
        let p = fractional_abs_power(m, a, tol)?;
        worst = worst.max(subspace_gap(&range_basis(&p, tol)?, &r)?);
    }
    Ok((modulus, worst))
}

pub(crate) fn fractional_ranges(ctx: &Ctx<'_>, rng: &mut ChaCha8Rng, trial: &mut Trial) -> Result<()> {
    let tol = ctx.tol;
    let (_, t) = ctx.ep(rng)?;
    trial.keep("t", &t);
    trial.accepting += 1;
    let (modulus, worst) = abs_power_gaps(&t, tol)?;
    trial.small("powers of |T| share one range", worst);
    trial.small("EP instance has R(T) = R(|T|)", range_gap(&t, &modulus, tol)?);

    let n = ctx.non_ep(rng)?;
    trial.keep("n", &n);
    trial.rejecting += 1;
    let (modulus, worst) = abs_power_gaps(&n, tol)?;
    trial.small("powers of |N| share one range", worst);
    trial.large("non-EP control has R(N) != R(|N|)", range_gap(&n, &modulus, tol)?);
    Ok(())
}

pub(crate) fn fractional_converse(ctx: &Ctx<'_>, rng: &mut ChaCha8Rng, trial: &mut Trial) -> Result<()> {
    let tol = ctx.tol;
    let condition = |m: &CMatrix| -> Result<f64> {
        let modulus = polar_decomposition(m, tol)?.modulus_part;
        let half = fractional_abs_power(m, 0.5, tol)?;
        Ok(range_gap(m, &modulus, tol)?.max(range_gap(&half, &modulus, tol)?))
    };
    let (_, t) = ctx.ep(rng)?;
    trial.keep("t", &t);
    trial.accepting += 1;
    let c = condition(&t)?;
    trial.small("EP instance satisfies R(T) = R(|T|) = R(|T|^1/2)", c);
    trial.small("range condition flags EP", ep_residual(&t, tol)?);

    let n = ctx.non_ep(rng)?;
    trial.keep("n", &n);
    trial.rejecting += 1;
    let c = condition(&n)?;
    if c <= tol.eq_atol {
        trial.small("range condition flags EP", ep_residual(&n, tol)?);
    }
    trial.large("non-EP control violates the range condition", c);
    Ok(())
}

fn gram(m: &CMatrix) -> CMatrix {
    m.adjoint_mul(m).expect("square")
}

fn cogram(m: &CMatrix) -> CMatrix {
    m * &m.adjoint()
}

fn certify_and_sum(trial: &mut Trial, t: &CMatrix, s: &CMatrix, a: f64, b: f64, tol: &ToleranceConfig) -> Result<()> {
    trial.holds(
        "certificate S*S <= a^2 T*T",
        psd_dominates(&gram(t).scale_real(a * a), &gram(s), tol)?,
    );
    trial.holds(
        "certificate SS* <= b^2 TT*",
        psd_dominates(&cogram(t).scale_real(b * b), &cogram(s), tol)?,
    );
    trial.small("perturbed operator is EP", ep_residual(s, tol)?);
    let sum = t + s;
    trial.small("T + S is hypo-EP", hypo_residual(&sum, tol)?);
    trial.small("T + S is EP", ep_residual(&sum, tol)?);
    Ok(())
}

pub(crate) fn perturbation(ctx: &Ctx<'_>, rng: &mut ChaCha8Rng, trial: &mut Trial) -> Result<()> {
    let tol = ctx.tol;
    let p = ctx.spec.perturbation;
    let (parts, t) = ctx.ep(rng)?;
    let s = t.scale(dominated_scalar(rng, &p));
    trial.keep("t", &t);
    trial.keep("s", &s);
    trial.accepting += 1;
    certify_and_sum(trial, &t, &s, p.a, p.b, tol)?;

    let t_true = parts.assemble();
    let loose = loose_perturbation(rng, &parts, &p, tol)?;
    trial.keep("s_loose", &loose);
    certify_and_sum(trial, &t_true, &loose, p.a, p.b, tol)?;

    // Normal EP pair on a common frame with |s_j| < a |t_j|.
    let normal = normal_ep_parts(rng, ctx.spec.dim, ctx.spec.rank, ctx.cond());
    let ds: Vec<C64> = (0..normal.rank())
        .map(|j| {
            let c = Complex::from_polar(rng.random_range(0.0..p.a), rng.random_range(0.0..std::f64::consts::TAU));
            normal.core[(j, j)] * c
        })
        .collect();
    let tn = normal.assemble();
    let sn = normal.with_core(&CMatrix::from_diag(&ds));
    trial.small("sum of dominated normal EP pair is EP", ep_residual(&(&tn + &sn), tol)?);

    // Control: an independent EP S scaled past any dominance bound.
    let k = ctx.control_rank();
    let raw = ep_parts(rng, ctx.spec.dim, k, ctx.cond()).assemble();
    let g = reduced_min_modulus(&raw, tol)?;
    let big = raw.scale_real(2.0 * (1.0 + operator_norm(&t_true)) / (p.a * g));
    trial.keep("s_control", &big);
    trial.rejecting += 1;
    let lhs = gram(&t_true).scale_real(p.a * p.a);
    let margin = dominance_margin(&lhs, &gram(&big), tol)?;
    trial.large("undominated S fails the certificate", rel(-margin, operator_norm(&lhs)));
    Ok(())
}

pub(crate) fn projector_identities(ctx: &Ctx<'_>, rng: &mut ChaCha8Rng, trial: &mut Trial) -> Result<()> {
    let tol = ctx.tol;
    let residuals = |m: &CMatrix| -> Result<(f64, f64)> {
        let n = m.rows();
        let id = CMatrix::identity(n);
        let adj = m.adjoint();
        let mp = pseudoinverse(m, tol)?;
        let adj_p = pseudoinverse(&adj, tol)?;
        let scale = operator_norm(m);
        let first = operator_norm(&(m * &(&id - &(m * &mp))));
        let second = operator_norm(&(&adj * &(&id - &(&adj * &adj_p))));
        Ok((rel(first, scale), rel(second, scale)))
    };
    let (_, t) = ctx.ep(rng)?;
    trial.keep("t", &t);
    trial.accepting += 1;
    let (a, b) = residuals(&t)?;
    trial.small("T (I - T T†) = 0", a);
    trial.small("T* (I - T* (T*)†) = 0", b);

    let n = ctx.non_ep(rng)?;
    trial.keep("n", &n);
    trial.rejecting += 1;
    let (a, b) = residuals(&n)?;
    trial.large("non-EP control violates a projector identity", a.max(b));
    Ok(())
}

/// Diagnostics of the diagonal truncations `diag(1, 1/2, ..., 1/k, 0, ...)`,
/// computed once per run and shared by every trial.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct HarmonicWindow {
    pub all_ep: bool,
    pub gammas: Vec<f64>,
    pub pinv_norms: Vec<f64>,
    /// `||T_{k+1}† - T_k†||` for consecutive truncations.
    pub pinv_steps: Vec<f64>,
    /// `||T_{k+1}† T_{k+1} - T_k† T_k||`.
    pub projector_steps: Vec<f64>,
    /// `||T_{k+1} - T_k||`.
    pub operator_steps: Vec<f64>,
}

impl HarmonicWindow {
    pub fn compute(tol: &ToleranceConfig) -> Result<Self> {
        let family = ModelFamily::embedded(FamilyId::DiagHarmonicTruncated, SEQUENCE_LENGTH);
        let rows = limit_study(&family, SEQUENCE_LENGTH, tol)?;
        let terms: Vec<CMatrix> = (1..=SEQUENCE_LENGTH)
            .map(|k| family.realize(k))
            .collect::<Result<_, _>>()?;
        let pinvs: Vec<CMatrix> = terms.iter().map(|t| pseudoinverse(t, tol)).collect::<Result<_, _>>()?;
        let projs: Vec<CMatrix> = pinvs.iter().zip(&terms).map(|(p, t)| p * t).collect();
        let step = |v: &[CMatrix]| -> Vec<f64> { v.windows(2).map(|w| operator_norm(&(&w[1] - &w[0]))).collect() };
        Ok(Self {
            all_ep: rows.iter().all(|r| r.is_ep),
            gammas: rows.iter().map(|r| r.gamma).collect(),
            pinv_norms: rows.iter().map(|r| r.pinv_norm).collect(),
            pinv_steps: step(&pinvs),
            projector_steps: step(&projs),
            operator_steps: step(&terms),
        })
    }

    pub fn sup_pinv_norm(&self) -> f64 {
        self.pinv_norms.iter().copied().fold(0.0, f64::max)
    }

    /// Whether `sup ||T_k†||` has stabilised over the window.
    pub fn bounded(&self) -> bool {
        bounded_over_window(&self.pinv_norms)
    }

    /// First 1-based index whose gamma drops below `delta`.
    pub fn exit_index(&self, delta: f64) -> Option<usize> {
        self.gammas.iter().position(|&g| g < delta).map(|i| i + 1)
    }
}

/// A norm sequence counts as bounded when the supremum over the second half of
/// the window is below 1.5 times the supremum over the first half.
pub fn bounded_over_window(norms: &[f64]) -> bool {
    let half = norms.len() / 2;
    let sup = |s: &[f64]| s.iter().copied().fold(0.0, f64::max);
    sup(&norms[half..]) < 1.5 * sup(&norms[..half])
}

pub(crate) fn pinv_convergence(ctx: &Ctx<'_>, rng: &mut ChaCha8Rng, trial: &mut Trial) -> Result<()> {
    let tol = ctx.tol;
    let (_, t) = ctx.ep(rng)?;
    trial.keep("limit", &t);
    trial.accepting += 1;
    let terms = geometric_sequence(&t);
    let tp = pseudoinverse(&t, tol)?;
    let proj = &tp * &t;
    let tp_norm = operator_norm(&tp);
    let mut pinv_err = Vec::with_capacity(terms.len());
    let mut proj_err = Vec::with_capacity(terms.len());
    let mut norms = Vec::with_capacity(terms.len());
    for tk in &terms {
        let p = pseudoinverse(tk, tol)?;
        pinv_err.push(rel(operator_norm(&(&p - &tp)), tp_norm));
        proj_err.push(operator_norm(&(&(&p * tk) - &proj)));
        norms.push(operator_norm(&p));
    }
    let last = terms.len() - 1;
    trial.small(
        "sequence reaches its limit",
        rel(operator_norm(&(&terms[last] - &t)), operator_norm(&t)),
    );
    trial.small("pseudoinverses converge", pinv_err[last]);
    trial.small("carrier projectors converge", proj_err[last]);
    trial.holds("pseudoinverse norms stay bounded", bounded_over_window(&norms));
    // First index from which the pseudoinverse error stays below eq_atol;
    // one past the window if it never does, so reports stay finite.
    let settle = (0..terms.len())
        .find(|&k| pinv_err[k..].iter().all(|&e| e <= tol.eq_atol))
        .map_or(terms.len() + 1, |k| k + 1) as f64;
    trial.metric("positive_settle_index", settle);

    let h = ctx.harmonic;
    trial.rejecting += 1;
    trial.holds("truncations are EP", h.all_ep);
    trial.holds("truncation pseudoinverse norms are unbounded", !h.bounded());
    trial.large(
        "truncation pseudoinverses are not Cauchy",
        *h.pinv_steps.last().unwrap_or(&0.0),
    );
    trial.large(
        "truncation projectors are not Cauchy",
        *h.projector_steps.last().unwrap_or(&0.0),
    );
    Ok(())
}

/// Orthonormal columns from Gram-Schmidt, in column order.
fn orthonormalize(m: &CMatrix) -> CMatrix {
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(m.cols());
    for j in 0..m.cols() {
        let mut w = m.column(j);
        for _ in 0..2 {
            for p in &q {
                let c: C64 = p.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                w.iter_mut().zip(p).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        q.push(w.into_iter().map(|z| z / norm).collect());
    }
    CMatrix::from_columns(m.rows(), &q)
}

pub(crate) fn e_delta_closed(ctx: &Ctx<'_>, rng: &mut ChaCha8Rng, trial: &mut Trial) -> Result<()> {
    let tol = ctx.tol;
    let parts = ep_parts(rng, ctx.spec.dim, ctx.spec.rank, ctx.cond());
    // Rescale the core so gamma(T) lies in [delta, 2 delta).
    let g = reduced_min_modulus(&parts.core, tol)?;
    let core = parts.core.scale_real(E_DELTA * (1.0 + rng.random_range(0.0..1.0)) / g);
    let limit = match ctx.fault {
        FaultInjection::None => parts.with_core(&core),
        FaultInjection::CorruptEp => non_ep_raw(rng, ctx.spec.dim, ctx.control_rank(), ctx.cond())?,
    };
    trial.keep("limit", &limit);
    trial.accepting += 1;
    let drift = gaussian_matrix(rng, parts.dim(), parts.dim());
    let mut last = limit.clone();
    let mut min_gamma = f64::INFINITY;
    for k in 1..=SEQUENCE_LENGTH as i32 {
        let eps = 2f64.powi(-k);
        let frame = orthonormalize(&(&parts.frame + &drift.scale_real(eps)));
        let tk = embed(&frame, &core.scale_real(1.0 + eps));
        let gk = reduced_min_modulus(&tk, tol)?;
        min_gamma = min_gamma.min(gk);
        trial.small(&format!("term {k} is EP"), ep_residual(&tk, tol)?);
        trial.holds(&format!("term {k} has gamma >= delta"), gk >= E_DELTA);
        last = tk;
    }
    trial.metric("sequence_min_gamma_deficit", E_DELTA - min_gamma);
    trial.holds(
        "sequence converges in norm",
        operator_norm(&(&last - &limit)) <= CONVERGENCE_TOL,
    );
    trial.small("limit is EP", ep_residual(&limit, tol)?);
    trial.holds(
        "limit keeps gamma >= delta",
        reduced_min_modulus(&limit, tol)? >= E_DELTA - CONVERGENCE_TOL,
    );

    // Control: EP truncations whose gamma = 1/k leaves E_delta.
    let h = ctx.harmonic;
    trial.rejecting += 1;
    trial.holds("harmonic truncations are EP", h.all_ep);
    trial.holds("harmonic truncations leave E_delta", h.exit_index(E_DELTA).is_some());
    Ok(())
}

pub(crate) fn gamma_below_radius(ctx: &Ctx<'_>, rng: &mut ChaCha8Rng, trial: &mut Trial) -> Result<()> {
    let tol = ctx.tol;
    let (_, t) = ctx.ep(rng)?;
    trial.keep("t", &t);
    trial.accepting += 1;
    let gamma = reduced_min_modulus(&t, tol)?;
    let r = spectral_radius(&t, tol)?;
    let norm = operator_norm(&t);
    trial.small("gamma <= spectral radius", rel((gamma - r).max(0.0), norm));
    trial.metric("gamma_minus_radius", gamma - r);
    let mut tn = t.clone();
    for n in 2..=3 {
        tn = &tn * &t;
        let bound = norm.powi(n - 1) * gamma;
        let gn = reduced_min_modulus(&tn, tol)?;
        trial.small(
            &format!("gamma(T^{n}) <= ||T||^{} gamma(T)", n - 1),
            rel((gn - bound).max(0.0), bound),
        );
    }

    // Control: a nilpotent cell, non-EP with gamma = 1 > r = 0.
    let u = random_unitary(rng, 2);
    let j = &(&u * &CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]])) * &u.adjoint();
    trial.keep("nilpotent_control", &j);
    trial.rejecting += 1;
    trial.large("nilpotent control is not EP", ep_residual(&j, tol)?);
    trial.large(
        "nilpotent control violates gamma <= r",
        reduced_min_modulus(&j, tol)? - spectral_radius(&j, tol)?,
    );
    Ok(())
}
