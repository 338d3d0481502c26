//! Two-step completion: a truncated TQt-SVD fixes the leading singular
//! subspaces, then an ADMM loop solves the regularized problem
//!
//! ```text
//! min  R(T) − |tr(A ⋆ H ⋆ Bᴴ)| + λ‖S‖₁
//! s.t. T = H,  S = C(T),  P_Ω(H) = P_Ω(O)
//! ```
//!
//! where `R` is the nuclear norm (QT-RNNS1) or the logarithmic norm
//! (QT-RNNS2) and `C` is the quaternion tensor DCT.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{dims_mismatch, invalid, Error, Result};
use crate::mask::Mask;
use crate::prox::{l1_prox, log_scalar_threshold, LogPenaltyParams};
use crate::qtdct::QtdctContext;
use crate::qtensor::{mode3_transform, transform_svd, Direction, QTensor3, TransformSpec};
use crate::quat::{recompose, QMatrix};
use crate::Quaternion;

/// Rank penalty used by the `T` subproblem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    /// Truncated nuclear norm, solved by singular value soft thresholding.
    Rnns1,
    /// Logarithmic norm, solved by the log thresholding rule.
    Rnns2,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Rnns1 => "rnns1",
            Variant::Rnns2 => "rnns2",
        }
    }

    /// Penalty growth factor used when none is given.
    pub fn default_rho(self) -> f64 {
        match self {
            Variant::Rnns1 => 1.1,
            Variant::Rnns2 => 1.01,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub variant: Variant,
    /// Truncation rank; `None` picks `⌈0.05·min(I1, I2)⌉`.
    pub rank: Option<usize>,
    pub lambda: f64,
    pub beta1: f64,
    pub rho: f64,
    pub beta_max: f64,
    /// Inner stop: `‖T⁽ᵏ⁺¹⁾ − T⁽ᵏ⁾‖_F ≤ eps_inner·‖O‖_F`.
    pub eps_inner: f64,
    /// Outer stop: `‖T_{l+1} − T_l‖_F ≤ eps_outer·‖O‖_F`.
    pub eps_outer: f64,
    pub max_inner: usize,
    pub max_outer: usize,
    /// Offset `ε` of the logarithmic penalty.
    pub log_eps: f64,
    pub seed: u64,
}

impl SolverConfig {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            rank: None,
            lambda: 0.05,
            beta1: 0.1,
            rho: variant.default_rho(),
            beta_max: 1e7,
            eps_inner: 1e-4,
            eps_outer: 1e-4,
            max_inner: 500,
            max_outer: 10,
            log_eps: 0.1,
            seed: 0,
        }
    }

    /// Checks every field and resolves the truncation rank for `dims`.
    pub fn validate(&self, dims: (usize, usize, usize)) -> Result<usize> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(name, format!("{v} must be positive and finite")))
            }
        };
        positive("lambda", self.lambda)?;
        positive("beta1", self.beta1)?;
        positive("beta_max", self.beta_max)?;
        positive("eps_inner", self.eps_inner)?;
        positive("eps_outer", self.eps_outer)?;
        positive("log_eps", self.log_eps)?;
        if !(self.rho >= 1.0 && self.rho.is_finite()) {
            return Err(invalid("rho", format!("{} must be at least 1", self.rho)));
        }
        if self.beta_max < self.beta1 {
            return Err(invalid("beta_max", "must not be below beta1"));
        }
        if self.max_inner == 0 || self.max_outer == 0 {
            return Err(invalid("max_inner", "iteration caps must be positive"));
        }
        let limit = dims.0.min(dims.1);
        let r = self.rank.unwrap_or_else(|| (0.05 * limit as f64).ceil() as usize);
        if r >= limit {
            return Err(Error::InvalidTruncation { rank: r, limit });
        }
        Ok(r)
    }
}

/// Observed tensor `O` (zero off `Ω`) and its mask.
#[derive(Clone, Debug)]
pub struct Observation {
    data: QTensor3,
    mask: Mask,
}

impl Observation {
    /// Keeps the entries of `t` selected by `mask` and zeroes the rest.
    pub fn new(t: &QTensor3, mask: Mask) -> Result<Self> {
        if t.dims() != mask.dims() {
            return Err(dims_mismatch("Observation::new", t.dims(), mask.dims()));
        }
        if mask.count() == 0 {
            return Err(Error::EmptyObservation);
        }
        Ok(Self { data: mask.project(t), mask })
    }

    pub fn data(&self) -> &QTensor3 {
        &self.data
    }

    pub fn mask(&self) -> &Mask {
        &self.mask
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.data.dims()
    }
}

/// Iterates and multipliers of the ADMM loop.
#[derive(Clone, Debug)]
pub struct SolverState {
    pub t: QTensor3,
    pub s: QTensor3,
    pub h: QTensor3,
    pub y: QTensor3,
    pub z: QTensor3,
    pub beta: f64,
    pub k: usize,
}

/// `A = U(:, 1:r, :)ᴴ`, `B = V(:, 1:r, :)ᴴ` and the product `Aᴴ ⋆ B`.
#[derive(Clone, Debug)]
pub struct TruncatedFactors {
    pub a: QTensor3,
    pub b: QTensor3,
    pub ah_b: QTensor3,
}

/// One inner iteration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub outer: usize,
    pub inner: usize,
    /// Penalty in effect during the iteration.
    pub beta: f64,
    /// `‖T − H‖_F`.
    pub residual_th: f64,
    /// `‖S − C(T)‖_F`.
    pub residual_sc: f64,
    /// `‖T⁽ᵏ⁺¹⁾ − T⁽ᵏ⁾‖_F`.
    pub step: f64,
    /// Rank penalty of `T` plus `λ‖S‖₁`.
    pub objective: f64,
}

/// Outcome of [`admm_inner`].
#[derive(Clone, Debug)]
pub struct InnerOutcome {
    pub state: SolverState,
    pub trace: Vec<IterationRecord>,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub outer_iterations: usize,
    pub inner_iterations: Vec<usize>,
    /// `‖T_{l+1} − T_l‖_F` per outer pass.
    pub outer_steps: Vec<f64>,
    pub trace: Vec<IterationRecord>,
    /// Some inner or the outer loop stopped at its cap.
    pub iteration_limit: bool,
    pub elapsed: Duration,
    /// Final `‖T − H‖_F` and `‖S − C(T)‖_F`.
    pub residuals: (f64, f64),
}

impl SolveReport {
    pub fn total_inner(&self) -> usize {
        self.inner_iterations.iter().sum()
    }
}

/// Leading `r` singular subspaces of `t` as row tensors.
pub fn truncated_factors(t: &QTensor3, r: usize, spec: &TransformSpec) -> Result<TruncatedFactors> {
    let (n1, n2, n3) = t.dims();
    if r >= n1.min(n2) {
        return Err(Error::InvalidTruncation { rank: r, limit: n1.min(n2) });
    }
    let svd = transform_svd(t, spec)?;
    let mut a = QTensor3::zeros((r, n1, n3));
    let mut b = QTensor3::zeros((r, n2, n3));
    let mut ab = QTensor3::zeros((n1, n2, n3));
    let ones = vec![1.0; r];
    for (k, s) in svd.slices().iter().enumerate() {
        a.set_frontal_slice(k, &leading_rows(&s.u, r));
        b.set_frontal_slice(k, &leading_rows(&s.v, r));
        ab.set_frontal_slice(k, &recompose(&s.u, &ones, &s.v));
    }
    Ok(TruncatedFactors {
        a: mode3_transform(&a, spec, Direction::Inverse)?,
        b: mode3_transform(&b, spec, Direction::Inverse)?,
        ah_b: mode3_transform(&ab, spec, Direction::Inverse)?,
    })
}

/// First `r` columns of `m`, conjugate transposed.
fn leading_rows(m: &QMatrix, r: usize) -> QMatrix {
    QMatrix::from_fn(r, m.rows(), |i, j| m[(j, i)].conj())
}

/// `T` subproblem: prox of the rank penalty at
/// `G = ½[H − Y/β + C⁻¹(S + Z/β)]` with weight `1/(2β)`.
///
/// Returns the new `T` and its rank penalty.
pub fn update_t(
    state: &SolverState,
    cfg: &SolverConfig,
    ctx: &QtdctContext,
    spec: &TransformSpec,
) -> Result<(QTensor3, f64)> {
    let beta = state.beta;
    let mut sz = state.s.clone();
    sz.axpy(1.0 / beta, &state.z);
    let mut g = ctx.inverse(&sz)?;
    g.axpy(1.0, &state.h);
    g.axpy(-1.0 / beta, &state.y);
    let g = g.scale(0.5);

    let tau = 1.0 / (2.0 * beta);
    let svd = transform_svd(&g, spec)?;
    match cfg.variant {
        Variant::Rnns1 => {
            let shrink = |s: f64| (s - tau).max(0.0);
            let penalty = svd.spectrum().values().map(shrink).sum();
            Ok((svd.recompose_with(spec, shrink)?, penalty))
        }
        Variant::Rnns2 => {
            let params = LogPenaltyParams::new(tau, cfg.log_eps)?;
            let shrink = |s: f64| log_scalar_threshold(s, &params);
            let penalty =
                svd.spectrum().values().map(|s| (shrink(s) + cfg.log_eps).ln() - cfg.log_eps.ln()).sum();
            Ok((svd.recompose_with(spec, shrink)?, penalty))
        }
    }
}

/// `S` subproblem: soft threshold of `C(T) − Z/β` at `4λ/β`.
///
/// `ct` is `C(T)` for the freshly updated `T`.
pub fn update_s(ct: &QTensor3, z: &QTensor3, beta: f64, cfg: &SolverConfig) -> QTensor3 {
    let mut x = ct.clone();
    x.axpy(-1.0 / beta, z);
    l1_prox(&x, 4.0 * cfg.lambda / beta)
}

/// `H` subproblem: `T + (Y + Aᴴ ⋆ B)/β`, then the observed entries reset to `O`.
pub fn update_h(
    t: &QTensor3,
    y: &QTensor3,
    beta: f64,
    obs: &Observation,
    factors: &TruncatedFactors,
) -> Result<QTensor3> {
    if t.dims() != obs.dims() || factors.ah_b.dims() != obs.dims() {
        return Err(dims_mismatch("update_h", obs.dims(), t.dims()));
    }
    let mut h = t.clone();
    h.axpy(1.0 / beta, y);
    h.axpy(1.0 / beta, &factors.ah_b);
    obs.mask().impose(&mut h, obs.data());
    Ok(h)
}

/// Fresh multiplier tensor with components uniform in `[−0.01, 0.01]`.
fn random_multiplier(dims: (usize, usize, usize), rng: &mut ChaCha8Rng) -> QTensor3 {
    QTensor3::from_fn(dims, |_, _, _| {
        let mut c = || rng.gen_range(-0.01..=0.01);
        Quaternion::new(c(), c(), c(), c())
    })
}

/// Initial ADMM state for outer pass `pass`, starting from `t`.
pub fn initial_state(
    t: &QTensor3,
    cfg: &SolverConfig,
    ctx: &QtdctContext,
    pass: usize,
) -> Result<SolverState> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(pass as u64);
    let y = random_multiplier(t.dims(), &mut rng);
    let z = random_multiplier(t.dims(), &mut rng);
    Ok(SolverState { t: t.clone(), s: ctx.forward(t)?, h: t.clone(), y, z, beta: cfg.beta1, k: 0 })
}

/// Runs ADMM from `state` until the step falls below `tol = eps_inner·‖O‖_F`
/// with both constraint residuals below `10·tol`, or `max_inner` iterations
/// have run.
pub fn admm_inner(
    obs: &Observation,
    cfg: &SolverConfig,
    factors: &TruncatedFactors,
    ctx: &QtdctContext,
    spec: &TransformSpec,
    mut state: SolverState,
    outer: usize,
) -> Result<InnerOutcome> {
    let tol = cfg.eps_inner * obs.data().frobenius_norm();
    let mut trace = Vec::new();
    let mut converged = false;
    while state.k < cfg.max_inner {
        let beta = state.beta;
        let (t, penalty) = update_t(&state, cfg, ctx, spec)?;
        let ct = ctx.forward(&t)?;
        let s = update_s(&ct, &state.z, beta, cfg);
        let h = update_h(&t, &state.y, beta, obs, factors)?;

        let th = t.sub(&h);
        let sc = s.sub(&ct);
        state.y.axpy(beta, &th);
        state.z.axpy(beta, &sc);
        let step = t.distance(&state.t);
        let record = IterationRecord {
            outer,
            inner: state.k,
            beta,
            residual_th: th.frobenius_norm(),
            residual_sc: sc.frobenius_norm(),
            step,
            objective: penalty + cfg.lambda * s.l1_norm(),
        };
        trace.push(record);

        state.t = t;
        state.s = s;
        state.h = h;
        state.beta = (cfg.rho * beta).min(cfg.beta_max);
        state.k += 1;
        // A stalled iterate with large residuals is not a solution.
        if step <= tol && record.residual_th <= 10.0 * tol && record.residual_sc <= 10.0 * tol {
            converged = true;
            break;
        }
    }
    Ok(InnerOutcome { state, trace, converged })
}

/// Full recovery. The returned tensor matches `O` exactly on `Ω`.
pub fn solve(
    obs: &Observation,
    cfg: &SolverConfig,
    ctx: &QtdctContext,
    spec: &TransformSpec,
) -> Result<(QTensor3, SolveReport)> {
    let start = Instant::now();
    let r = cfg.validate(obs.dims())?;
    spec.check(obs.data(), "solve")?;
    if ctx.dims() != obs.dims() {
        return Err(dims_mismatch("solve", obs.dims(), ctx.dims()));
    }
    let tol = cfg.eps_outer * obs.data().frobenius_norm();

    let mut t = obs.data().clone();
    let mut report = SolveReport {
        outer_iterations: 0,
        inner_iterations: Vec::new(),
        outer_steps: Vec::new(),
        trace: Vec::new(),
        iteration_limit: false,
        elapsed: Duration::ZERO,
        residuals: (0.0, 0.0),
    };
    let mut converged = false;
    for pass in 0..cfg.max_outer {
        let factors = truncated_factors(&t, r, spec)?;
        let state = initial_state(&t, cfg, ctx, pass)?;
        let inner = admm_inner(obs, cfg, &factors, ctx, spec, state, pass)?;
        report.iteration_limit |= !inner.converged;
        report.inner_iterations.push(inner.state.k);
        if let Some(last) = inner.trace.last() {
            report.residuals = (last.residual_th, last.residual_sc);
        }
        report.trace.extend(inner.trace);
        let step = inner.state.t.distance(&t);
        report.outer_steps.push(step);
        report.outer_iterations = pass + 1;
        t = inner.state.t;
        if step <= tol {
            converged = true;
            break;
        }
    }
    report.iteration_limit |= !converged;
    obs.mask().impose(&mut t, obs.data());
    report.elapsed = start.elapsed();
    Ok((t, report))
}

/// Data-only baseline: observed entries kept, missing ones zero.
pub fn zero_filled(obs: &Observation) -> QTensor3 {
    obs.data().clone()
}
