//! Forward-Backward iteration `x_{k+1} = prox_{gamma_k J}(x_k - gamma_k grad F(x_k))`
//! with trajectory recording, plus a polished high-accuracy reference
//! solution.

use log::warn;
use nalgebra::Cholesky;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{check_finite, DenseVector};
use crate::regularizers::{default_zero_tol, ManifoldDescriptor, Regularizer};
use crate::smooth::SmoothTerm;

/// Iterates are kept in full only up to this dimension.
pub const STORE_ITERATES_MAX_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum StepSchedule {
    Constant(f64),
    /// Steps repeat cyclically.
    Cyclic(Vec<f64>),
    /// Independent uniform draws from `[lo, hi]`, reproducible from `seed`.
    RandomInInterval { lo: f64, hi: f64, seed: u64 },
}

impl StepSchedule {
    /// Smallest and largest step the schedule can produce.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            StepSchedule::Constant(g) => (*g, *g),
            StepSchedule::Cyclic(gs) => (
                gs.iter().cloned().fold(f64::INFINITY, f64::min),
                gs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            ),
            StepSchedule::RandomInInterval { lo, hi, .. } => (*lo, *hi),
        }
    }

    /// Checks `0 < lo <= hi < 2 / beta`.
    pub fn validate(&self, beta: f64) -> Result<()> {
        if let StepSchedule::Cyclic(gs) = self {
            if gs.is_empty() {
                return Err(Error::InvalidArgument("empty cyclic schedule".into()));
            }
        }
        let (lo, hi) = self.bounds();
        let limit = 2.0 / beta;
        if !(lo > 0.0) || !(lo <= hi) || !(hi < limit) {
            return Err(Error::StepOutOfRange { lo, hi, limit });
        }
        Ok(())
    }

    fn sequence(&self) -> StepSequence<'_> {
        let rng = match self {
            StepSchedule::RandomInInterval { seed, .. } => Some(ChaCha8Rng::seed_from_u64(*seed)),
            _ => None,
        };
        StepSequence { schedule: self, k: 0, rng }
    }
}

struct StepSequence<'a> {
    schedule: &'a StepSchedule,
    k: usize,
    rng: Option<ChaCha8Rng>,
}

impl StepSequence<'_> {
    fn next_step(&mut self) -> f64 {
        let g = match self.schedule {
            StepSchedule::Constant(g) => *g,
            StepSchedule::Cyclic(gs) => gs[self.k % gs.len()],
            StepSchedule::RandomInInterval { lo, hi, .. } => {
                let u: f64 = self.rng.as_mut().expect("seeded").random();
                lo + (hi - lo) * u
            }
        };
        self.k += 1;
        g
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Stop once `||x_{k+1} - x_k|| / gamma_k <= stop_tol`.
    pub stop_tol: f64,
    pub record_every: usize,
    /// Manifold detection tolerance; `None` uses [`default_zero_tol`] per iterate.
    pub zero_tol: Option<f64>,
    /// Keep full iterates (only honoured when `n <= STORE_ITERATES_MAX_DIM`).
    pub store_iterates: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { max_iters: 50_000, stop_tol: 1e-10, record_every: 1, zero_tol: None, store_iterates: true }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be >= 1".into()));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidArgument("record_every must be >= 1".into()));
        }
        if !(self.stop_tol >= 0.0) {
            return Err(Error::InvalidArgument("stop_tol must be >= 0".into()));
        }
        if let Some(t) = self.zero_tol {
            if !(t >= 0.0) {
                return Err(Error::InvalidArgument("zero_tol must be >= 0".into()));
            }
        }
        Ok(())
    }

    pub(crate) fn zero_tol_for(&self, x: &DenseVector) -> f64 {
        self.zero_tol.unwrap_or_else(|| default_zero_tol(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIterations,
}

impl Termination {
    pub fn label(self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::MaxIterations => "max-iterations",
        }
    }
}

/// One recorded iterate.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub k: usize,
    /// Step that produced `x_k` (for `k = 0`, the first scheduled step).
    pub gamma: f64,
    pub x: Option<DenseVector>,
    pub dist: Option<f64>,
    pub objective: f64,
    pub descriptor: ManifoldDescriptor,
    pub manifold_dim: usize,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub records: Vec<TrajectoryRecord>,
    pub termination: Termination,
    /// Number of FB steps taken.
    pub iterations: usize,
    pub final_x: DenseVector,
    /// Final fixed-point residual `||x_{k+1} - x_k|| / gamma_k`.
    pub final_residual: f64,
    /// `||x_ref||` when a reference point was supplied.
    pub ref_norm: Option<f64>,
}

impl Trajectory {
    pub fn distances(&self) -> Vec<Option<f64>> {
        self.records.iter().map(|r| r.dist).collect()
    }
}

#[allow(clippy::too_many_arguments)]
fn record(
    f: &SmoothTerm,
    j: &Regularizer,
    x: &DenseVector,
    k: usize,
    gamma: f64,
    cfg: &SolverConfig,
    store: bool,
    x_ref: Option<&DenseVector>,
) -> Result<TrajectoryRecord> {
    let descriptor = j.descriptor(x, cfg.zero_tol_for(x))?;
    let manifold_dim = j.tangent_dim(&descriptor, x.len());
    Ok(TrajectoryRecord {
        k,
        gamma,
        x: store.then(|| x.clone()),
        dist: x_ref.map(|r| (x - r).norm()),
        objective: f.value(x)? + j.value(x)?,
        descriptor,
        manifold_dim,
    })
}

/// Runs Forward-Backward from `x0` until the fixed-point residual drops to
/// `cfg.stop_tol` or `cfg.max_iters` steps are taken.
pub fn fb_solve(
    f: &SmoothTerm,
    j: &Regularizer,
    x0: &DenseVector,
    schedule: &StepSchedule,
    cfg: &SolverConfig,
    x_ref: Option<&DenseVector>,
) -> Result<Trajectory> {
    cfg.validate()?;
    schedule.validate(f.lipschitz_beta())?;
    ensure_dim(f.dim(), x0.len())?;
    check_finite(x0, "initial point")?;
    if let Some(r) = x_ref {
        ensure_dim(f.dim(), r.len())?;
    }
    let store = cfg.store_iterates && x0.len() <= STORE_ITERATES_MAX_DIM;
    let mut steps = schedule.sequence();
    let mut gamma = steps.next_step();
    let mut x = x0.clone();
    let mut records = vec![record(f, j, &x, 0, gamma, cfg, store, x_ref)?];
    let mut termination = Termination::MaxIterations;
    let mut residual = f64::INFINITY;
    let mut k = 0;
    while k < cfg.max_iters {
        if k > 0 {
            gamma = steps.next_step();
        }
        let grad = f.gradient(&x)?;
        let next = j.prox(&(&x - gamma * grad), gamma)?;
        if !next.iter().all(|v| v.is_finite()) {
            return Err(Error::NumericalFailure(format!("non-finite iterate at k = {}", k + 1)));
        }
        residual = (&next - &x).norm() / gamma;
        x = next;
        k += 1;
        let done = residual <= cfg.stop_tol;
        if done || k % cfg.record_every == 0 || k == cfg.max_iters {
            records.push(record(f, j, &x, k, gamma, cfg, store, x_ref)?);
        }
        if done {
            termination = Termination::Converged;
            break;
        }
    }
    Ok(Trajectory {
        records,
        termination,
        iterations: k,
        final_x: x,
        final_residual: residual,
        ref_norm: x_ref.map(|r| r.norm()),
    })
}

/// High-accuracy minimizer with provenance.
#[derive(Debug, Clone)]
pub struct ReferenceSolution {
    pub x: DenseVector,
    /// Whether the restricted first-order system was solved and accepted.
    pub polished: bool,
    pub warning: Option<String>,
    pub iterations: usize,
    pub residual: f64,
}

/// Reference minimizer started from `x0 = 0`.
pub fn reference_solution(f: &SmoothTerm, j: &Regularizer, cfg: &SolverConfig) -> Result<ReferenceSolution> {
    reference_solution_from(f, j, &DenseVector::zeros(f.dim()), cfg)
}

/// FB with `gamma = 1/beta` down to a fixed-point residual of
/// `1e-12 (1 + ||y||)`, then, for regularizers with flat manifold and
/// constant sign, an exact solve of the first-order system on `T`:
/// `(A B)^T (A B) u = B^T (A^T y - lambda e)`, `x = B u`. The polished
/// point is kept only if its manifold descriptor is unchanged and its
/// non-degeneracy margin is positive. Points that are not polished are
/// refined by further FB steps until the step length stalls at rounding
/// level.
pub fn reference_solution_from(
    f: &SmoothTerm,
    j: &Regularizer,
    x0: &DenseVector,
    cfg: &SolverConfig,
) -> Result<ReferenceSolution> {
    let run_cfg = SolverConfig {
        stop_tol: 1e-12 * (1.0 + f.observations().norm()),
        record_every: cfg.max_iters,
        store_iterates: false,
        ..cfg.clone()
    };
    let beta = f.lipschitz_beta();
    let gamma = if beta > 0.0 { 1.0 / beta } else { 1.0 };
    let traj = fb_solve(f, j, x0, &StepSchedule::Constant(gamma), &run_cfg, None)?;
    let mut warning = None;
    if traj.termination == Termination::MaxIterations {
        warning = Some(format!(
            "reference run stopped at max_iters with residual {:.3e}",
            traj.final_residual
        ));
    }
    let x = traj.final_x;
    let mut out = ReferenceSolution {
        x,
        polished: false,
        warning,
        iterations: traj.iterations,
        residual: traj.final_residual,
    };
    if j.class().has_constant_sign() {
        let tol = cfg.zero_tol_for(&out.x);
        match polish(f, j, &out.x, tol) {
            Ok(Some(p)) => {
                out.x = p;
                out.polished = true;
            }
            Ok(None) => {}
            Err(e) => {
                warn!("reference polish skipped: {e}");
                out.warning.get_or_insert_with(|| format!("polish skipped: {e}"));
            }
        }
    }
    if !out.polished {
        let (x, extra) = refine(f, j, &out.x, gamma, cfg.max_iters)?;
        out.x = x;
        out.iterations += extra;
        out.residual = fixed_point_step(f, j, &out.x, gamma)?.1 / gamma;
    }
    Ok(out)
}

fn fixed_point_step(f: &SmoothTerm, j: &Regularizer, x: &DenseVector, gamma: f64) -> Result<(DenseVector, f64)> {
    let next = j.prox(&(x - gamma * f.gradient(x)?), gamma)?;
    let step = (&next - x).norm();
    Ok((next, step))
}

/// Keeps iterating until the step length stops decreasing (rounding level),
/// so that the reference is accurate well below the rate-fitting floor.
fn refine(f: &SmoothTerm, j: &Regularizer, x0: &DenseVector, gamma: f64, cap: usize) -> Result<(DenseVector, usize)> {
    let mut x = x0.clone();
    let mut best = f64::INFINITY;
    let mut stall = 0;
    let mut k = 0;
    while k < cap {
        let (next, step) = fixed_point_step(f, j, &x, gamma)?;
        x = next;
        k += 1;
        if step == 0.0 {
            break;
        }
        if step < 0.999 * best {
            best = step;
            stall = 0;
        } else {
            stall += 1;
            if stall >= 50 {
                break;
            }
        }
    }
    Ok((x, k))
}

fn polish(f: &SmoothTerm, j: &Regularizer, x: &DenseVector, zero_tol: f64) -> Result<Option<DenseVector>> {
    let t = j.model_subspace(x, zero_tol)?;
    if t.dim() == 0 {
        return Ok(Some(DenseVector::zeros(x.len())));
    }
    let e = j.generalized_sign(x, zero_tol)?.e;
    let b = t.basis.matrix();
    let ab = f.operator() * b;
    let gram = ab.tr_mul(&ab);
    let rhs = b.tr_mul(&(f.operator().tr_mul(f.observations()) - e));
    let chol = Cholesky::new(gram.clone())
        .ok_or_else(|| Error::NumericalFailure("restricted system is singular".into()))?;
    // reject numerically singular systems that still factor
    let diag_min = chol.l_dirty().diagonal().iter().cloned().fold(f64::INFINITY, f64::min);
    let diag_max = chol.l_dirty().diagonal().iter().cloned().fold(0.0, f64::max);
    if diag_min <= 1e-7 * diag_max {
        return Err(Error::NumericalFailure("restricted system is singular".into()));
    }
    let u = chol.solve(&rhs);
    let candidate = b * u;
    if j.descriptor(&candidate, zero_tol)? != t.descriptor {
        return Ok(None);
    }
    let dual = -f.gradient(&candidate)?;
    if j.nondegeneracy_margin(&candidate, &dual, zero_tol)? <= 0.0 {
        return Ok(None);
    }
    Ok(Some(candidate))
}
