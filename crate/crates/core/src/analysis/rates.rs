//! Closed-form local linear rates of Forward-Backward after identification.
//!
//! | regime            | rate at step `g`                           | admissible steps          |
//! |-------------------|--------------------------------------------|---------------------------|
//! | `QGeneral`        | `sqrt(1 - 2 a g + b^2 g^2)`                | `(0, min(2a/b^2, 2/b))`   |
//! | `RSubspace`       | `sqrt(1 - 2 a g + nu^2 g^2)`               | `(0, min(2a/nu^2, 2/b))`  |
//! | `QQuadratic`      | `sqrt(1 - 2 s_m g + s_max^2 g^2)`          | `(0, 2 s_m / s_max^2)`    |
//! | `RQuadratic`      | `max(|1 - g s_m|, |1 - g s_M|)`            | `(0, 2 / s_max)`          |
//! | `DegeneratePsfls` | `QGeneral` with `a` the smallest nonzero restricted eigenvalue |   |
//!
//! Every rate is convex in `g`, so the worst rate over a schedule is
//! attained at one of its bounds, and the best admissible rate is at the
//! vertex when that lies inside the admissible interval.

use crate::error::{Error, Result};
use crate::linalg::{restricted_eigenvalues, DenseMatrix, SubspaceBasis};
use crate::regularizers::PartialSmoothnessClass;
use crate::smooth::SmoothTerm;
use crate::solver::StepSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    QGeneral,
    RSubspace,
    QQuadratic,
    RQuadratic,
    DegeneratePsfls,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::QGeneral => "Q_general",
            Regime::RSubspace => "R_subspace",
            Regime::QQuadratic => "Q_quadratic",
            Regime::RQuadratic => "R_quadratic",
            Regime::DegeneratePsfls => "Degenerate_PSFLS",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Regime::QGeneral, Regime::RSubspace, Regime::QQuadratic, Regime::RQuadratic, Regime::DegeneratePsfls]
            .into_iter()
            .find(|r| r.label().eq_ignore_ascii_case(s))
    }
}

/// Constants entering the rate formulas; unused ones are `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RateParams {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub nu: Option<f64>,
    pub sigma_m: Option<f64>,
    pub sigma_big: Option<f64>,
    pub sigma_max: Option<f64>,
    /// Condition number `sigma_M / sigma_m`.
    pub phi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatePrediction {
    pub regime: Regime,
    /// Worst rate over the schedule.
    pub rho: f64,
    /// `(gamma, rho(gamma))` at the schedule's distinct steps (bounds for
    /// random schedules).
    pub per_step: Vec<(f64, f64)>,
    pub params: RateParams,
    /// Open interval of steps with `rho < 1`.
    pub gamma_validity: (f64, f64),
    /// Rate-optimal constant step, when it is admissible.
    pub gamma_opt: Option<f64>,
    /// Best rate over admissible constant steps (an infimum when
    /// `gamma_opt` is `None`).
    pub rho_opt: f64,
    /// The prediction is a bound that is not expected to be tight.
    pub upper_bound: bool,
}

impl RatePrediction {
    /// Rate at a given constant step under this prediction's regime.
    pub fn rho_at(&self, gamma: f64) -> f64 {
        let p = &self.params;
        match self.regime {
            Regime::QGeneral | Regime::DegeneratePsfls => quad_rate(p.alpha.unwrap(), p.beta.unwrap(), gamma),
            Regime::RSubspace => quad_rate(p.alpha.unwrap(), p.nu.unwrap(), gamma),
            Regime::QQuadratic => quad_rate(p.sigma_m.unwrap(), p.sigma_max.unwrap(), gamma),
            Regime::RQuadratic => linear_rate(p.sigma_m.unwrap(), p.sigma_big.unwrap(), gamma),
        }
    }
}

/// `sqrt(1 - 2 a g + c^2 g^2)`, clamped at zero.
fn quad_rate(a: f64, c: f64, g: f64) -> f64 {
    (1.0 - 2.0 * a * g + c * c * g * g).max(0.0).sqrt()
}

fn linear_rate(lo: f64, hi: f64, g: f64) -> f64 {
    (1.0 - g * lo).abs().max((1.0 - g * hi).abs())
}

fn schedule_steps(schedule: &StepSchedule) -> Vec<f64> {
    let mut gs = match schedule {
        StepSchedule::Constant(g) => vec![*g],
        StepSchedule::Cyclic(gs) => gs.clone(),
        StepSchedule::RandomInInterval { lo, hi, .. } => vec![*lo, *hi],
    };
    gs.sort_by(|a, b| a.total_cmp(b));
    gs.dedup();
    gs
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {v}")))
    }
}

fn check_steps(lo: f64, hi: f64, limit: f64) -> Result<()> {
    if lo > 0.0 && lo <= hi && hi < limit {
        Ok(())
    } else {
        Err(Error::StepOutOfRange { lo, hi, limit })
    }
}

fn assemble(
    regime: Regime,
    params: RateParams,
    steps: Vec<f64>,
    limit: f64,
    vertex: f64,
    rate: impl Fn(f64) -> f64,
) -> RatePrediction {
    let per_step: Vec<(f64, f64)> = steps.iter().map(|&g| (g, rate(g))).collect();
    let rho = per_step.iter().map(|p| p.1).fold(0.0, f64::max);
    let (gamma_opt, rho_opt) = if vertex < limit { (Some(vertex), rate(vertex)) } else { (None, rate(limit)) };
    RatePrediction {
        regime,
        rho,
        per_step,
        params,
        gamma_validity: (0.0, limit),
        gamma_opt,
        rho_opt,
        upper_bound: false,
    }
}

/// Q-linear rate for a general partly smooth `J`:
/// `rho^2 = max(q(lo), q(hi))`, `q(g) = 1 - 2 alpha g + beta^2 g^2`.
pub fn predict_rate_q_general(alpha: f64, beta: f64, gamma_lo: f64, gamma_hi: f64) -> Result<RatePrediction> {
    check_positive("alpha", alpha)?;
    check_positive("beta", beta)?;
    let limit = (2.0 * alpha / (beta * beta)).min(2.0 / beta);
    check_steps(gamma_lo, gamma_hi, limit)?;
    let mut steps = vec![gamma_lo, gamma_hi];
    steps.dedup();
    let params = RateParams { alpha: Some(alpha), beta: Some(beta), ..Default::default() };
    Ok(assemble(Regime::QGeneral, params, steps, limit, alpha / (beta * beta), |g| quad_rate(alpha, beta, g)))
}

/// Rate for a flat active manifold: `rho_k^2 = 1 - 2 alpha g_k + nu^2 g_k^2`,
/// optimal `sqrt(1 - alpha^2 / nu^2)` at `g = alpha / nu^2`.
pub fn predict_rate_r_subspace(alpha: f64, nu: f64, beta: f64, schedule: &StepSchedule) -> Result<RatePrediction> {
    check_positive("alpha", alpha)?;
    check_positive("nu", nu)?;
    check_positive("beta", beta)?;
    let limit = (2.0 * alpha / (nu * nu)).min(2.0 / beta);
    let (lo, hi) = schedule.bounds();
    check_steps(lo, hi, limit)?;
    let params = RateParams { alpha: Some(alpha), beta: Some(beta), nu: Some(nu), ..Default::default() };
    let vertex = alpha / (nu * nu);
    let mut pred = assemble(Regime::RSubspace, params, schedule_steps(schedule), limit, vertex, |g| {
        quad_rate(alpha, nu, g)
    });
    if pred.gamma_opt.is_some() {
        pred.rho_opt = (1.0 - alpha * alpha / (nu * nu)).max(0.0).sqrt();
    }
    Ok(pred)
}

/// Refined rates for quadratic `F`. Flat classes get the R-linear rate
/// `max(|1 - g s_m|, |1 - g s_M|)` with optimum `(phi - 1)/(phi + 1)` at
/// `g = 2/(s_m + s_M)`; general manifolds get the Q-linear rate
/// `q(g) = 1 - 2 s_m g + s_max^2 g^2`.
pub fn predict_rate_quadratic(
    sigma_m: f64,
    sigma_big: f64,
    sigma_max: f64,
    schedule: &StepSchedule,
    class: PartialSmoothnessClass,
) -> Result<RatePrediction> {
    if !(sigma_m > 0.0) {
        return Err(Error::RestrictedInjectivityFails(sigma_m));
    }
    check_positive("sigma_M", sigma_big)?;
    check_positive("sigma_max", sigma_max)?;
    if sigma_m > sigma_big || sigma_big > sigma_max * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "need sigma_m <= sigma_M <= sigma_max, got {sigma_m}, {sigma_big}, {sigma_max}"
        )));
    }
    let (lo, hi) = schedule.bounds();
    let phi = sigma_big / sigma_m;
    let params = RateParams {
        sigma_m: Some(sigma_m),
        sigma_big: Some(sigma_big),
        sigma_max: Some(sigma_max),
        phi: Some(phi),
        ..Default::default()
    };
    if class.is_flat() {
        let limit = 2.0 / sigma_max;
        check_steps(lo, hi, limit)?;
        let vertex = 2.0 / (sigma_m + sigma_big);
        let mut pred = assemble(Regime::RQuadratic, params, schedule_steps(schedule), limit, vertex, |g| {
            linear_rate(sigma_m, sigma_big, g)
        });
        if pred.gamma_opt.is_some() {
            pred.rho_opt = (phi - 1.0) / (phi + 1.0);
        }
        Ok(pred)
    } else {
        let limit = 2.0 * sigma_m / (sigma_max * sigma_max);
        check_steps(lo, hi, limit)?;
        let vertex = sigma_m / (sigma_max * sigma_max);
        Ok(assemble(Regime::QQuadratic, params, schedule_steps(schedule), limit, vertex, |g| {
            quad_rate(sigma_m, sigma_max, g)
        }))
    }
}

/// Relative threshold separating zero from nonzero restricted eigenvalues.
const KERNEL_REL_TOL: f64 = 1e-10;

/// Rate when `A` is not injective on `T` (flat manifold, constant sign):
/// `alpha` is the smallest nonzero eigenvalue of `B^T A^T A B`, i.e. the
/// curvature on `T` orthogonal to `V = ker(A_T)`, and the rate follows
/// `q(g) = 1 - 2 alpha g + beta^2 g^2`. The bound is R-linear,
/// `||x_k - x*|| <= C rho^k`.
pub fn predict_rate_degenerate(f: &SmoothTerm, t: &SubspaceBasis, schedule: &StepSchedule) -> Result<RatePrediction> {
    if t.dim() == 0 {
        return Err(Error::InvalidArgument("empty model subspace".into()));
    }
    let eig = restricted_eigenvalues(f.operator(), t);
    let top = eig.last().cloned().unwrap_or(0.0).max(0.0);
    let beta = f.lipschitz_beta();
    let cut = KERNEL_REL_TOL * beta.max(top);
    let kernel_dim = eig.iter().filter(|&&e| e <= cut).count();
    if kernel_dim == 0 {
        return Err(Error::NotDegenerate);
    }
    let alpha = eig
        .iter()
        .cloned()
        .find(|&e| e > cut)
        .ok_or_else(|| Error::InvalidArgument("A vanishes on the model subspace".into()))?;
    let limit = (2.0 * alpha / (beta * beta)).min(2.0 / beta);
    let (lo, hi) = schedule.bounds();
    check_steps(lo, hi, limit)?;
    let params = RateParams { alpha: Some(alpha), beta: Some(beta), sigma_max: Some(beta), ..Default::default() };
    Ok(assemble(
        Regime::DegeneratePsfls,
        params,
        schedule_steps(schedule),
        limit,
        alpha / (beta * beta),
        |g| quad_rate(alpha, beta, g),
    ))
}

/// Dimension of `ker(A) ∩ T` at the same threshold used by
/// [`predict_rate_degenerate`].
pub fn restricted_kernel_dim(a: &DenseMatrix, t: &SubspaceBasis, beta: f64) -> usize {
    if t.dim() == 0 {
        return 0;
    }
    let eig = restricted_eigenvalues(a, t);
    let top = eig.last().cloned().unwrap_or(0.0).max(0.0);
    let cut = KERNEL_REL_TOL * beta.max(top);
    eig.iter().filter(|&&e| e <= cut).count()
}
