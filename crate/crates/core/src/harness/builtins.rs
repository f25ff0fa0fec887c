//! Frozen desk-scale experiment specs.

use super::rng::{gaussian_vector_from, stream_rng, Stream};
use super::{gen_gaussian_matrix, ExperimentSpec, Instance, OperatorModel, SignalModel};
use crate::analysis::{
    detect_identification, fit_observed_rate, predict_rate_degenerate, restricted_kernel_dim, IdentificationResult,
    RatePrediction,
};
use crate::error::{Error, Result};
use crate::linalg::DenseVector;
use crate::regularizers::Regularizer;
use crate::smooth::SmoothTerm;
use crate::solver::{fb_solve, reference_solution, ReferenceSolution, SolverConfig, StepSchedule, Trajectory};

/// Builtins run by `--builtin all`.
pub const BUILTIN_ALL: [&str; 6] = ["lasso-a", "tv-b", "linf-c", "group-d", "nuclear-e", "deconv-1d"];

/// Every builtin name, including the full-size nuclear-norm setting.
pub fn builtin_names() -> Vec<&'static str> {
    let mut v = BUILTIN_ALL.to_vec();
    v.push("nuclear-e-full");
    v
}

pub fn deconvolution_spec(seed: u64) -> ExperimentSpec {
    let mut spec = ExperimentSpec::new("deconv-1d", SignalModel::PiecewiseConstant { jumps: 8 }, 128, 128, seed);
    spec.operator = OperatorModel::Blur { kernel_sigma: 2.0 };
    spec
}

/// Spec of a builtin with its frozen seed, or `seed` when given.
pub fn builtin(name: &str, seed: Option<u64>) -> Result<ExperimentSpec> {
    let pick = |frozen: u64| seed.unwrap_or(frozen);
    let spec = match name {
        "lasso-a" => ExperimentSpec::new(name, SignalModel::Sparse { sparsity: 8 }, 48, 128, pick(1)),
        "tv-b" => ExperimentSpec::new(name, SignalModel::PiecewiseConstant { jumps: 8 }, 48, 128, pick(2)),
        "linf-c" => ExperimentSpec::new(name, SignalModel::Saturated { count: 10 }, 123, 128, pick(3)),
        "group-d" => {
            ExperimentSpec::new(name, SignalModel::BlockSparse { block_size: 4, active_blocks: 2 }, 48, 128, pick(4))
        }
        "nuclear-e" => {
            ExperimentSpec::new(name, SignalModel::LowRank { rows: 20, cols: 20, rank: 3 }, 333, 400, pick(5))
        }
        "nuclear-e-full" => {
            let mut s =
                ExperimentSpec::new(name, SignalModel::LowRank { rows: 50, cols: 50, rank: 5 }, 1425, 2500, pick(5));
            s.options.multistart = 0;
            s
        }
        "deconv-1d" => deconvolution_spec(pick(6)),
        _ => {
            return Err(Error::Config(format!(
                "unknown builtin {name:?}; expected one of {}",
                builtin_names().join(", ")
            )))
        }
    };
    Ok(spec)
}

/// Outcome of the rank-deficient Lasso run.
#[derive(Debug, Clone)]
pub struct DegenerateReport {
    pub instance: Instance,
    pub reference: ReferenceSolution,
    /// `dim(ker(A) ∩ T)`.
    pub kernel_dim: usize,
    pub gamma: f64,
    pub prediction: RatePrediction,
    pub trajectory: Trajectory,
    pub identification: IdentificationResult,
    pub observed_rate: Option<f64>,
}

impl DegenerateReport {
    /// Linear convergence no slower than the prediction allows.
    pub fn passes(&self) -> bool {
        self.observed_rate.is_some_and(|r| r < 1.0 && r <= self.prediction.rho + 0.02)
    }
}

/// Lasso whose columns 0 and 1 coincide, with both in the support of the
/// minimizer, so that `A` is not injective on the model subspace.
pub fn degenerate_lasso(seed: u64) -> Result<DegenerateReport> {
    let (m, n) = (40, 20);
    let mut a = gen_gaussian_matrix(m, n, seed);
    let dup = a.column(0).into_owned();
    a.set_column(1, &dup);
    let mut x_true = DenseVector::zeros(n);
    x_true[0] = 1.0;
    x_true[1] = 1.0;
    x_true[5] = -1.2;
    x_true[11] = 0.8;
    let w = gaussian_vector_from(&mut stream_rng(seed, Stream::Noise as u64), m);
    let y = &a * &x_true + 0.01 * w;
    let f = SmoothTerm::least_squares(a, y)?;
    let j = Regularizer::l1(0.5)?;
    let cfg = SolverConfig { max_iters: 500_000, ..Default::default() };
    let reference = reference_solution(&f, &j, &cfg)?;
    let tol = cfg.zero_tol_for(&reference.x);
    let target = j.model_subspace(&reference.x, tol)?;
    let beta = f.lipschitz_beta();
    let kernel_dim = restricted_kernel_dim(f.operator(), &target.basis, beta);
    // the vertex of the rate is below 1/beta; probe the alpha first
    let probe = predict_rate_degenerate(&f, &target.basis, &StepSchedule::Constant(1e-3 / beta))?;
    let alpha = probe.params.alpha.unwrap_or(0.0);
    let gamma = (alpha / (beta * beta)).min(1.0 / beta);
    let schedule = StepSchedule::Constant(gamma);
    let prediction = predict_rate_degenerate(&f, &target.basis, &schedule)?;
    let run_cfg = SolverConfig {
        max_iters: 200_000,
        stop_tol: 100.0 * f64::EPSILON * (1.0 + reference.x.norm()) / gamma,
        store_iterates: false,
        ..Default::default()
    };
    let trajectory = fb_solve(&f, &j, &DenseVector::zeros(n), &schedule, &run_cfg, Some(&reference.x))?;
    let identification = detect_identification(&trajectory, &target, &j)?;
    let observed_rate = identification.k.and_then(|k| fit_observed_rate(&trajectory, k).ok());
    Ok(DegenerateReport {
        instance: Instance { name: "degenerate-lasso".into(), f, j, x_true: Some(x_true), delta: 0.01 },
        reference,
        kernel_dim,
        gamma,
        prediction,
        trajectory,
        identification,
        observed_rate,
    })
}
