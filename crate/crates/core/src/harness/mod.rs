//! Desk-scale recovery experiments: seeded instances `y = A x_0 + w`, a
//! reference minimizer, certificates, rate predictions, a recorded FB run,
//! identification and rate fitting, assembled into an [`ExperimentReport`].

mod builtins;
mod rng;
mod signals;

pub use builtins::{builtin, builtin_names, degenerate_lasso, deconvolution_spec, DegenerateReport, BUILTIN_ALL};
pub use rng::{gen_gaussian_matrix, stream_rng, Stream};
pub use signals::{gen_signal, SignalModel};

use std::fmt::Write as _;

use crate::analysis::{
    certify, detect_identification, fit_observed_rate, predict_rate_q_general, predict_rate_quadratic,
    predict_rate_r_subspace, CertificateReport, IdentificationResult, RatePrediction, Regime,
};
use crate::error::{Error, Result};
use crate::linalg::DenseVector;
use crate::regularizers::{PartialSmoothnessClass, Regularizer};
use crate::smooth::{CurvatureReport, SmoothTerm};
use crate::solver::{fb_solve, reference_solution, reference_solution_from, ReferenceSolution, SolverConfig, StepSchedule, Trajectory};
use rng::gaussian_vector_from;

/// Measurement operator model.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorModel {
    /// `m x n` i.i.d. standard normal.
    Gaussian,
    /// Square 1D Gaussian blur (`m = n`).
    Blur { kernel_sigma: f64 },
}

/// How the constant step of the recorded run is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaPolicy {
    /// `min(1/beta, gamma_opt)` of the regime's rate.
    Auto,
    InverseBeta,
    /// The regime's rate-optimal step.
    Optimal,
    /// `c / beta`.
    Scaled(f64),
}

impl GammaPolicy {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(GammaPolicy::Auto),
            "inv-beta" => Ok(GammaPolicy::InverseBeta),
            "optimal" => Ok(GammaPolicy::Optimal),
            _ => match s.parse::<f64>() {
                Ok(c) if c > 0.0 && c < 2.0 => Ok(GammaPolicy::Scaled(c)),
                _ => Err(Error::Config(format!(
                    "gamma policy must be auto, inv-beta, optimal or a factor in (0, 2), got {s:?}"
                ))),
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            GammaPolicy::Auto => "auto".into(),
            GammaPolicy::InverseBeta => "inv-beta".into(),
            GammaPolicy::Optimal => "optimal".into(),
            GammaPolicy::Scaled(c) => format!("{c}"),
        }
    }
}

/// Solver-side settings shared by all experiment kinds.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub gamma: GammaPolicy,
    pub max_iters: usize,
    /// Stop tolerance of the recorded run; `None` stops at rounding level,
    /// `100 eps (1 + ||x*||) / gamma`.
    pub stop_tol: Option<f64>,
    pub record_every: usize,
    pub zero_tol: Option<f64>,
    /// Number of random starts for the uniqueness check (0 skips it).
    pub multistart: usize,
    /// Iteration cap of the reference and multi-start solves.
    pub reference_max_iters: usize,
    pub x0: Option<DenseVector>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            gamma: GammaPolicy::Auto,
            max_iters: 50_000,
            stop_tol: None,
            record_every: 1,
            zero_tol: None,
            multistart: 10,
            reference_max_iters: 200_000,
            x0: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub signal: SignalModel,
    pub m: usize,
    pub n: usize,
    pub operator: OperatorModel,
    /// Noise level; `None` uses `0.01 ||A x_0|| / sqrt(m)`.
    pub delta: Option<f64>,
    /// Regularization weight; `None` uses
    /// `lambda_scale * 2 delta sqrt(2 log n) * max_j ||a_j||`.
    pub lambda: Option<f64>,
    pub lambda_scale: f64,
    pub seed: u64,
    pub options: RunOptions,
}

impl ExperimentSpec {
    pub fn new(name: &str, signal: SignalModel, m: usize, n: usize, seed: u64) -> Self {
        Self {
            name: name.to_string(),
            signal,
            m,
            n,
            operator: OperatorModel::Gaussian,
            delta: None,
            lambda: None,
            lambda_scale: 1.0,
            seed,
            options: RunOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::InvalidArgument("dimensions must be positive".into()));
        }
        if let OperatorModel::Blur { kernel_sigma } = self.operator {
            if self.m != self.n {
                return Err(Error::InvalidArgument("blur operator needs m = n".into()));
            }
            if !(kernel_sigma > 0.0) {
                return Err(Error::InvalidArgument("kernel_sigma must be positive".into()));
            }
        }
        if let Some(d) = self.delta {
            if !(d >= 0.0) || !d.is_finite() {
                return Err(Error::InvalidArgument(format!("delta must be >= 0, got {d}")));
            }
        }
        if let Some(l) = self.lambda {
            if !(l >= 0.0) || !l.is_finite() {
                return Err(Error::InvalidArgument(format!("lambda must be >= 0, got {l}")));
            }
        }
        if !(self.lambda_scale > 0.0) {
            return Err(Error::InvalidArgument("lambda_scale must be positive".into()));
        }
        self.signal.validate(self.n)
    }

    /// Regularizer matching the signal model, with weight `lambda`.
    pub fn regularizer(&self, lambda: f64) -> Result<Regularizer> {
        match self.signal {
            SignalModel::Sparse { .. } => Regularizer::l1(lambda),
            SignalModel::PiecewiseConstant { .. } => Regularizer::tv1d(lambda),
            SignalModel::Saturated { .. } => Regularizer::linf(lambda),
            SignalModel::BlockSparse { block_size, .. } => Regularizer::group_contiguous(self.n, block_size, lambda),
            SignalModel::LowRank { rows, cols, .. } => Regularizer::nuclear(rows, cols, lambda),
        }
    }
}

/// A generated problem `min 1/2 ||A x - y||^2 + lambda J(x)`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub f: SmoothTerm,
    pub j: Regularizer,
    pub x_true: Option<DenseVector>,
    pub delta: f64,
}

/// Draws `A`, `x_0` and the noise from their seeded streams and forms
/// `y = A x_0 + delta w`.
pub fn build_instance(spec: &ExperimentSpec) -> Result<Instance> {
    spec.validate()?;
    let x0 = gen_signal(&spec.signal, spec.n, spec.seed)?;
    let a = match spec.operator {
        OperatorModel::Gaussian => gen_gaussian_matrix(spec.m, spec.n, spec.seed),
        OperatorModel::Blur { kernel_sigma } => crate::smooth::gaussian_blur_operator(spec.n, kernel_sigma)?,
    };
    let clean = &a * &x0;
    let delta = spec.delta.unwrap_or_else(|| 0.01 * clean.norm() / (spec.m as f64).sqrt());
    let w = gaussian_vector_from(&mut stream_rng(spec.seed, Stream::Noise as u64), spec.m);
    let y = clean + delta * w;
    let lambda = match spec.lambda {
        Some(l) => l,
        None => {
            let col = a.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
            spec.lambda_scale * 2.0 * delta * (2.0 * (spec.n as f64).ln()).sqrt() * col
        }
    };
    let j = spec.regularizer(lambda)?;
    let f = match spec.operator {
        OperatorModel::Gaussian => SmoothTerm::least_squares(a, y)?,
        OperatorModel::Blur { kernel_sigma } => SmoothTerm::blur(kernel_sigma, y)?,
    };
    Ok(Instance { name: spec.name.clone(), f, j, x_true: Some(x0), delta })
}

/// Pass/fail outcome of each acceptance rule; `None` when a rule does not
/// apply (for instance, rates are not compared without a certificate).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AcceptanceFlags {
    pub certificate: bool,
    /// Finite `K` with at least [`MIN_CONFIRMING`] confirming records.
    pub identified: bool,
    pub rate: Option<bool>,
    pub uniqueness: Option<bool>,
}

impl AcceptanceFlags {
    pub fn all_pass(&self) -> bool {
        self.certificate && self.identified && self.rate != Some(false) && self.uniqueness != Some(false)
    }
}

pub const MIN_CONFIRMING: usize = 50;
/// Largest pairwise distance between multi-start solutions for uniqueness.
pub const UNIQUENESS_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub name: String,
    pub regularizer: String,
    pub class: PartialSmoothnessClass,
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    pub delta: f64,
    pub beta: f64,
    pub gamma: f64,
    pub reference: ReferenceSolution,
    pub certificate: Option<CertificateReport>,
    pub certificate_error: Option<String>,
    pub identification: IdentificationResult,
    pub prediction: Option<RatePrediction>,
    pub prediction_error: Option<String>,
    pub observed_rate: Option<f64>,
    pub trajectory: Trajectory,
    /// Largest pairwise distance between multi-start solutions.
    pub multistart_spread: Option<f64>,
    /// `||x* - x_0||`, when the ground truth is known.
    pub recovery_error: Option<f64>,
    pub flags: AcceptanceFlags,
}

impl ExperimentReport {
    /// Ordered `key,value` pairs of the report CSV. Floats use `{:.16e}` so
    /// that equal reports serialize to identical bytes.
    pub fn key_values(&self) -> Vec<(String, String)> {
        let mut kv: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: String| kv.push((k.to_string(), v));
        let num = |v: f64| format!("{v:.16e}");
        let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
        let flag = |b: bool| if b { "1".to_string() } else { "0".to_string() };
        let oflag = |b: Option<bool>| b.map(flag).unwrap_or_else(|| "na".into());
        put("name", self.name.clone());
        put("regularizer", self.regularizer.clone());
        put("class", self.class.label().into());
        put("m", self.m.to_string());
        put("n", self.n.to_string());
        put("lambda", num(self.lambda));
        put("delta", num(self.delta));
        put("beta", num(self.beta));
        put("gamma", num(self.gamma));
        put("reference_polished", flag(self.reference.polished));
        put("reference_residual", num(self.reference.residual));
        put("reference_warning", self.reference.warning.clone().unwrap_or_default());
        let c = self.certificate.as_ref();
        put("nondegeneracy_margin", opt(c.map(|c| c.nondegeneracy_margin)));
        put("alpha", opt(c.map(|c| c.alpha)));
        put("tangent_dim", c.map(|c| c.tangent_dim.to_string()).unwrap_or_default());
        put("manifold", c.map(|c| c.model.descriptor.to_string()).unwrap_or_default());
        put("certificate_error", self.certificate_error.clone().unwrap_or_default());
        let p = self.prediction.as_ref();
        put("regime", p.map(|p| p.regime.label().to_string()).unwrap_or_default());
        put("predicted_rate", opt(p.map(|p| p.rho)));
        put("prediction_upper_bound", p.map(|p| flag(p.upper_bound)).unwrap_or_default());
        put("gamma_opt", opt(p.and_then(|p| p.gamma_opt)));
        put("rho_opt", opt(p.map(|p| p.rho_opt)));
        put("prediction_error", self.prediction_error.clone().unwrap_or_default());
        put("observed_rate", opt(self.observed_rate));
        put("identification_k", self.identification.k.map(|k| k.to_string()).unwrap_or_default());
        put("confirming_records", self.identification.confirming_records.to_string());
        put("iterations", self.trajectory.iterations.to_string());
        put("termination", self.trajectory.termination.label().into());
        put("final_residual", num(self.trajectory.final_residual));
        put("multistart_spread", opt(self.multistart_spread));
        put("recovery_error", opt(self.recovery_error));
        put("pass_certificate", flag(self.flags.certificate));
        put("pass_identification", flag(self.flags.identified));
        put("pass_rate", oflag(self.flags.rate));
        put("pass_uniqueness", oflag(self.flags.uniqueness));
        put("pass_all", flag(self.flags.all_pass()));
        kv
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{}: ", self.name);
        match (&self.certificate, &self.certificate_error) {
            (Some(c), _) => {
                let _ = write!(s, "margin={:.3e} alpha={:.3e} ", c.nondegeneracy_margin, c.alpha);
            }
            (None, Some(e)) => {
                let _ = write!(s, "certificate error ({e}) ");
            }
            _ => {}
        }
        match self.identification.k {
            Some(k) => {
                let _ = write!(s, "K={k} (+{}) ", self.identification.confirming_records);
            }
            None => s.push_str("K=none "),
        }
        if let Some(p) = &self.prediction {
            let _ = write!(s, "{} rho={:.6} ", p.regime.label(), p.rho);
        }
        if let Some(r) = self.observed_rate {
            let _ = write!(s, "observed={r:.6} ");
        }
        s.push_str(if self.flags.all_pass() { "PASS" } else { "FAIL" });
        s
    }
}

/// Regime used for a regularizer class under quadratic `F`.
pub fn regime_for(class: PartialSmoothnessClass) -> Regime {
    match class {
        PartialSmoothnessClass::LinearSubspaceConstantSign => Regime::RQuadratic,
        PartialSmoothnessClass::LinearSubspace | PartialSmoothnessClass::AffineSubspace => Regime::RSubspace,
        PartialSmoothnessClass::GeneralManifold => Regime::QGeneral,
    }
}

/// Rate-optimal constant step of `regime` for the given curvature.
pub fn regime_vertex(regime: Regime, c: &CurvatureReport) -> f64 {
    match regime {
        Regime::RQuadratic => 2.0 / (c.sigma_m + c.sigma_big),
        Regime::RSubspace => c.alpha / (c.nu * c.nu),
        Regime::QQuadratic => c.sigma_m / (c.sigma_max * c.sigma_max),
        Regime::QGeneral | Regime::DegeneratePsfls => c.alpha / (c.sigma_max * c.sigma_max),
    }
}

/// Prediction of `regime` at a constant step `gamma`.
pub fn predict_for(
    regime: Regime,
    c: &CurvatureReport,
    class: PartialSmoothnessClass,
    gamma: f64,
) -> Result<RatePrediction> {
    let schedule = StepSchedule::Constant(gamma);
    match regime {
        Regime::RQuadratic | Regime::QQuadratic => {
            predict_rate_quadratic(c.sigma_m, c.sigma_big, c.sigma_max, &schedule, class)
        }
        Regime::RSubspace => {
            let mut p = predict_rate_r_subspace(c.alpha, c.nu, c.sigma_max, &schedule)?;
            p.upper_bound = true;
            Ok(p)
        }
        Regime::QGeneral | Regime::DegeneratePsfls => predict_rate_q_general(c.alpha, c.sigma_max, gamma, gamma),
    }
}

/// Step chosen by `policy`.
pub fn choose_gamma(policy: GammaPolicy, beta: f64, vertex: Option<f64>) -> f64 {
    let inv = 1.0 / beta;
    match (policy, vertex) {
        (GammaPolicy::InverseBeta, _) | (GammaPolicy::Auto, None) | (GammaPolicy::Optimal, None) => inv,
        (GammaPolicy::Auto, Some(v)) => inv.min(v),
        (GammaPolicy::Optimal, Some(v)) => v,
        (GammaPolicy::Scaled(c), _) => c / beta,
    }
}

/// Whether an observed rate agrees with a prediction: within 5% relative
/// for the sharp polyhedral rate, otherwise at most `rho + 0.02` (and
/// strictly below `rho` when the prediction is flagged as a bound).
pub fn rate_agrees(prediction: &RatePrediction, observed: f64) -> bool {
    let rho = prediction.rho;
    match prediction.regime {
        Regime::RQuadratic => (observed - rho).abs() <= 0.05 * rho,
        _ if prediction.upper_bound => observed <= rho + 0.02 && observed < rho,
        _ => observed <= rho + 0.02,
    }
}

fn pairwise_spread(points: &[DenseVector]) -> f64 {
    let mut spread: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            spread = spread.max((a - b).norm());
        }
    }
    spread
}

/// Solves from `count` Gaussian starts (stream `Multistart + i`, scaled by
/// `scale`) and returns the largest pairwise distance between solutions.
pub fn multistart_spread(inst: &Instance, count: usize, seed: u64, scale: f64, cfg: &SolverConfig) -> Result<f64> {
    let n = inst.f.dim();
    let mut points = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = stream_rng(seed, Stream::Multistart as u64 + i as u64);
        let x0 = scale * gaussian_vector_from(&mut rng, n);
        points.push(reference_solution_from(&inst.f, &inst.j, &x0, cfg)?.x);
    }
    Ok(pairwise_spread(&points))
}

/// Full pipeline on a given instance. `seed` only drives the multi-start
/// initial points.
pub fn run_instance(inst: &Instance, opts: &RunOptions, seed: u64) -> Result<ExperimentReport> {
    let f = &inst.f;
    let j = &inst.j;
    let beta = f.lipschitz_beta();
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument("operator is zero".into()));
    }
    let ref_cfg = SolverConfig { max_iters: opts.reference_max_iters, zero_tol: opts.zero_tol, ..Default::default() };
    let reference = reference_solution(f, j, &ref_cfg)?;
    let x_star = &reference.x;
    let zero_tol = ref_cfg.zero_tol_for(x_star);

    let (certificate, certificate_error) = match certify(f, j, x_star, zero_tol) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let class = j.class();
    let regime = regime_for(class);
    let passes = certificate.as_ref().is_some_and(|c| c.passes());
    let curvature = certificate.as_ref().filter(|_| passes).and_then(|c| c.curvature);
    let gamma = choose_gamma(opts.gamma, beta, curvature.as_ref().map(|c| regime_vertex(regime, c)));
    let (prediction, prediction_error) = match (&certificate, &curvature) {
        (Some(_), Some(c)) => match predict_for(regime, c, class, gamma) {
            Ok(p) => (Some(p), None),
            Err(e) => (None, Some(e.to_string())),
        },
        (Some(c), None) if passes && c.tangent_dim == 0 => (None, Some("model subspace is {0}".into())),
        _ => (None, Some("certificate does not pass; predictions do not apply".into())),
    };

    let x0 = opts.x0.clone().unwrap_or_else(|| DenseVector::zeros(f.dim()));
    let stop_tol = opts.stop_tol.unwrap_or(100.0 * f64::EPSILON * (1.0 + x_star.norm()) / gamma);
    let cfg = SolverConfig {
        max_iters: opts.max_iters,
        stop_tol,
        record_every: opts.record_every,
        zero_tol: opts.zero_tol,
        store_iterates: false,
    };
    let trajectory = fb_solve(f, j, &x0, &StepSchedule::Constant(gamma), &cfg, Some(x_star))?;
    let target = match &certificate {
        Some(c) => c.model.clone(),
        None => j.model_subspace(x_star, zero_tol)?,
    };
    let identification = detect_identification(&trajectory, &target, j)?;
    let observed_rate = match identification.k {
        Some(k) => fit_observed_rate(&trajectory, k).ok(),
        None => None,
    };

    let multistart_spread = if passes && opts.multistart >= 2 {
        let scale = 1.0f64.max(x_star.amax());
        Some(multistart_spread(inst, opts.multistart, seed, scale, &ref_cfg)?)
    } else {
        None
    };

    let flags = AcceptanceFlags {
        certificate: passes,
        identified: identification.confirming_records >= MIN_CONFIRMING,
        rate: match (&prediction, observed_rate) {
            (Some(p), Some(r)) => Some(rate_agrees(p, r)),
            (Some(_), None) => Some(false),
            _ => None,
        },
        uniqueness: multistart_spread.map(|s| s <= UNIQUENESS_TOL),
    };
    Ok(ExperimentReport {
        name: inst.name.clone(),
        regularizer: j.name().to_string(),
        class,
        n: f.dim(),
        m: f.operator().nrows(),
        lambda: j.weight(),
        delta: inst.delta,
        beta,
        gamma,
        recovery_error: inst.x_true.as_ref().map(|x0| (x_star - x0).norm()),
        reference,
        certificate,
        certificate_error,
        identification,
        prediction,
        prediction_error,
        observed_rate,
        trajectory,
        multistart_spread,
        flags,
    })
}

/// Generates the instance of `spec` and runs the full pipeline.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    let inst = build_instance(spec)?;
    run_instance(&inst, &spec.options, spec.seed)
}

/// 1D TV deconvolution: Gaussian blur of width `kernel_sigma` applied to a
/// piecewise-constant signal with `jump_count` jumps.
pub fn deconvolution_experiment(
    n: usize,
    kernel_sigma: f64,
    jump_count: usize,
    delta: f64,
    lambda: f64,
    seed: u64,
) -> Result<ExperimentReport> {
    let mut spec = deconvolution_spec(seed);
    spec.n = n;
    spec.m = n;
    spec.operator = OperatorModel::Blur { kernel_sigma };
    spec.signal = SignalModel::PiecewiseConstant { jumps: jump_count };
    spec.delta = Some(delta);
    spec.lambda = Some(lambda);
    run_experiment(&spec)
}

/// Non-degeneracy margins of the noiseless and the noisy instance of
/// `spec`, both at the weight the noisy instance uses.
pub fn noise_scaling_margins(spec: &ExperimentSpec) -> Result<(f64, f64)> {
    let noisy = build_instance(spec)?;
    let mut clean_spec = spec.clone();
    clean_spec.delta = Some(0.0);
    clean_spec.lambda = Some(noisy.j.weight());
    let clean = build_instance(&clean_spec)?;
    let cfg = SolverConfig { max_iters: spec.options.reference_max_iters, zero_tol: spec.options.zero_tol, ..Default::default() };
    let margin = |inst: &Instance| -> Result<f64> {
        let r = reference_solution(&inst.f, &inst.j, &cfg)?;
        let tol = cfg.zero_tol_for(&r.x);
        inst.j.nondegeneracy_margin(&r.x, &-inst.f.gradient(&r.x)?, tol)
    };
    Ok((margin(&clean)?, margin(&noisy)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_policy_parsing() {
        assert_eq!(GammaPolicy::parse("auto").unwrap(), GammaPolicy::Auto);
        assert_eq!(GammaPolicy::parse("1.5").unwrap(), GammaPolicy::Scaled(1.5));
        assert!(GammaPolicy::parse("2.0").is_err());
        assert!(GammaPolicy::parse("fast").is_err());
    }

    #[test]
    fn noiseless_square_instance_recovers_signal() {
        let mut spec = ExperimentSpec::new("square", SignalModel::Sparse { sparsity: 3 }, 12, 12, 11);
        spec.delta = Some(0.0);
        spec.lambda = Some(1e-9);
        let inst = build_instance(&spec).unwrap();
        let r = reference_solution(&inst.f, &inst.j, &SolverConfig { max_iters: 200_000, ..Default::default() }).unwrap();
        assert!((r.x - inst.x_true.unwrap()).amax() < 1e-6);
    }

    #[test]
    fn rate_rules() {
        let c = CurvatureReport { alpha: 1.0, nu: 3.0, sigma_m: 1.0, sigma_big: 3.0, sigma_max: 4.0 };
        let p = predict_for(Regime::RQuadratic, &c, PartialSmoothnessClass::LinearSubspaceConstantSign, 0.25).unwrap();
        assert_eq!(p.rho, 0.75);
        assert!(rate_agrees(&p, 0.76));
        assert!(!rate_agrees(&p, 0.70));
        let p = predict_for(Regime::RSubspace, &c, PartialSmoothnessClass::LinearSubspace, 0.1).unwrap();
        assert!(p.upper_bound);
        assert!(rate_agrees(&p, p.rho - 0.1));
        assert!(!rate_agrees(&p, p.rho));
    }
}
