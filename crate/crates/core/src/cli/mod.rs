//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or runtime error, 2 certificate failure.
//! `FB_PS_THREADS` caps the number of experiments run in parallel by
//! `run --builtin all`.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::analysis::{
    certify, predict_rate_q_general, predict_rate_quadratic, predict_rate_r_subspace, RatePrediction, Regime,
};
use crate::error::{Error, Result};
use crate::harness::{
    build_instance, builtin, predict_for, regime_for, regime_vertex, choose_gamma, run_instance, ExperimentReport,
    ExperimentSpec, GammaPolicy, Instance, BUILTIN_ALL,
};
use crate::regularizers::PartialSmoothnessClass;
use crate::solver::{reference_solution, SolverConfig, StepSchedule};
use config::{Problem, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CERTIFICATE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fbps", version, about = "Forward-Backward splitting with partly smooth regularizers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run experiments and write trajectory/report CSV files and SVG plots.
    Run(SourceArgs),
    /// Print the non-degeneracy and restricted-injectivity certificates.
    Certify(SourceArgs),
    /// Print closed-form rate predictions.
    Predict(SourceArgs),
    /// Plot a trajectory CSV as an SVG convergence profile.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Builtin experiment name, or `all`.
    #[arg(long, conflicts_with = "config")]
    pub builtin: Option<String>,
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub no_plot: bool,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// auto | inv-beta | optimal | factor c for gamma = c / beta.
    #[arg(long)]
    pub gamma: Option<String>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Trajectory CSV with at least `k` and `dist` columns.
    pub trajectory: PathBuf,
    /// Output SVG path (defaults to the CSV path with an `.svg` extension).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Predicted rate drawn from the identification iteration.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Identification iteration; read from the `identified` column otherwise.
    #[arg(long = "identification-k")]
    pub identification_k: Option<f64>,
    #[arg(long)]
    pub title: Option<String>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Plot(a) => cmd_plot(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

struct Job {
    problem: Problem,
    out: PathBuf,
    plot: bool,
}

fn apply_flags(spec: &mut ExperimentSpec, a: &SourceArgs) -> Result<()> {
    if let Some(s) = a.seed {
        spec.seed = s;
    }
    if let Some(m) = a.max_iters {
        spec.options.max_iters = m;
    }
    if let Some(g) = &a.gamma {
        spec.options.gamma = GammaPolicy::parse(g)?;
    }
    Ok(())
}

fn jobs(a: &SourceArgs) -> Result<(Vec<Job>, Option<RunConfig>)> {
    let default_out = PathBuf::from("results");
    let mut out = Vec::new();
    let mut cfg_used = None;
    match (&a.builtin, &a.config) {
        (Some(name), None) => {
            let names: Vec<&str> = if name == "all" { BUILTIN_ALL.to_vec() } else { vec![name.as_str()] };
            for n in names {
                let mut spec = builtin(n, None)?;
                apply_flags(&mut spec, a)?;
                out.push(Job {
                    problem: Problem::Generated(spec),
                    out: a.out.clone().unwrap_or_else(|| default_out.clone()),
                    plot: !a.no_plot,
                });
            }
        }
        (None, Some(path)) => {
            let cfg = RunConfig::load(path)?;
            if cfg.predict_regime.is_none() {
                let mut problem = cfg.problem()?;
                apply_flags(problem.spec_mut(), a)?;
                let dir = a.out.clone().or_else(|| cfg.out.as_ref().map(PathBuf::from)).unwrap_or(default_out);
                out.push(Job { problem, out: dir, plot: !a.no_plot && cfg.plot.unwrap_or(true) });
            }
            cfg_used = Some(cfg);
        }
        _ => return Err(Error::Config("give exactly one of --builtin or --config".into())),
    }
    Ok((out, cfg_used))
}

fn instance_of(problem: &Problem) -> Result<Instance> {
    match problem {
        Problem::Generated(spec) => build_instance(spec),
        Problem::Explicit { instance, .. } => Ok(instance.clone()),
    }
}

fn run_job(job: &Job) -> Result<ExperimentReport> {
    let spec = job.problem.spec();
    let inst = instance_of(&job.problem)?;
    let report = run_instance(&inst, &spec.options, spec.seed)?;
    write_outputs(&report, &job.out, job.plot)?;
    Ok(report)
}

/// Writes `<name>.trajectory.csv`, `<name>.report.csv` and, with `plot`,
/// `<name>.svg` into `dir`.
pub fn write_outputs(report: &ExperimentReport, dir: &Path, plot: bool) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(format!("{}.trajectory.csv", report.name)), output::trajectory_csv(report)?)?;
    std::fs::write(dir.join(format!("{}.report.csv", report.name)), output::report_csv(report)?)?;
    if plot {
        let rho = report.prediction.as_ref().map(|p| p.rho);
        let svg = output::profile_svg(&report.name, &output::report_profile(report), rho);
        std::fs::write(dir.join(format!("{}.svg", report.name)), svg)?;
    }
    Ok(())
}

fn thread_cap() -> Option<usize> {
    std::env::var("FB_PS_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n > 0)
}

pub fn cmd_run(a: &SourceArgs) -> Result<i32> {
    let (jobs, _) = jobs(a)?;
    if jobs.is_empty() {
        return Err(Error::Config("configuration describes no experiment".into()));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::NumericalFailure(e.to_string()))?;
    let results: Vec<Result<ExperimentReport>> = pool.install(|| jobs.par_iter().map(run_job).collect());
    let mut code = EXIT_OK;
    for r in results {
        match r {
            Ok(report) => {
                println!("{}", report.summary());
                if !report.flags.certificate && code == EXIT_OK {
                    code = EXIT_CERTIFICATE;
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                code = EXIT_ERROR;
            }
        }
    }
    Ok(code)
}

pub fn cmd_certify(a: &SourceArgs) -> Result<i32> {
    let (jobs, _) = jobs(a)?;
    if jobs.is_empty() {
        return Err(Error::Config("configuration describes no instance".into()));
    }
    let mut code = EXIT_OK;
    for job in &jobs {
        let spec = job.problem.spec();
        let inst = instance_of(&job.problem)?;
        let cfg = SolverConfig {
            max_iters: spec.options.reference_max_iters,
            zero_tol: spec.options.zero_tol,
            ..Default::default()
        };
        let reference = reference_solution(&inst.f, &inst.j, &cfg)?;
        let c = certify(&inst.f, &inst.j, &reference.x, cfg.zero_tol_for(&reference.x))?;
        println!("name={}", inst.name);
        println!("regularizer={}", inst.j.name());
        println!("nondegeneracy_margin={}", c.nondegeneracy_margin);
        println!("alpha={}", c.alpha);
        println!("restricted_injectivity={}", c.restricted_injectivity);
        println!("uniqueness_implied={}", c.uniqueness_implied);
        println!("tangent_dim={}", c.tangent_dim);
        println!("manifold={}", c.model.descriptor);
        println!("residual={}", c.residual);
        println!("reference_polished={}", reference.polished);
        if let Some(w) = &reference.warning {
            println!("reference_warning={w}");
        }
        if !c.passes() {
            code = EXIT_CERTIFICATE;
        }
    }
    Ok(code)
}

fn print_prediction(p: &RatePrediction) {
    println!("regime={}", p.regime.label());
    println!("rho={}", p.rho);
    for (g, r) in &p.per_step {
        println!("rho(gamma={g})={r}");
    }
    println!("gamma_validity={},{}", p.gamma_validity.0, p.gamma_validity.1);
    match p.gamma_opt {
        Some(g) => println!("gamma_opt={g}"),
        None => println!("gamma_opt=none"),
    }
    println!("rho_opt={}", p.rho_opt);
    println!("upper_bound={}", p.upper_bound);
}

/// Prediction from the closed-form constants of a configuration.
pub fn predict_from_config(cfg: &RunConfig, regime: Regime) -> Result<RatePrediction> {
    let need = |v: Option<f64>, key: &str| v.ok_or_else(|| Error::Config(format!("{} needs `{key}`", regime.label())));
    let gammas = cfg.gammas.clone().ok_or_else(|| Error::Config("prediction needs `gammas`".into()))?;
    if gammas.is_empty() {
        return Err(Error::Config("`gammas` is empty".into()));
    }
    let schedule = if gammas.len() == 1 { StepSchedule::Constant(gammas[0]) } else { StepSchedule::Cyclic(gammas.clone()) };
    let (lo, hi) = schedule.bounds();
    match regime {
        Regime::QGeneral => predict_rate_q_general(need(cfg.alpha, "alpha")?, need(cfg.beta, "beta")?, lo, hi),
        Regime::RSubspace => {
            predict_rate_r_subspace(need(cfg.alpha, "alpha")?, need(cfg.nu, "nu")?, need(cfg.beta, "beta")?, &schedule)
        }
        Regime::QQuadratic | Regime::RQuadratic => {
            let class = if regime == Regime::RQuadratic {
                PartialSmoothnessClass::LinearSubspace
            } else {
                PartialSmoothnessClass::GeneralManifold
            };
            predict_rate_quadratic(
                need(cfg.sigma_m, "sigma_m")?,
                need(cfg.sigma_big, "sigma_M")?,
                need(cfg.sigma_max, "sigma_max")?,
                &schedule,
                class,
            )
        }
        Regime::DegeneratePsfls => Err(Error::Config(
            "Degenerate_PSFLS needs an instance; give `matrix`/`observations` or a builtin".into(),
        )),
    }
}

pub fn cmd_predict(a: &SourceArgs) -> Result<i32> {
    let (jobs, cfg) = jobs(a)?;
    if let Some(cfg) = &cfg {
        if let Some(regime) = cfg.regime()? {
            print_prediction(&predict_from_config(cfg, regime)?);
            return Ok(EXIT_OK);
        }
    }
    let mut code = EXIT_OK;
    for job in &jobs {
        let spec = job.problem.spec();
        let inst = instance_of(&job.problem)?;
        let cfg = SolverConfig {
            max_iters: spec.options.reference_max_iters,
            zero_tol: spec.options.zero_tol,
            ..Default::default()
        };
        let reference = reference_solution(&inst.f, &inst.j, &cfg)?;
        let c = certify(&inst.f, &inst.j, &reference.x, cfg.zero_tol_for(&reference.x))?;
        println!("name={}", inst.name);
        let curvature = match (c.passes(), c.curvature) {
            (true, Some(curv)) => curv,
            _ => {
                println!("certificate=fail");
                code = EXIT_CERTIFICATE;
                continue;
            }
        };
        let class = inst.j.class();
        let regime = regime_for(class);
        let beta = inst.f.lipschitz_beta();
        let gamma = choose_gamma(spec.options.gamma, beta, Some(regime_vertex(regime, &curvature)));
        print_prediction(&predict_for(regime, &curvature, class, gamma)?);
    }
    Ok(code)
}

pub fn cmd_plot(a: &PlotArgs) -> Result<i32> {
    let mut data = output::read_profile(&a.trajectory)?;
    if let Some(k) = a.identification_k {
        data.identified_at = Some(k);
    }
    if a.rho.is_some() && data.identified_at.is_none() {
        data.identified_at = data.points.first().map(|p| p.0);
    }
    let title = a.title.clone().unwrap_or_else(|| {
        a.trajectory.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    });
    let svg = output::profile_svg(&title, &data, a.rho);
    let out = a.out.clone().unwrap_or_else(|| a.trajectory.with_extension("svg"));
    std::fs::write(&out, svg)?;
    println!("wrote {}", out.display());
    Ok(EXIT_OK)
}
