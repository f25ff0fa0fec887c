// Runs an experiment described by a TOML configuration and writes the
// trajectory, report and plot files the CLI would write (into the
// directory given as the first argument, `results` by default).

use std::path::PathBuf;

use fbps::cli::config::{Problem, RunConfig};
use fbps::cli::write_outputs;
use fbps::harness::{build_instance, run_instance, ExperimentReport};

const CONFIG: &str = r#"
version = 1
name = "piecewise-demo"
signal = "piecewise"
jumps = 4
m = 40
n = 80
seed = 11
gamma = "auto"
multistart = 0
"#;

pub fn run_example() -> fbps::Result<ExperimentReport> {
    let cfg = RunConfig::parse(CONFIG)?;
    let problem = cfg.problem()?;
    let inst = match &problem {
        Problem::Generated(spec) => build_instance(spec)?,
        Problem::Explicit { instance, .. } => instance.clone(),
    };
    let spec = problem.spec();
    let report = run_instance(&inst, &spec.options, spec.seed)?;
    println!("{}", report.summary());
    Ok(report)
}

fn main() -> fbps::Result<()> {
    let report = run_example()?;
    let dir = std::env::args_os().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("results"));
    write_outputs(&report, &dir, true)?;
    println!("wrote {}", dir.display());
    Ok(())
}
