// Runs every builtin experiment (in parallel) and prints one summary line each.

use std::time::Instant;

use fbps::harness::{builtin, run_experiment, ExperimentReport, BUILTIN_ALL};
use rayon::prelude::*;

pub fn run_example() -> fbps::Result<Vec<ExperimentReport>> {
    let start = Instant::now();
    let reports = BUILTIN_ALL
        .par_iter()
        .map(|name| run_experiment(&builtin(name, None)?))
        .collect::<fbps::Result<Vec<_>>>()?;
    for r in &reports {
        println!("{}", r.summary());
    }
    println!("{} experiments in {:.1}s", reports.len(), start.elapsed().as_secs_f64());
    Ok(reports)
}

fn main() -> fbps::Result<()> {
    run_example().map(|_| ())
}
