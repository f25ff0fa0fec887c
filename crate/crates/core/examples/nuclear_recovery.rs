// Low-rank matrix recovery with the nuclear norm; the rank of the
// iterates is identified before linear convergence sets in.

use fbps::harness::{run_experiment, ExperimentReport, ExperimentSpec, SignalModel};

pub fn run_example() -> fbps::Result<ExperimentReport> {
    // 3 r (rows + cols - r) measurements
    let spec = ExperimentSpec::new("nuclear-small", SignalModel::LowRank { rows: 10, cols: 10, rank: 2 }, 108, 100, 3);
    let report = run_experiment(&spec)?;
    println!("{}", report.summary());
    if let Some(err) = report.recovery_error {
        println!("||x* - x0|| = {err:.3e}");
    }
    Ok(report)
}

fn main() -> fbps::Result<()> {
    run_example().map(|_| ())
}
