// 1D total-variation deconvolution of a blurred piecewise-constant signal.

use fbps::harness::{deconvolution_experiment, ExperimentReport};

pub fn run_example() -> fbps::Result<ExperimentReport> {
    let report = deconvolution_experiment(64, 1.5, 4, 1e-3, 5e-3, 6)?;
    println!("{}", report.summary());
    if let Some(c) = &report.certificate {
        println!("jump set of the minimizer: {}", c.model.descriptor);
    }
    Ok(report)
}

fn main() -> fbps::Result<()> {
    run_example().map(|_| ())
}
