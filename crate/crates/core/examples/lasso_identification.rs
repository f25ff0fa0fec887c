// Forward-Backward on a sparse recovery problem: the support of the
// iterates settles after finitely many steps, then the distance to the
// minimizer decays linearly.

use fbps::analysis::{certify, detect_identification, fit_observed_rate};
use fbps::harness::{build_instance, builtin};
use fbps::linalg::DenseVector;
use fbps::solver::{fb_solve, reference_solution, SolverConfig, StepSchedule};

pub struct Identification {
    pub k: Option<usize>,
    pub iterations: usize,
    pub observed_rate: Option<f64>,
}

pub fn run_example() -> fbps::Result<Identification> {
    let inst = build_instance(&builtin("lasso-a", None)?)?;
    let (f, j) = (&inst.f, &inst.j);
    let reference = reference_solution(f, j, &SolverConfig { max_iters: 200_000, ..Default::default() })?;
    let tol = fbps::regularizers::default_zero_tol(&reference.x);
    let target = certify(f, j, &reference.x, tol)?.model;
    println!("minimizer support: {}", target.descriptor);

    let gamma = 1.0 / f.lipschitz_beta();
    let cfg = SolverConfig { max_iters: 20_000, stop_tol: 1e-12, store_iterates: false, ..Default::default() };
    let traj = fb_solve(f, j, &DenseVector::zeros(f.dim()), &StepSchedule::Constant(gamma), &cfg, Some(&reference.x))?;
    for r in traj.records.iter().step_by(25).take(10) {
        println!("k={:<4} |supp|={:<3} dist={:.3e}", r.k, r.manifold_dim, r.dist.unwrap_or(f64::NAN));
    }
    let id = detect_identification(&traj, &target, j)?;
    let observed_rate = id.k.and_then(|k| fit_observed_rate(&traj, k).ok());
    println!(
        "identified at K={:?} of {} iterations ({} confirming records), observed rate {:?}",
        id.k, traj.iterations, id.confirming_records, observed_rate
    );
    Ok(Identification { k: id.k, iterations: traj.iterations, observed_rate })
}

fn main() -> fbps::Result<()> {
    run_example().map(|_| ())
}
