// Closed-form local rates: the same curvature constants under each regime,
// and the rate as a function of the step.

use fbps::analysis::{predict_rate_q_general, predict_rate_quadratic, predict_rate_r_subspace, RatePrediction};
use fbps::regularizers::PartialSmoothnessClass;
use fbps::solver::StepSchedule;

pub fn run_example() -> fbps::Result<Vec<RatePrediction>> {
    // restricted spectrum [1, 3], global curvature 4
    let (sm, sbig, smax) = (1.0, 3.0, 4.0);
    let g = 0.25;
    let flat = PartialSmoothnessClass::LinearSubspaceConstantSign;
    let preds = vec![
        predict_rate_quadratic(sm, sbig, smax, &StepSchedule::Constant(g), flat)?,
        predict_rate_quadratic(sm, sbig, smax, &StepSchedule::Constant(0.1), PartialSmoothnessClass::GeneralManifold)?,
        predict_rate_r_subspace(sm, sbig, smax, &StepSchedule::Constant(0.1))?,
        predict_rate_q_general(sm, smax, 0.05, 0.1)?,
    ];
    for p in &preds {
        println!(
            "{:<12} rho={:.4} valid gamma in (0, {:.4}) best {:.4} at {:?}",
            p.regime.label(),
            p.rho,
            p.gamma_validity.1,
            p.rho_opt,
            p.gamma_opt
        );
    }
    println!("gamma   R_quadratic");
    for i in 1..10 {
        let g = 0.05 * i as f64;
        let p = predict_rate_quadratic(sm, sbig, smax, &StepSchedule::Constant(g), flat)?;
        println!("{g:.2}    {:.4}", p.rho);
    }
    Ok(preds)
}

fn main() -> fbps::Result<()> {
    run_example().map(|_| ())
}
