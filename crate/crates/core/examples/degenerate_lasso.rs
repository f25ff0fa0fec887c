// Lasso with two identical active columns: `A` is not injective on the
// model subspace, yet the iterates still converge linearly.

use fbps::harness::{degenerate_lasso, DegenerateReport};

pub fn run_example() -> fbps::Result<DegenerateReport> {
    let d = degenerate_lasso(0)?;
    println!("dim(ker A on T) = {}", d.kernel_dim);
    println!("gamma = {:.4e}, predicted rate {:.6}", d.gamma, d.prediction.rho);
    println!(
        "identified at {:?}, observed rate {:?}",
        d.identification.k,
        d.observed_rate.map(|r| format!("{r:.6}"))
    );
    Ok(d)
}

fn main() -> fbps::Result<()> {
    run_example().map(|_| ())
}
