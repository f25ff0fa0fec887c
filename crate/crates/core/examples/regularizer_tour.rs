// Prox, active manifold and generalized sign of every regularizer on a
// small input.

use fbps::linalg::DenseVector;
use fbps::regularizers::Regularizer;

pub struct TourLine {
    pub name: &'static str,
    pub manifold: String,
    pub dim: usize,
}

pub fn run_example() -> fbps::Result<Vec<TourLine>> {
    let x = DenseVector::from_vec(vec![3.0, -0.4, 2.6, 2.9, -3.0, 0.1]);
    let regs = [
        Regularizer::l1(1.0)?,
        Regularizer::tv1d(1.0)?,
        Regularizer::linf(1.0)?,
        Regularizer::group_contiguous(6, 2, 1.0)?,
        Regularizer::nuclear(2, 3, 1.0)?,
    ];
    let mut lines = Vec::new();
    for j in &regs {
        let z = j.prox(&x, 0.5)?;
        let tol = fbps::regularizers::default_zero_tol(&z);
        let model = j.model_subspace(&z, tol)?;
        let e = j.generalized_sign(&z, tol)?.e;
        println!("{:<11} class={}", j.name(), j.class().label());
        println!("  prox(x, 0.5) = {:.4?}", z.as_slice());
        println!("  manifold     = {} (dim T = {})", model.descriptor, model.dim());
        println!("  lambda e_x   = {:.4?}", e.as_slice());
        lines.push(TourLine { name: j.name(), manifold: model.descriptor.to_string(), dim: model.dim() });
    }
    Ok(lines)
}

fn main() -> fbps::Result<()> {
    run_example().map(|_| ())
}
