// Non-degeneracy and restricted injectivity at a minimizer, on a clean
// instance and on one where the dual certificate touches the boundary.

use fbps::analysis::{certify, CertificateReport};
use fbps::linalg::{DenseMatrix, DenseVector};
use fbps::regularizers::Regularizer;
use fbps::smooth::SmoothTerm;

fn show(label: &str, c: &CertificateReport) {
    println!(
        "{label}: margin={:.3} alpha={:.3} dim T={} unique={}",
        c.nondegeneracy_margin, c.alpha, c.tangent_dim, c.uniqueness_implied
    );
}

pub fn run_example() -> fbps::Result<(CertificateReport, CertificateReport)> {
    let j = Regularizer::l1(1.0)?;
    // x* = soft-threshold(y, 1) for A = I
    let f = SmoothTerm::least_squares(DenseMatrix::identity(2, 2), DenseVector::from_vec(vec![3.0, 0.5]))?;
    let good = certify(&f, &j, &DenseVector::from_vec(vec![2.0, 0.0]), 1e-12)?;
    show("y = [3, 0.5]", &good);
    let f = SmoothTerm::least_squares(DenseMatrix::identity(2, 2), DenseVector::from_vec(vec![3.0, 1.0]))?;
    let bad = certify(&f, &j, &DenseVector::from_vec(vec![2.0, 0.0]), 1e-12)?;
    show("y = [3, 1.0]", &bad);
    Ok((good, bad))
}

fn main() -> fbps::Result<()> {
    run_example().map(|_| ())
}
