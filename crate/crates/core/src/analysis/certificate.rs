use crate::error::{ensure_dim, Error, Result};
use crate::linalg::DenseVector;
use crate::regularizers::{ModelSubspace, Regularizer};
use crate::smooth::{CurvatureReport, SmoothTerm};

/// Numeric evidence for the two local assumptions at a candidate minimizer.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    /// Slack of `-grad F(x*) in ri(dJ(x*))`; positive means non-degenerate.
    pub nondegeneracy_margin: f64,
    /// Restricted strong convexity constant on `T_{x*}` (`+inf` when `T = {0}`).
    pub alpha: f64,
    pub restricted_injectivity: bool,
    /// Both assumptions hold, which makes `x*` the unique minimizer.
    pub uniqueness_implied: bool,
    pub curvature: Option<CurvatureReport>,
    pub tangent_dim: usize,
    /// Fixed-point residual of `x*` at step `1/beta`.
    pub residual: f64,
    pub model: ModelSubspace,
}

impl CertificateReport {
    pub fn passes(&self) -> bool {
        self.uniqueness_implied
    }
}

/// Stationarity tolerance: `1e-8 (1 + ||A^T y||)`.
pub fn stationarity_tol(f: &SmoothTerm) -> f64 {
    1e-8 * (1.0 + f.operator().tr_mul(f.observations()).norm())
}

/// `||x - prox_{g J}(x - g grad F(x))|| / g` with `g = 1/beta`.
pub fn fixed_point_residual(f: &SmoothTerm, j: &Regularizer, x: &DenseVector) -> Result<f64> {
    let beta = f.lipschitz_beta();
    let g = if beta > 0.0 { 1.0 / beta } else { 1.0 };
    let step = j.prox(&(x - g * f.gradient(x)?), g)?;
    Ok((x - step).norm() / g)
}

/// Certifies non-degeneracy and restricted injectivity at `x_star`.
pub fn certify(f: &SmoothTerm, j: &Regularizer, x_star: &DenseVector, zero_tol: f64) -> Result<CertificateReport> {
    ensure_dim(f.dim(), x_star.len())?;
    let residual = fixed_point_residual(f, j, x_star)?;
    let tol = stationarity_tol(f);
    if residual > tol {
        return Err(Error::StaleCertificate { residual, tol });
    }
    let model = j.model_subspace(x_star, zero_tol)?;
    let dual = -f.gradient(x_star)?;
    let nondegeneracy_margin = j.nondegeneracy_margin(x_star, &dual, zero_tol)?;
    let (alpha, curvature) = if model.dim() == 0 {
        (f64::INFINITY, None)
    } else {
        let c = f.curvature_on(&model.basis)?;
        (c.alpha, Some(c))
    };
    let restricted_injectivity = alpha > 1e-10 * f.lipschitz_beta().max(1.0);
    Ok(CertificateReport {
        nondegeneracy_margin,
        alpha,
        restricted_injectivity,
        uniqueness_implied: nondegeneracy_margin > 0.0 && restricted_injectivity,
        curvature,
        tangent_dim: model.dim(),
        residual,
        model,
    })
}
