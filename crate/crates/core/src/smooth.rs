//! Smooth data-fidelity terms `F(x) = 1/2 ||A x - y||^2`.

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{
    check_finite, check_finite_matrix, largest_singular_value_sq, restricted_operator_spectrum, DenseMatrix,
    DenseVector, SubspaceBasis,
};

#[derive(Debug, Clone, PartialEq)]
pub enum SmoothKind {
    LeastSquares,
    /// Least squares against a 1D Gaussian blur.
    BlurLeastSquares { kernel_sigma: f64 },
}

/// Quadratic fidelity with its Lipschitz constant `beta = ||A||_2^2`
/// computed once at construction.
#[derive(Debug, Clone)]
pub struct SmoothTerm {
    kind: SmoothKind,
    a: DenseMatrix,
    y: DenseVector,
    beta: f64,
}

/// Curvature of `F` restricted to a subspace `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport {
    /// Restricted strong convexity constant on `T`.
    pub alpha: f64,
    /// Lipschitz constant of `P_T grad F P_T`.
    pub nu: f64,
    pub sigma_m: f64,
    pub sigma_big: f64,
    pub sigma_max: f64,
}

impl SmoothTerm {
    pub fn least_squares(a: DenseMatrix, y: DenseVector) -> Result<Self> {
        Self::build(SmoothKind::LeastSquares, a, y)
    }

    /// Deconvolution fidelity with `A = gaussian_blur_operator(n, kernel_sigma)`.
    pub fn blur(kernel_sigma: f64, y: DenseVector) -> Result<Self> {
        let a = gaussian_blur_operator(y.len(), kernel_sigma)?;
        Self::build(SmoothKind::BlurLeastSquares { kernel_sigma }, a, y)
    }

    fn build(kind: SmoothKind, a: DenseMatrix, y: DenseVector) -> Result<Self> {
        check_finite_matrix(&a, "operator")?;
        check_finite(&y, "observations")?;
        ensure_dim(a.nrows(), y.len())?;
        let beta = largest_singular_value_sq(&a)?;
        Ok(Self { kind, a, y, beta })
    }

    pub fn kind(&self) -> &SmoothKind {
        &self.kind
    }

    pub fn operator(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn observations(&self) -> &DenseVector {
        &self.y
    }

    /// Dimension of the unknown.
    pub fn dim(&self) -> usize {
        self.a.ncols()
    }

    pub fn value(&self, x: &DenseVector) -> Result<f64> {
        ensure_dim(self.dim(), x.len())?;
        Ok(0.5 * (&self.a * x - &self.y).norm_squared())
    }

    /// `A^T (A x - y)`.
    pub fn gradient(&self, x: &DenseVector) -> Result<DenseVector> {
        ensure_dim(self.dim(), x.len())?;
        let r = &self.a * x - &self.y;
        Ok(self.a.tr_mul(&r))
    }

    pub fn lipschitz_beta(&self) -> f64 {
        self.beta
    }

    pub fn curvature_on(&self, t: &SubspaceBasis) -> Result<CurvatureReport> {
        let (sigma_m, sigma_big) = restricted_operator_spectrum(&self.a, t)?;
        Ok(CurvatureReport { alpha: sigma_m, nu: sigma_big, sigma_m, sigma_big, sigma_max: self.beta })
    }
}

/// `n x n` convolution with a sampled Gaussian of width `kernel_sigma`,
/// truncated at radius `ceil(3 sigma)` and normalized to unit sum; the
/// signal is zero-padded, so boundary rows sum to less than one.
pub fn gaussian_blur_operator(n: usize, kernel_sigma: f64) -> Result<DenseMatrix> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("blur needs n >= 3, got {n}")));
    }
    if !(kernel_sigma > 0.0) || !kernel_sigma.is_finite() {
        return Err(Error::InvalidArgument(format!("kernel sigma must be positive, got {kernel_sigma}")));
    }
    let radius = (3.0 * kernel_sigma).ceil() as usize;
    let weights: Vec<f64> = (0..=radius)
        .map(|k| (-((k * k) as f64) / (2.0 * kernel_sigma * kernel_sigma)).exp())
        .collect();
    let total = weights[0] + 2.0 * weights[1..].iter().sum::<f64>();
    Ok(DenseMatrix::from_fn(n, n, |i, j| {
        let d = i.abs_diff(j);
        if d <= radius {
            weights[d] / total
        } else {
            0.0
        }
    }))
}
