use crate::error::{Error, Result};
use crate::linalg::DenseVector;

/// Soft-threshold level `theta` such that `sum_i max(|x_i| - theta, 0) = radius`,
/// or `None` when `x` already lies in the ball.
///
/// Sort-then-threshold: with `u` the magnitudes sorted decreasingly, the
/// active count is the largest `j` with `u_j > (sum_{i<=j} u_i - radius) / j`.
pub fn l1_ball_threshold(x: &[f64], radius: f64) -> Result<Option<f64>> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidArgument(format!("l1-ball radius must be positive, got {radius}")));
    }
    let total: f64 = x.iter().map(|v| v.abs()).sum();
    if total <= radius {
        return Ok(None);
    }
    let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &u) in mags.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - radius) / (j + 1) as f64;
        if u > t {
            theta = t;
        } else {
            break;
        }
    }
    Ok(Some(theta.max(0.0)))
}

/// Euclidean projection onto `{z : ||z||_1 <= radius}`.
pub fn project_l1_ball(x: &DenseVector, radius: f64) -> Result<DenseVector> {
    match l1_ball_threshold(x.as_slice(), radius)? {
        None => Ok(x.clone()),
        Some(theta) => Ok(x.map(|v| v.signum() * (v.abs() - theta).max(0.0))),
    }
}
