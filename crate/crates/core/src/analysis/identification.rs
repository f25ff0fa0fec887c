use crate::error::{Error, Result};
use crate::regularizers::{ManifoldDescriptor, ModelSubspace, Regularizer};
use crate::solver::Trajectory;

/// First recorded iteration from which every later record lies on the
/// target manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentificationResult {
    /// Iteration index `K`.
    pub k: Option<usize>,
    /// Position of `K` in `Trajectory::records`.
    pub record_index: Option<usize>,
    pub descriptor_at_k: Option<ManifoldDescriptor>,
    /// Records after `K` that confirm the identification.
    pub confirming_records: usize,
}

impl IdentificationResult {
    pub fn is_identified(&self) -> bool {
        self.k.is_some()
    }
}

pub fn detect_identification(
    traj: &Trajectory,
    target: &ModelSubspace,
    j: &Regularizer,
) -> Result<IdentificationResult> {
    let descriptors: Vec<&ManifoldDescriptor> = traj.records.iter().map(|r| &r.descriptor).collect();
    let ks: Vec<usize> = traj.records.iter().map(|r| r.k).collect();
    detect_in_descriptors(&descriptors, &ks, &target.descriptor, j)
}

/// Same as [`detect_identification`] over bare descriptor sequences.
pub fn detect_in_descriptors(
    descriptors: &[&ManifoldDescriptor],
    ks: &[usize],
    target: &ManifoldDescriptor,
    j: &Regularizer,
) -> Result<IdentificationResult> {
    if descriptors.is_empty() {
        return Err(Error::InsufficientData("empty trajectory".into()));
    }
    let mut first = None;
    for (idx, d) in descriptors.iter().enumerate().rev() {
        if j.same_descriptor(d, target)? {
            first = Some(idx);
        } else {
            break;
        }
    }
    Ok(match first {
        None => IdentificationResult { k: None, record_index: None, descriptor_at_k: None, confirming_records: 0 },
        Some(idx) => IdentificationResult {
            k: Some(ks[idx]),
            record_index: Some(idx),
            descriptor_at_k: Some(descriptors[idx].clone()),
            confirming_records: descriptors.len() - idx - 1,
        },
    })
}

/// Noise floor below which distances are not fitted: `1e3 eps (1 + ||x_ref||)`.
pub fn fit_floor(ref_norm: f64) -> f64 {
    1e3 * f64::EPSILON * (1.0 + ref_norm)
}

/// `exp(s)` where `s` is the least-squares slope of `log ||x_k - x_ref||`
/// against `k`, over records with `k >= from_k` up to the first distance
/// at or below [`fit_floor`].
pub fn fit_observed_rate(traj: &Trajectory, from_k: usize) -> Result<f64> {
    let ref_norm = traj
        .ref_norm
        .ok_or_else(|| Error::InsufficientData("trajectory was recorded without a reference point".into()))?;
    let floor = fit_floor(ref_norm);
    let mut pts = Vec::new();
    for r in traj.records.iter().filter(|r| r.k >= from_k) {
        let d = r.dist.ok_or_else(|| Error::InsufficientData("missing distance".into()))?;
        if d <= floor {
            break;
        }
        pts.push((r.k as f64, d.ln()));
    }
    let min_d = 10.0 * f64::EPSILON * (1.0 + ref_norm);
    if pts.len() < 10 || pts.iter().any(|&(_, l)| l.exp() <= min_d) {
        return Err(Error::InsufficientData(format!(
            "{} points above the noise floor {floor:.3e}; need 10",
            pts.len()
        )));
    }
    Ok(least_squares_slope(&pts).exp())
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseVector;
    use crate::solver::{Termination, TrajectoryRecord};

    fn synthetic(dists: &[f64], descriptors: Vec<ManifoldDescriptor>) -> Trajectory {
        let records = dists
            .iter()
            .zip(descriptors)
            .enumerate()
            .map(|(k, (&d, descriptor))| TrajectoryRecord {
                k,
                gamma: 1.0,
                x: None,
                dist: Some(d),
                objective: 0.0,
                manifold_dim: 0,
                descriptor,
            })
            .collect();
        Trajectory {
            records,
            termination: Termination::Converged,
            iterations: dists.len(),
            final_x: DenseVector::zeros(1),
            final_residual: 0.0,
            ref_norm: Some(0.0),
        }
    }

    fn support(s: &[usize]) -> ManifoldDescriptor {
        ManifoldDescriptor::CoordinateSupport(s.to_vec())
    }

    #[test]
    fn identification_after_wandering() {
        let d = vec![support(&[1, 2]), support(&[1, 2, 3]), support(&[2]), support(&[2]), support(&[2])];
        let tr = synthetic(&[1.0; 5], d);
        let j = Regularizer::l1(1.0).unwrap();
        let target = j.model_subspace(&DenseVector::from_vec(vec![0.0, 0.0, 1.0, 0.0]), 0.0).unwrap();
        let id = detect_identification(&tr, &target, &j).unwrap();
        assert_eq!(id.k, Some(2));
        assert_eq!(id.confirming_records, 2);
    }

    #[test]
    fn no_identification_when_last_differs() {
        let d = vec![support(&[2]), support(&[2]), support(&[1])];
        let tr = synthetic(&[1.0; 3], d);
        let j = Regularizer::l1(1.0).unwrap();
        let target = j.model_subspace(&DenseVector::from_vec(vec![0.0, 0.0, 1.0]), 0.0).unwrap();
        assert_eq!(detect_identification(&tr, &target, &j).unwrap().k, None);
    }

    #[test]
    fn geometric_sequence_rate() {
        let dists: Vec<f64> = (0..60).map(|k| 0.5f64.powi(k)).collect();
        let tr = synthetic(&dists, vec![support(&[]); 60]);
        let rate = fit_observed_rate(&tr, 0).unwrap();
        assert!((rate - 0.5).abs() < 1e-12);
    }

    #[test]
    fn constant_sequence_rate_is_one() {
        let tr = synthetic(&[0.3; 20], vec![support(&[]); 20]);
        assert_eq!(fit_observed_rate(&tr, 0).unwrap(), 1.0);
    }

    #[test]
    fn too_few_points() {
        let dists: Vec<f64> = (0..8).map(|k| 0.5f64.powi(k)).collect();
        let tr = synthetic(&dists, vec![support(&[]); 8]);
        assert!(matches!(fit_observed_rate(&tr, 0), Err(Error::InsufficientData(_))));
    }
}
