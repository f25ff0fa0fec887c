//! The five partly smooth regularizers: `l1`, group `l1-l2`, 1D total
//! variation, `l_inf` and the nuclear norm.
//!
//! Each exposes its value, proximity operator, model tangent subspace
//! `T_x`, generalized sign `e_x`, partial-smoothness class and the slack of
//! the non-degeneracy condition `-grad F(x) in ri(lambda * dJ(x))`.
//!
//! Nuclear-norm points are `rows x cols` matrices flattened column-major.

mod l1_ball;
mod model;
mod taut_string;

pub use l1_ball::{l1_ball_threshold, project_l1_ball};
pub use model::{GeneralizedSign, ManifoldDescriptor, ModelSubspace, PartialSmoothnessClass, SpectralFactors};
pub use taut_string::tv1d_prox;

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{complete_basis, sup_norm, thin_svd, DenseMatrix, DenseVector, SubspaceBasis};

/// Support/saturation/rank detection tolerance used when none is given:
/// `1e-8 * (1 + ||x||_inf)`.
pub fn default_zero_tol(x: &DenseVector) -> f64 {
    1e-8 * (1.0 + sup_norm(x))
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegularizerKind {
    L1,
    /// Non-overlapping blocks partitioning `0..n`.
    GroupL1L2 { blocks: Vec<Vec<usize>> },
    /// `||D x||_1` with `D` the `(n-1) x n` forward difference.
    Tv1d,
    LInf,
    Nuclear { rows: usize, cols: usize },
}

/// A weighted regularizer `lambda * J0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Regularizer {
    kind: RegularizerKind,
    weight: f64,
}

impl Regularizer {
    fn with_kind(kind: RegularizerKind, weight: f64) -> Result<Self> {
        if !(weight >= 0.0) || !weight.is_finite() {
            return Err(Error::InvalidArgument(format!("weight must be finite and >= 0, got {weight}")));
        }
        Ok(Self { kind, weight })
    }

    pub fn l1(weight: f64) -> Result<Self> {
        Self::with_kind(RegularizerKind::L1, weight)
    }

    pub fn tv1d(weight: f64) -> Result<Self> {
        Self::with_kind(RegularizerKind::Tv1d, weight)
    }

    pub fn linf(weight: f64) -> Result<Self> {
        Self::with_kind(RegularizerKind::LInf, weight)
    }

    pub fn nuclear(rows: usize, cols: usize, weight: f64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument("nuclear norm needs a non-empty shape".into()));
        }
        Self::with_kind(RegularizerKind::Nuclear { rows, cols }, weight)
    }

    /// Group norm over `blocks`, which must partition `0..n` for some `n`.
    pub fn group(blocks: Vec<Vec<usize>>, weight: f64) -> Result<Self> {
        let n: usize = blocks.iter().map(|b| b.len()).sum();
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidArgument("empty block".into()));
            }
            for &i in b {
                if i >= n || seen[i] {
                    return Err(Error::InvalidArgument(format!(
                        "blocks do not partition 0..{n} (index {i})"
                    )));
                }
                seen[i] = true;
            }
        }
        Self::with_kind(RegularizerKind::GroupL1L2 { blocks }, weight)
    }

    /// Consecutive blocks of equal size covering `0..n`.
    pub fn group_contiguous(n: usize, block_size: usize, weight: f64) -> Result<Self> {
        if block_size == 0 || !n.is_multiple_of(block_size) {
            return Err(Error::InvalidArgument(format!("block size {block_size} does not divide {n}")));
        }
        let blocks = (0..n / block_size).map(|b| (b * block_size..(b + 1) * block_size).collect()).collect();
        Self::group(blocks, weight)
    }

    pub fn kind(&self) -> &RegularizerKind {
        &self.kind
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            RegularizerKind::L1 => "l1",
            RegularizerKind::GroupL1L2 { .. } => "group-l1l2",
            RegularizerKind::Tv1d => "tv1d",
            RegularizerKind::LInf => "linf",
            RegularizerKind::Nuclear { .. } => "nuclear",
        }
    }

    pub fn class(&self) -> PartialSmoothnessClass {
        match self.kind {
            RegularizerKind::L1 | RegularizerKind::Tv1d | RegularizerKind::LInf => {
                PartialSmoothnessClass::LinearSubspaceConstantSign
            }
            RegularizerKind::GroupL1L2 { .. } => PartialSmoothnessClass::LinearSubspace,
            RegularizerKind::Nuclear { .. } => PartialSmoothnessClass::GeneralManifold,
        }
    }

    /// Required point dimension, if fixed by the regularizer.
    pub fn expected_dim(&self) -> Option<usize> {
        match &self.kind {
            RegularizerKind::GroupL1L2 { blocks } => Some(blocks.iter().map(|b| b.len()).sum()),
            RegularizerKind::Nuclear { rows, cols } => Some(rows * cols),
            _ => None,
        }
    }

    fn check_point(&self, x: &DenseVector) -> Result<()> {
        if x.is_empty() {
            return Err(Error::InvalidArgument("empty point".into()));
        }
        if let Some(n) = self.expected_dim() {
            ensure_dim(n, x.len())?;
        }
        Ok(())
    }

    fn as_matrix(&self, x: &DenseVector) -> DenseMatrix {
        match self.kind {
            RegularizerKind::Nuclear { rows, cols } => DenseMatrix::from_column_slice(rows, cols, x.as_slice()),
            _ => unreachable!("matrix view only for the nuclear norm"),
        }
    }

    pub fn value(&self, x: &DenseVector) -> Result<f64> {
        self.check_point(x)?;
        let raw = match &self.kind {
            RegularizerKind::L1 => x.lp_norm(1),
            RegularizerKind::GroupL1L2 { blocks } => blocks.iter().map(|b| block_norm(x, b)).sum(),
            RegularizerKind::Tv1d => x.as_slice().windows(2).map(|w| (w[1] - w[0]).abs()).sum(),
            RegularizerKind::LInf => sup_norm(x),
            RegularizerKind::Nuclear { .. } => thin_svd(&self.as_matrix(x))?.singular_values.sum(),
        };
        Ok(self.weight * raw)
    }

    /// `prox_{gamma * lambda * J0}(x)`.
    pub fn prox(&self, x: &DenseVector, gamma: f64) -> Result<DenseVector> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidArgument(format!("step must be positive, got {gamma}")));
        }
        self.check_point(x)?;
        let t = gamma * self.weight;
        if t == 0.0 {
            return Ok(x.clone());
        }
        let z = match &self.kind {
            RegularizerKind::L1 => x.map(|v| v.signum() * (v.abs() - t).max(0.0)),
            RegularizerKind::GroupL1L2 { blocks } => {
                let mut z = DenseVector::zeros(x.len());
                for b in blocks {
                    let norm = block_norm(x, b);
                    if norm > t {
                        let scale = 1.0 - t / norm;
                        for &i in b {
                            z[i] = scale * x[i];
                        }
                    }
                }
                z
            }
            RegularizerKind::Tv1d => DenseVector::from_vec(tv1d_prox(x.as_slice(), t)),
            // x - proj_{t B_1}(x): entries above the l1-ball threshold are clipped to it
            RegularizerKind::LInf => match l1_ball_threshold(x.as_slice(), t)? {
                None => DenseVector::zeros(x.len()),
                Some(theta) => x.map(|v| v.signum() * v.abs().min(theta)),
            },
            RegularizerKind::Nuclear { rows, cols } => {
                let svd = thin_svd(&self.as_matrix(x))?;
                let mut out = DenseMatrix::zeros(*rows, *cols);
                for (j, s) in svd.singular_values.iter().enumerate() {
                    let shrunk = s - t;
                    if shrunk > 0.0 {
                        out += svd.u.column(j) * svd.v.column(j).transpose() * shrunk;
                    }
                }
                DenseVector::from_column_slice(out.as_slice())
            }
        };
        Ok(z)
    }

    /// Discrete manifold descriptor of `x`; entries (differences, block
    /// norms, singular values) at most `zero_tol` count as zero.
    pub fn descriptor(&self, x: &DenseVector, zero_tol: f64) -> Result<ManifoldDescriptor> {
        self.check_point(x)?;
        if !(zero_tol >= 0.0) {
            return Err(Error::InvalidArgument(format!("zero_tol must be >= 0, got {zero_tol}")));
        }
        Ok(match &self.kind {
            RegularizerKind::L1 => {
                ManifoldDescriptor::CoordinateSupport((0..x.len()).filter(|&i| x[i].abs() > zero_tol).collect())
            }
            RegularizerKind::GroupL1L2 { blocks } => ManifoldDescriptor::BlockSupport(
                (0..blocks.len()).filter(|&b| block_norm(x, &blocks[b]) > zero_tol).collect(),
            ),
            RegularizerKind::Tv1d => ManifoldDescriptor::TvSupport(
                (0..x.len() - 1).filter(|&i| (x[i + 1] - x[i]).abs() > zero_tol).collect(),
            ),
            RegularizerKind::LInf => {
                let (indices, signs) = saturation(x, zero_tol)?;
                ManifoldDescriptor::SaturationSupport { indices, signs }
            }
            RegularizerKind::Nuclear { .. } => {
                ManifoldDescriptor::FixedRank(thin_svd(&self.as_matrix(x))?.rank(zero_tol))
            }
        })
    }

    /// `dim T_x` implied by a descriptor, for points of dimension `n`.
    pub fn tangent_dim(&self, descriptor: &ManifoldDescriptor, n: usize) -> usize {
        match (&self.kind, descriptor) {
            (RegularizerKind::GroupL1L2 { blocks }, ManifoldDescriptor::BlockSupport(active)) => {
                active.iter().map(|&b| blocks[b].len()).sum()
            }
            (_, ManifoldDescriptor::CoordinateSupport(s)) => s.len(),
            (_, ManifoldDescriptor::TvSupport(j)) => j.len() + 1,
            (_, ManifoldDescriptor::SaturationSupport { indices, .. }) if indices.is_empty() => 0,
            (_, ManifoldDescriptor::SaturationSupport { indices, .. }) => n - indices.len() + 1,
            (RegularizerKind::Nuclear { rows, cols }, ManifoldDescriptor::FixedRank(r)) => r * (rows + cols - r),
            _ => 0,
        }
    }

    /// Model tangent subspace `T_x` with a realized orthonormal basis.
    pub fn model_subspace(&self, x: &DenseVector, zero_tol: f64) -> Result<ModelSubspace> {
        let descriptor = self.descriptor(x, zero_tol)?;
        let n = x.len();
        let (basis, factors) = match (&self.kind, &descriptor) {
            (RegularizerKind::L1, ManifoldDescriptor::CoordinateSupport(s)) => (SubspaceBasis::coordinates(n, s)?, None),
            (RegularizerKind::GroupL1L2 { blocks }, ManifoldDescriptor::BlockSupport(active)) => {
                let idx: Vec<usize> = active.iter().flat_map(|&b| blocks[b].iter().copied()).collect();
                (SubspaceBasis::coordinates(n, &idx)?, None)
            }
            (RegularizerKind::Tv1d, ManifoldDescriptor::TvSupport(jumps)) => {
                let mut cols = Vec::with_capacity(jumps.len() + 1);
                for (start, end) in runs(n, jumps) {
                    let len = (end - start) as f64;
                    let mut c = DenseVector::zeros(n);
                    c.rows_mut(start, end - start).fill(1.0 / len.sqrt());
                    cols.push(c);
                }
                (basis_from_orthonormal(n, &cols)?, None)
            }
            (RegularizerKind::LInf, ManifoldDescriptor::SaturationSupport { indices, .. }) if indices.is_empty() => {
                (SubspaceBasis::empty(n), None)
            }
            (RegularizerKind::LInf, ManifoldDescriptor::SaturationSupport { indices, signs }) => {
                let mut cols = Vec::with_capacity(n - indices.len() + 1);
                let mut sat = DenseVector::zeros(n);
                let scale = 1.0 / (indices.len() as f64).sqrt();
                for (&i, &s) in indices.iter().zip(signs) {
                    sat[i] = f64::from(s) * scale;
                }
                cols.push(sat);
                let mut in_set = vec![false; n];
                indices.iter().for_each(|&i| in_set[i] = true);
                for j in (0..n).filter(|&j| !in_set[j]) {
                    let mut c = DenseVector::zeros(n);
                    c[j] = 1.0;
                    cols.push(c);
                }
                (basis_from_orthonormal(n, &cols)?, None)
            }
            (RegularizerKind::Nuclear { rows, cols }, ManifoldDescriptor::FixedRank(r)) => {
                let svd = thin_svd(&self.as_matrix(x))?;
                let u = svd.u.columns(0, *r).into_owned();
                let v = svd.v.columns(0, *r).into_owned();
                let uf = complete_basis(&u);
                let vf = complete_basis(&v);
                let mut basis_cols = Vec::with_capacity(r * (rows + cols - r));
                for i in 0..*rows {
                    for j in 0..*cols {
                        if i < *r || j < *r {
                            let outer = uf.column(i) * vf.column(j).transpose();
                            basis_cols.push(DenseVector::from_column_slice(outer.as_slice()));
                        }
                    }
                }
                (basis_from_orthonormal(n, &basis_cols)?, Some(SpectralFactors { u, v }))
            }
            _ => unreachable!("descriptor kind always matches the regularizer"),
        };
        Ok(ModelSubspace { descriptor, factors, basis })
    }

    /// `lambda * e_x` where `e_x = proj_{T_x}(dJ0(x))`.
    pub fn generalized_sign(&self, x: &DenseVector, zero_tol: f64) -> Result<GeneralizedSign> {
        let descriptor = self.descriptor(x, zero_tol)?;
        let n = x.len();
        let mut e = DenseVector::zeros(n);
        match (&self.kind, &descriptor) {
            (RegularizerKind::L1, ManifoldDescriptor::CoordinateSupport(s)) => {
                for &i in s {
                    e[i] = x[i].signum();
                }
            }
            (RegularizerKind::GroupL1L2 { blocks }, ManifoldDescriptor::BlockSupport(active)) => {
                for &b in active {
                    let norm = block_norm(x, &blocks[b]);
                    for &i in &blocks[b] {
                        e[i] = x[i] / norm;
                    }
                }
            }
            (RegularizerKind::Tv1d, ManifoldDescriptor::TvSupport(jumps)) => {
                // D sign(D* x) averaged over each constant run; the sum over a
                // run telescopes to s_{start-1} - s_{end-1}.
                let mut s = vec![0.0; n.saturating_sub(1)];
                for &i in jumps {
                    s[i] = (x[i + 1] - x[i]).signum();
                }
                for (start, end) in runs(n, jumps) {
                    let left = if start > 0 { s[start - 1] } else { 0.0 };
                    let right = if end < n { s[end - 1] } else { 0.0 };
                    let avg = (left - right) / (end - start) as f64;
                    e.rows_mut(start, end - start).fill(avg);
                }
            }
            (RegularizerKind::LInf, ManifoldDescriptor::SaturationSupport { indices, signs }) => {
                let card = indices.len() as f64;
                for (&i, &s) in indices.iter().zip(signs) {
                    e[i] = f64::from(s) / card;
                }
            }
            (RegularizerKind::Nuclear { .. }, ManifoldDescriptor::FixedRank(r)) => {
                let svd = thin_svd(&self.as_matrix(x))?;
                let uv = svd.u.columns(0, *r) * svd.v.columns(0, *r).transpose();
                e = DenseVector::from_column_slice(uv.as_slice());
            }
            _ => unreachable!("descriptor kind always matches the regularizer"),
        }
        Ok(GeneralizedSign { e: e * self.weight })
    }

    /// Whether two model subspaces describe the same active manifold.
    pub fn same_manifold(&self, a: &ModelSubspace, b: &ModelSubspace) -> Result<bool> {
        self.same_descriptor(&a.descriptor, &b.descriptor)
    }

    pub fn same_descriptor(&self, a: &ManifoldDescriptor, b: &ManifoldDescriptor) -> Result<bool> {
        let own = self.descriptor_kind();
        if a.kind_name() != own || b.kind_name() != own {
            return Err(Error::InvalidArgument(format!(
                "cannot compare {} with {} for a {} regularizer",
                a.kind_name(),
                b.kind_name(),
                self.name()
            )));
        }
        Ok(a == b)
    }

    fn descriptor_kind(&self) -> &'static str {
        match self.kind {
            RegularizerKind::L1 => "coordinate-support",
            RegularizerKind::GroupL1L2 { .. } => "block-support",
            RegularizerKind::Tv1d => "tv-support",
            RegularizerKind::LInf => "saturation-support",
            RegularizerKind::Nuclear { .. } => "fixed-rank",
        }
    }

    /// Slack of `dual in ri(lambda * dJ0(x))`, where `dual = -grad F(x)` at a
    /// stationary `x`. Positive means the non-degeneracy condition holds.
    ///
    /// * `l1`: `lambda - max_{i not in supp} |dual_i|`.
    /// * group: `min_{inactive b} (lambda - ||dual_b||)`.
    /// * TV: write `dual = D u` (unique, `u_j = -sum_{i<=j} dual_i`); the slack
    ///   is `lambda - max_{j not a jump} |u_j|`.
    /// * `l_inf`: the subdifferential is the simplex `conv{s_i e_i : i in I}`
    ///   scaled by `lambda`; the slack is the smallest convex weight
    ///   `min_{i in I} s_i dual_i` minus the largest off-face leak
    ///   `max_{j not in I} |dual_j|`; at the origin it is `lambda - ||dual||_1`.
    /// * nuclear: `lambda - ||P_{U perp} G P_{V perp}||_2` for `G` the
    ///   matrix form of `dual`.
    ///
    /// When the relevant complement is empty the subdifferential is a
    /// singleton and the slack is `lambda`.
    pub fn nondegeneracy_margin(&self, x: &DenseVector, dual: &DenseVector, zero_tol: f64) -> Result<f64> {
        ensure_dim(x.len(), dual.len())?;
        let lambda = self.weight;
        let descriptor = self.descriptor(x, zero_tol)?;
        let n = x.len();
        let margin = match (&self.kind, &descriptor) {
            (RegularizerKind::L1, ManifoldDescriptor::CoordinateSupport(s)) => {
                let mut on = vec![false; n];
                s.iter().for_each(|&i| on[i] = true);
                let leak = (0..n).filter(|&i| !on[i]).map(|i| dual[i].abs()).fold(0.0, f64::max);
                lambda - leak
            }
            (RegularizerKind::GroupL1L2 { blocks }, ManifoldDescriptor::BlockSupport(active)) => {
                let mut on = vec![false; blocks.len()];
                active.iter().for_each(|&b| on[b] = true);
                (0..blocks.len())
                    .filter(|&b| !on[b])
                    .map(|b| lambda - block_norm(dual, &blocks[b]))
                    .fold(lambda, f64::min)
            }
            (RegularizerKind::Tv1d, ManifoldDescriptor::TvSupport(jumps)) => {
                let mut is_jump = vec![false; n.saturating_sub(1)];
                jumps.iter().for_each(|&i| is_jump[i] = true);
                let mut u = 0.0;
                let mut leak: f64 = 0.0;
                for j in 0..n.saturating_sub(1) {
                    u -= dual[j];
                    if !is_jump[j] {
                        leak = leak.max(u.abs());
                    }
                }
                lambda - leak
            }
            (RegularizerKind::LInf, ManifoldDescriptor::SaturationSupport { indices, .. }) if indices.is_empty() => {
                lambda - dual.iter().map(|v| v.abs()).sum::<f64>()
            }
            (RegularizerKind::LInf, ManifoldDescriptor::SaturationSupport { indices, signs }) => {
                let mut on = vec![false; n];
                indices.iter().for_each(|&i| on[i] = true);
                let weight = indices
                    .iter()
                    .zip(signs)
                    .map(|(&i, &s)| f64::from(s) * dual[i])
                    .fold(f64::INFINITY, f64::min);
                let leak = (0..n).filter(|&j| !on[j]).map(|j| dual[j].abs()).fold(0.0, f64::max);
                weight - leak
            }
            (RegularizerKind::Nuclear { rows, cols }, ManifoldDescriptor::FixedRank(r)) => {
                if *r >= (*rows).min(*cols) {
                    lambda
                } else {
                    let svd = thin_svd(&self.as_matrix(x))?;
                    let u = svd.u.columns(0, *r);
                    let v = svd.v.columns(0, *r);
                    let g = self.as_matrix(dual);
                    let pu = DenseMatrix::identity(*rows, *rows) - u * u.transpose();
                    let pv = DenseMatrix::identity(*cols, *cols) - v * v.transpose();
                    let w = pu * g * pv;
                    lambda - thin_svd(&w)?.singular_values[0]
                }
            }
            _ => unreachable!("descriptor kind always matches the regularizer"),
        };
        Ok(margin)
    }
}

fn block_norm(x: &DenseVector, block: &[usize]) -> f64 {
    block.iter().map(|&i| x[i] * x[i]).sum::<f64>().sqrt()
}

/// Half-open constant runs `[start, end)` delimited by the jump set.
fn runs(n: usize, jumps: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(jumps.len() + 1);
    let mut start = 0;
    for &j in jumps {
        out.push((start, j + 1));
        start = j + 1;
    }
    out.push((start, n));
    out
}

/// Entries attaining the sup norm; empty at the origin, where `T = {0}`.
fn saturation(x: &DenseVector, zero_tol: f64) -> Result<(Vec<usize>, Vec<i8>)> {
    let m = sup_norm(x);
    if m <= zero_tol {
        return Ok((Vec::new(), Vec::new()));
    }
    let indices: Vec<usize> = (0..x.len()).filter(|&i| x[i].abs() >= m - zero_tol).collect();
    let signs = indices.iter().map(|&i| if x[i] < 0.0 { -1 } else { 1 }).collect();
    Ok((indices, signs))
}

fn basis_from_orthonormal(n: usize, cols: &[DenseVector]) -> Result<SubspaceBasis> {
    let mut m = DenseMatrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    SubspaceBasis::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::from_row_slice(x)
    }

    #[test]
    fn values() {
        assert_eq!(Regularizer::l1(1.0).unwrap().value(&v(&[1.0, -2.0, 0.0])).unwrap(), 3.0);
        assert_eq!(Regularizer::linf(2.0).unwrap().value(&v(&[1.0, -3.0])).unwrap(), 6.0);
        let nuc = Regularizer::nuclear(2, 2, 1.0).unwrap();
        assert!((nuc.value(&v(&[2.0, 0.0, 0.0, 1.0])).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(Regularizer::tv1d(1.0).unwrap().value(&v(&[0.0, 2.0, 1.0])).unwrap(), 3.0);
    }

    #[test]
    fn prox_examples() {
        let l1 = Regularizer::l1(1.0).unwrap();
        assert_eq!(l1.prox(&v(&[3.0, -0.5, 0.0]), 1.0).unwrap().as_slice(), &[2.0, 0.0, 0.0]);
        let g = Regularizer::group(vec![vec![0, 1]], 1.0).unwrap();
        let z = g.prox(&v(&[3.0, 4.0]), 1.0).unwrap();
        assert!((z[0] - 2.4).abs() < 1e-15 && (z[1] - 3.2).abs() < 1e-15);
        let tv = Regularizer::tv1d(0.5).unwrap();
        assert_eq!(tv.prox(&v(&[1.0, -1.0]), 1.0).unwrap().as_slice(), &[0.5, -0.5]);
        let linf = Regularizer::linf(1.0).unwrap();
        assert_eq!(linf.prox(&v(&[2.0, 0.0]), 1.0).unwrap().as_slice(), &[1.0, 0.0]);
        assert_eq!(linf.prox(&v(&[0.5, -0.25]), 1.0).unwrap().as_slice(), &[0.0, 0.0]);
        let nuc = Regularizer::nuclear(2, 2, 1.0).unwrap();
        let z = nuc.prox(&v(&[3.0, 0.0, 0.0, 0.5]), 1.0).unwrap();
        assert!((z - v(&[2.0, 0.0, 0.0, 0.0])).amax() < 1e-14);
    }

    #[test]
    fn prox_rejects_nonpositive_step() {
        let l1 = Regularizer::l1(1.0).unwrap();
        assert!(l1.prox(&v(&[1.0]), 0.0).is_err());
        assert!(l1.prox(&v(&[1.0]), -1.0).is_err());
    }

    #[test]
    fn dimension_checks() {
        let g = Regularizer::group_contiguous(4, 2, 1.0).unwrap();
        assert!(matches!(g.value(&v(&[1.0, 2.0])), Err(Error::DimensionMismatch { .. })));
        let nuc = Regularizer::nuclear(2, 3, 1.0).unwrap();
        assert!(nuc.prox(&v(&[1.0; 4]), 1.0).is_err());
    }

    #[test]
    fn group_must_partition() {
        assert!(Regularizer::group(vec![vec![0, 1], vec![1, 2]], 1.0).is_err());
        assert!(Regularizer::group(vec![vec![0, 3]], 1.0).is_err());
        assert!(Regularizer::group_contiguous(5, 2, 1.0).is_err());
    }

    #[test]
    fn model_subspace_examples() {
        let l1 = Regularizer::l1(1.0).unwrap();
        let t = l1.model_subspace(&v(&[0.0, 3.0, 0.0, -1.0]), 1e-12).unwrap();
        assert_eq!(t.descriptor, ManifoldDescriptor::CoordinateSupport(vec![1, 3]));
        assert_eq!(t.dim(), 2);

        let linf = Regularizer::linf(1.0).unwrap();
        let t = linf.model_subspace(&v(&[2.0, -2.0, 1.0]), 1e-12).unwrap();
        assert_eq!(
            t.descriptor,
            ManifoldDescriptor::SaturationSupport { indices: vec![0, 1], signs: vec![1, -1] }
        );
        assert_eq!(t.dim(), 2);
        // alpha_I = r s_I: (1, -1, 0) in T, (1, 1, 0) orthogonal to T
        let inside = t.project(&v(&[1.0, -1.0, 0.0])).unwrap();
        assert!((inside - v(&[1.0, -1.0, 0.0])).amax() < 1e-14);
        assert!(t.project(&v(&[1.0, 1.0, 0.0])).unwrap().amax() < 1e-14);
    }

    #[test]
    fn linf_at_zero_has_trivial_model() {
        let linf = Regularizer::linf(1.0).unwrap();
        assert_eq!(linf.model_subspace(&DenseVector::zeros(3), 1e-12).unwrap().dim(), 0);
        assert_eq!(linf.generalized_sign(&DenseVector::zeros(3), 1e-12).unwrap().e, DenseVector::zeros(3));
    }

    #[test]
    fn nuclear_rank_one_tangent_dim() {
        let nuc = Regularizer::nuclear(5, 5, 1.0).unwrap();
        let a = DenseVector::from_fn(5, |i, _| (i + 1) as f64);
        let b = DenseVector::from_fn(5, |i, _| 1.0 - 0.3 * i as f64);
        let x = &a * b.transpose();
        let t = nuc.model_subspace(&DenseVector::from_column_slice(x.as_slice()), 1e-10).unwrap();
        assert_eq!(t.descriptor, ManifoldDescriptor::FixedRank(1));
        assert_eq!(t.dim(), 9);
    }

    #[test]
    fn generalized_sign_examples() {
        let l1 = Regularizer::l1(1.0).unwrap();
        assert_eq!(l1.generalized_sign(&v(&[0.0, 3.0, 0.0, -1.0]), 1e-12).unwrap().e.as_slice(), &[0.0, 1.0, 0.0, -1.0]);
        let linf = Regularizer::linf(1.0).unwrap();
        assert_eq!(linf.generalized_sign(&v(&[2.0, -2.0, 1.0]), 1e-12).unwrap().e.as_slice(), &[0.5, -0.5, 0.0]);
        let g = Regularizer::group_contiguous(4, 2, 1.0).unwrap();
        let e = g.generalized_sign(&v(&[3.0, 4.0, 0.0, 0.0]), 1e-12).unwrap().e;
        assert!((e - v(&[0.6, 0.8, 0.0, 0.0])).amax() < 1e-15);
    }

    #[test]
    fn tv_sign_on_step() {
        // x = [0, 0, 1, 1]: one upward jump, runs of length 2; D s = [0, -1, 1, 0]
        let tv = Regularizer::tv1d(1.0).unwrap();
        let e = tv.generalized_sign(&v(&[0.0, 0.0, 1.0, 1.0]), 1e-12).unwrap().e;
        assert_eq!(e.as_slice(), &[-0.5, -0.5, 0.5, 0.5]);
    }

    #[test]
    fn same_manifold_examples() {
        let l1 = Regularizer::l1(1.0).unwrap();
        let a = l1.model_subspace(&v(&[0.0, 3.0, 0.0, -1.0]), 1e-12).unwrap();
        let b = l1.model_subspace(&v(&[0.0, 1.0, 0.0, -7.0]), 1e-12).unwrap();
        let c = l1.model_subspace(&v(&[0.0, 1.0, 0.0, 0.0]), 1e-12).unwrap();
        assert!(l1.same_manifold(&a, &b).unwrap());
        assert!(!l1.same_manifold(&a, &c).unwrap());

        let nuc = Regularizer::nuclear(2, 2, 1.0).unwrap();
        let p = nuc.model_subspace(&v(&[1.0, 0.0, 0.0, 2.0]), 1e-12).unwrap();
        let q = nuc.model_subspace(&v(&[0.0, 1.0, 3.0, 0.0]), 1e-12).unwrap();
        assert!(nuc.same_manifold(&p, &q).unwrap());
        assert!(l1.same_manifold(&a, &p).is_err());
    }

    #[test]
    fn l1_margin_and_degenerate_margin() {
        let l1 = Regularizer::l1(1.0).unwrap();
        let x = v(&[2.0, 0.0]);
        assert_eq!(l1.nondegeneracy_margin(&x, &v(&[1.0, 0.5]), 1e-12).unwrap(), 0.5);
        assert_eq!(l1.nondegeneracy_margin(&x, &v(&[1.0, 1.0]), 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn tv_margin_uses_cumulative_dual() {
        // y = [-1, 2], lambda = 1 -> x = [0, 1], dual = y - x = [-1, 1]; jump at 0
        let tv = Regularizer::tv1d(1.0).unwrap();
        let x = v(&[0.0, 1.0]);
        assert_eq!(tv.nondegeneracy_margin(&x, &v(&[-1.0, 1.0]), 1e-12).unwrap(), 1.0);
        // flat x, dual = [-0.3, 0.3]: u_0 = 0.3, slack 0.7
        let flat = v(&[1.0, 1.0]);
        assert!((tv.nondegeneracy_margin(&flat, &v(&[-0.3, 0.3]), 1e-12).unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn linf_margin_weights() {
        let linf = Regularizer::linf(1.0).unwrap();
        let x = v(&[1.0, -1.0, 0.5]);
        // dual = 0.7 e_0 - 0.3 e_1: both weights positive, no leak
        assert!((linf.nondegeneracy_margin(&x, &v(&[0.7, -0.3, 0.0]), 1e-12).unwrap() - 0.3).abs() < 1e-15);
        // weight on a saturated entry vanishes -> boundary of the face
        assert_eq!(linf.nondegeneracy_margin(&x, &v(&[1.0, 0.0, 0.0]), 1e-12).unwrap(), 0.0);
    }
}
