//! Dense linear algebra shared by every other module: orthonormal subspace
//! bases and their projectors, restricted spectra, power iteration and a
//! thin SVD.
//!
//! Storage is dense throughout. Matrix-valued points (nuclear norm) are
//! flattened column-major, matching `nalgebra`'s native layout.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ensure_dim, Error, Result};

pub type DenseVector = DVector<f64>;
pub type DenseMatrix = DMatrix<f64>;

const ORTHONORMAL_TOL: f64 = 1e-10;
const DROP_TOL: f64 = 1e-12;
const POWER_MAX_ITERS: usize = 10_000;
const POWER_REL_TOL: f64 = 1e-10;
const POWER_SEED: u64 = 0x5eed_f00d;
const JACOBI_MAX_SWEEPS: usize = 60;

/// Rejects vectors carrying NaN or infinities.
pub fn check_finite(v: &DenseVector, what: &str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub fn check_finite_matrix(a: &DenseMatrix, what: &str) -> Result<()> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::InvalidArgument(format!("{what} has an empty dimension")));
    }
    if a.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub fn sup_norm(v: &DenseVector) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Orthonormal basis of a subspace of `R^n`, stored as an `n x d` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    basis: DenseMatrix,
}

impl SubspaceBasis {
    /// Wraps a matrix whose columns are already orthonormal.
    pub fn new(basis: DenseMatrix) -> Result<Self> {
        if basis.nrows() == 0 {
            return Err(Error::InvalidArgument("ambient dimension must be positive".into()));
        }
        if basis.ncols() > basis.nrows() {
            return Err(Error::InvalidArgument(format!(
                "{} basis vectors in dimension {}",
                basis.ncols(),
                basis.nrows()
            )));
        }
        let gram = basis.transpose() * &basis;
        let d = basis.ncols();
        let dev = (gram - DenseMatrix::identity(d, d)).amax();
        if dev > ORTHONORMAL_TOL {
            return Err(Error::InvalidArgument(format!(
                "basis columns are not orthonormal (deviation {dev:.3e})"
            )));
        }
        Ok(Self { basis })
    }

    /// Gram-Schmidt with one re-orthogonalization pass; nearly dependent
    /// columns are dropped.
    pub fn from_columns(ambient: usize, columns: &[DenseVector]) -> Result<Self> {
        if ambient == 0 {
            return Err(Error::InvalidArgument("ambient dimension must be positive".into()));
        }
        let mut kept: Vec<DenseVector> = Vec::with_capacity(columns.len());
        for col in columns {
            ensure_dim(ambient, col.len())?;
            let norm0 = col.norm();
            if norm0 == 0.0 {
                continue;
            }
            let mut v = col.clone();
            for _ in 0..2 {
                for q in &kept {
                    let c = q.dot(&v);
                    v.axpy(-c, q, 1.0);
                }
            }
            let norm = v.norm();
            if norm < DROP_TOL * norm0.max(1.0) {
                continue;
            }
            kept.push(v / norm);
        }
        let mut basis = DenseMatrix::zeros(ambient, kept.len());
        for (j, q) in kept.iter().enumerate() {
            basis.set_column(j, q);
        }
        Ok(Self { basis })
    }

    pub fn full(n: usize) -> Self {
        Self { basis: DenseMatrix::identity(n, n) }
    }

    pub fn empty(n: usize) -> Self {
        Self { basis: DenseMatrix::zeros(n, 0) }
    }

    /// Span of the canonical vectors `e_i`, `i in indices` (zero-based).
    pub fn coordinates(n: usize, indices: &[usize]) -> Result<Self> {
        let mut basis = DenseMatrix::zeros(n, indices.len());
        for (j, &i) in indices.iter().enumerate() {
            if i >= n {
                return Err(Error::InvalidArgument(format!("coordinate {i} out of range {n}")));
            }
            if basis.row(i).iter().any(|&x| x != 0.0) {
                return Err(Error::InvalidArgument(format!("coordinate {i} repeated")));
            }
            basis[(i, j)] = 1.0;
        }
        Ok(Self { basis })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    /// Coordinates `B^T x` of the projection in this basis.
    pub fn coefficients(&self, x: &DenseVector) -> Result<DenseVector> {
        ensure_dim(self.ambient(), x.len())?;
        Ok(self.basis.tr_mul(x))
    }
}

/// Orthogonal projection `B (B^T x)` onto the span of `basis`.
pub fn project(basis: &SubspaceBasis, x: &DenseVector) -> Result<DenseVector> {
    let c = basis.coefficients(x)?;
    Ok(&basis.basis * c)
}

/// Smallest and largest eigenvalues of `B^T A^T A B`.
pub fn restricted_operator_spectrum(a: &DenseMatrix, basis: &SubspaceBasis) -> Result<(f64, f64)> {
    ensure_dim(a.ncols(), basis.ambient())?;
    if basis.dim() == 0 {
        return Err(Error::InvalidArgument("empty subspace has no spectrum".into()));
    }
    let eig = restricted_eigenvalues(a, basis);
    let lo = eig.iter().cloned().fold(f64::INFINITY, f64::min).max(0.0);
    let hi = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max).max(0.0);
    Ok((lo, hi))
}

/// Eigenvalues of `B^T A^T A B`, ascending.
pub(crate) fn restricted_eigenvalues(a: &DenseMatrix, basis: &SubspaceBasis) -> Vec<f64> {
    let ab = a * basis.matrix();
    let gram = ab.tr_mul(&ab);
    let mut vals: Vec<f64> = SymmetricEigen::new(gram).eigenvalues.iter().cloned().collect();
    vals.sort_by(|x, y| x.total_cmp(y));
    vals
}

/// Largest eigenvalue of `A^T A` by power iteration from a seeded random start.
pub fn largest_singular_value_sq(a: &DenseMatrix) -> Result<f64> {
    check_finite_matrix(a, "operator")?;
    let n = a.ncols();
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_SEED);
    let mut v = DenseVector::from_fn(n, |_, _| rng.random::<f64>() - 0.5);
    let norm = v.norm();
    if norm == 0.0 {
        v[0] = 1.0;
    } else {
        v /= norm;
    }
    let mut prev = f64::NAN;
    for _ in 0..POWER_MAX_ITERS {
        let av = a * &v;
        let rayleigh = av.norm_squared();
        let w = a.tr_mul(&av);
        let wn = w.norm();
        if wn == 0.0 {
            return Ok(0.0);
        }
        v = w / wn;
        if (rayleigh - prev).abs() <= POWER_REL_TOL * rayleigh {
            let av = a * &v;
            return Ok(av.norm_squared());
        }
        prev = rayleigh;
    }
    Err(Error::NotConverged { what: "power iteration", iters: POWER_MAX_ITERS })
}

/// Reduced SVD `X = U diag(s) V^T` with `s` nonincreasing.
#[derive(Debug, Clone)]
pub struct ThinSvd {
    pub u: DenseMatrix,
    pub singular_values: DenseVector,
    pub v: DenseMatrix,
}

impl ThinSvd {
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u.clone();
        for (j, s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.v.transpose()
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.singular_values.iter().filter(|&&s| s > tol).count()
    }
}

pub fn thin_svd(x: &DenseMatrix) -> Result<ThinSvd> {
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("matrix".into()));
    }
    let (u, s, v) = checked_svd(x)?;
    let k = s.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let mut uo = DenseMatrix::zeros(u.nrows(), k);
    let mut vo = DenseMatrix::zeros(v.nrows(), k);
    let mut so = DenseVector::zeros(k);
    for (dst, &src) in order.iter().enumerate() {
        uo.set_column(dst, &u.column(src));
        vo.set_column(dst, &v.column(src));
        so[dst] = s[src].max(0.0);
    }
    Ok(ThinSvd { u: uo, singular_values: so, v: vo })
}

fn factors_reconstruct(u: &DenseMatrix, s: &DenseVector, v: &DenseMatrix, x: &DenseMatrix) -> bool {
    let tol = 1e-12 * (1.0 + x.norm()) * ((x.nrows() + x.ncols()) as f64).sqrt();
    let k = s.len();
    let mut us = u.clone();
    for (j, sj) in s.iter().enumerate() {
        us.column_mut(j).scale_mut(*sj);
    }
    let id = DenseMatrix::identity(k, k);
    (us * v.transpose() - x).norm() <= tol
        && (u.tr_mul(u) - &id).amax() <= 1e-10
        && (v.tr_mul(v) - &id).amax() <= 1e-10
}

/// One-sided Jacobi SVD of a tall matrix: `(U, s, V)` with `U` `m x n`.
/// Columns of `U` for zero singular values are completed to an
/// orthonormal set.
fn jacobi_svd_tall(x: &DenseMatrix) -> Result<(DenseMatrix, DenseVector, DenseMatrix)> {
    let (m, n) = x.shape();
    let mut w = x.clone();
    let mut v = DenseMatrix::identity(n, n);
    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let a = w.column(p).norm_squared();
                let b = w.column(q).norm_squared();
                let g = w.column(p).dot(&w.column(q));
                if g == 0.0 || g.abs() <= f64::EPSILON * (a * b).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (b - a) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = c * t;
                for k in 0..m {
                    let (wp, wq) = (w[(k, p)], w[(k, q)]);
                    w[(k, p)] = c * wp - sn * wq;
                    w[(k, q)] = sn * wp + c * wq;
                }
                for k in 0..n {
                    let (vp, vq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vp - sn * vq;
                    v[(k, q)] = sn * vp + c * vq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged { what: "Jacobi SVD", iters: JACOBI_MAX_SWEEPS });
    }
    let s = DenseVector::from_fn(n, |j, _| w.column(j).norm());
    let top = s.max();
    let mut cols = Vec::with_capacity(n);
    let mut zero = Vec::new();
    for j in 0..n {
        if s[j] > f64::EPSILON * top * (m as f64) {
            cols.push(w.column(j) / s[j]);
        } else {
            zero.push(j);
        }
    }
    let q = DenseMatrix::from_columns(&cols);
    let mut u = DenseMatrix::zeros(m, n);
    let full = if cols.is_empty() { DenseMatrix::identity(m, m) } else { complete_basis(&q) };
    let mut next = cols.len();
    let mut kept = 0;
    for j in 0..n {
        if zero.contains(&j) {
            u.set_column(j, &full.column(next));
            next += 1;
        } else {
            u.set_column(j, &full.column(kept));
            kept += 1;
        }
    }
    Ok((u, s, v))
}

/// nalgebra's implicit-shift SVD, checked for reconstruction and
/// orthonormality; on nearly rank-deficient inputs it can return factors
/// that do not reproduce `x`, in which case a one-sided Jacobi SVD is used.
fn checked_svd(x: &DenseMatrix) -> Result<(DenseMatrix, DenseVector, DenseMatrix)> {
    if let Some(svd) = SVD::try_new(x.clone(), true, true, 5.0 * f64::EPSILON, 0) {
        let u = svd.u.expect("requested U");
        let v = svd.v_t.expect("requested V^T").transpose();
        if factors_reconstruct(&u, &svd.singular_values, &v, x) {
            return Ok((u, svd.singular_values, v));
        }
    }
    if x.nrows() >= x.ncols() {
        jacobi_svd_tall(x)
    } else {
        let (u, s, v) = jacobi_svd_tall(&x.transpose())?;
        Ok((v, s, u))
    }
}

/// Completes the orthonormal columns of `q` to an orthonormal basis of `R^n`.
pub(crate) fn complete_basis(q: &DenseMatrix) -> DenseMatrix {
    let n = q.nrows();
    let mut cols: Vec<DenseVector> = q.column_iter().map(|c| c.into_owned()).collect();
    for i in 0..n {
        cols.push(DenseVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 }));
    }
    let basis = SubspaceBasis::from_columns(n, &cols).expect("ambient positive");
    basis.basis
}
