//! Independent numerical oracles for the integration tests. Nothing here
//! calls into the library's numerics.

#![allow(dead_code)]

use fbps::linalg::{DenseMatrix, DenseVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(r: &mut ChaCha8Rng, n: usize, scale: f64) -> DenseVector {
    DenseVector::from_fn(n, |_, _| r.random_range(-scale..=scale))
}

pub fn uniform_mat(r: &mut ChaCha8Rng, m: usize, n: usize, scale: f64) -> DenseMatrix {
    DenseMatrix::from_fn(m, n, |_, _| r.random_range(-scale..=scale))
}

/// Cyclic Jacobi eigensolver for a symmetric matrix: eigenvalues ascending
/// with eigenvectors as columns.
pub fn jacobi_eigen(a: &DenseMatrix) -> (Vec<f64>, DenseMatrix) {
    let n = a.nrows();
    let mut a = a.clone();
    let mut v = DenseMatrix::identity(n, n);
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].powi(2)).sum();
        let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)] == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let vals = idx.iter().map(|&i| a[(i, i)]).collect();
    let vecs = DenseMatrix::from_fn(n, n, |r, c| v[(r, idx[c])]);
    (vals, vecs)
}

/// One-sided Jacobi SVD: `(U, s, V)` with `X = U diag(s) V^T`, `s`
/// descending, `U` of size `m x min(m, n)`.
pub fn jacobi_svd(x: &DenseMatrix) -> (DenseMatrix, Vec<f64>, DenseMatrix) {
    if x.nrows() < x.ncols() {
        let (u, s, v) = jacobi_svd(&x.transpose());
        return (v, s, u);
    }
    let (m, n) = x.shape();
    let mut w = x.clone();
    let mut v = DenseMatrix::identity(n, n);
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = w.column(p).norm_squared();
                let beta: f64 = w.column(q).norm_squared();
                let gamma: f64 = w.column(p).dot(&w.column(q));
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..m {
                    let wp = w[(k, p)];
                    let wq = w[(k, q)];
                    w[(k, p)] = c * wp - s * wq;
                    w[(k, q)] = s * wp + c * wq;
                }
                for k in 0..n {
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = c * vp - s * vq;
                    v[(k, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    idx.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let s: Vec<f64> = idx.iter().map(|&j| norms[j]).collect();
    let mut u = DenseMatrix::zeros(m, n);
    for (c, &j) in idx.iter().enumerate() {
        if norms[j] > 0.0 {
            u.set_column(c, &(w.column(j) / norms[j]));
        }
    }
    let vs = DenseMatrix::from_fn(n, n, |r, c| v[(r, idx[c])]);
    (u, s, vs)
}

/// Eigenvalues of `B^T A^T A B`, ascending.
pub fn restricted_spectrum_oracle(a: &DenseMatrix, b: &DenseMatrix) -> Vec<f64> {
    let ab = a * b;
    jacobi_eigen(&(ab.transpose() * ab)).0
}

/// Root of a non-increasing function on `[lo, hi]` by bisection.
pub fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn prox_objective(z: &DenseVector, x: &DenseVector, t: f64, j: impl Fn(&DenseVector) -> f64) -> f64 {
    0.5 * (z - x).norm_squared() + t * j(z)
}

fn patterns(len: usize) -> Vec<Vec<i8>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                [-1i8, 0, 1].into_iter().map(move |s| {
                    let mut q = p.clone();
                    q.push(s);
                    q
                })
            })
            .collect();
    }
    out
}

/// `argmin 1/2 ||z - x||^2 + t ||z||_1` by enumerating all sign patterns and
/// keeping the stationary point of lowest objective.
pub fn l1_prox_oracle(x: &DenseVector, t: f64) -> DenseVector {
    let obj = |z: &DenseVector| prox_objective(z, x, t, |z| z.iter().map(|v| v.abs()).sum());
    let mut best = (f64::INFINITY, x.clone());
    for s in patterns(x.len()) {
        let z = DenseVector::from_fn(x.len(), |i, _| if s[i] == 0 { 0.0 } else { x[i] - t * f64::from(s[i]) });
        let v = obj(&z);
        if v < best.0 {
            best = (v, z);
        }
    }
    best.1
}

/// `argmin 1/2 ||z - x||^2 + t sum |z_{i+1} - z_i|`: for every pattern of
/// difference signs, solve the equality-constrained QP on the runs in
/// closed form and keep the lowest objective.
pub fn tv_prox_oracle(x: &DenseVector, t: f64) -> DenseVector {
    let n = x.len();
    let tv = |z: &DenseVector| (0..n - 1).map(|i| (z[i + 1] - z[i]).abs()).sum::<f64>();
    let mut best = (f64::INFINITY, x.clone());
    for s in patterns(n - 1) {
        // runs separated by nonzero differences
        let mut runs = Vec::new();
        let mut start = 0;
        for (i, &si) in s.iter().enumerate() {
            if si != 0 {
                runs.push((start, i + 1));
                start = i + 1;
            }
        }
        runs.push((start, n));
        // gradient of t s^T D z with respect to z
        let mut lin = DenseVector::zeros(n);
        for i in 0..n - 1 {
            lin[i] -= t * f64::from(s[i]);
            lin[i + 1] += t * f64::from(s[i]);
        }
        let mut z = DenseVector::zeros(n);
        for &(a, b) in &runs {
            let len = (b - a) as f64;
            let u = (a..b).map(|i| x[i] - lin[i]).sum::<f64>() / len;
            for i in a..b {
                z[i] = u;
            }
        }
        let v = prox_objective(&z, x, t, tv);
        if v < best.0 {
            best = (v, z);
        }
    }
    best.1
}

/// `argmin 1/2 ||z - x||^2 + t ||z||_inf`: the minimizer is `clip(x, r)` for
/// the level `r` where `sum_i (|x_i| - r)_+ = t`.
pub fn linf_prox_oracle(x: &DenseVector, t: f64) -> DenseVector {
    let top = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if x.iter().map(|v| v.abs()).sum::<f64>() <= t {
        return DenseVector::zeros(x.len());
    }
    let r = bisect(0.0, top, |r| x.iter().map(|v| (v.abs() - r).max(0.0)).sum::<f64>() - t);
    x.map(|v| v.clamp(-r, r))
}

/// Block-wise: the minimizer keeps the direction of `x_b` and has norm
/// minimizing `1/2 (rho - ||x_b||)^2 + t rho` over `rho >= 0`.
pub fn group_prox_oracle(x: &DenseVector, blocks: &[Vec<usize>], t: f64) -> DenseVector {
    let mut z = DenseVector::zeros(x.len());
    for b in blocks {
        let norm = b.iter().map(|&i| x[i] * x[i]).sum::<f64>().sqrt();
        let rho = bisect(0.0, norm.max(0.0), |r| -(r - norm + t));
        let rho = if norm <= t { 0.0 } else { rho };
        for &i in b {
            z[i] = if norm > 0.0 { x[i] * rho / norm } else { 0.0 };
        }
    }
    z
}

/// Singular value soft-thresholding through the Jacobi SVD.
pub fn nuclear_prox_oracle(x: &DenseVector, rows: usize, cols: usize, t: f64) -> DenseVector {
    let m = DenseMatrix::from_column_slice(rows, cols, x.as_slice());
    let (u, s, v) = jacobi_svd(&m);
    let mut out = DenseMatrix::zeros(rows, cols);
    for (k, &sk) in s.iter().enumerate() {
        let shrunk = (sk - t).max(0.0);
        if shrunk > 0.0 {
            out += shrunk * u.column(k) * v.column(k).transpose();
        }
    }
    DenseVector::from_column_slice(out.as_slice())
}

/// Euclidean projection onto `{z : ||z||_1 <= r}` by bisection on the
/// soft-threshold level.
pub fn l1_ball_projection_oracle(v: &DenseVector, r: f64) -> DenseVector {
    if v.iter().map(|a| a.abs()).sum::<f64>() <= r {
        return v.clone();
    }
    let top = v.iter().map(|a| a.abs()).fold(0.0, f64::max);
    let theta = bisect(0.0, top, |th| v.iter().map(|a| (a.abs() - th).max(0.0)).sum::<f64>() - r);
    v.map(|a| a.signum() * (a.abs() - theta).max(0.0))
}

/// Central finite differences of a scalar function.
pub fn finite_difference_gradient(f: impl Fn(&DenseVector) -> f64, x: &DenseVector, h: f64) -> DenseVector {
    DenseVector::from_fn(x.len(), |i, _| {
        let mut p = x.clone();
        let mut m = x.clone();
        p[i] += h;
        m[i] -= h;
        (f(&p) - f(&m)) / (2.0 * h)
    })
}
