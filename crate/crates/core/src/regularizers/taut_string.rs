//! Exact proximity operator of the 1D total variation,
//! `argmin_z 1/2 ||z - y||^2 + lambda * sum_i |z_{i+1} - z_i|`.
//!
//! This is the direct (non-iterative) form of the taut-string method: the
//! string is built left to right while the two running bounds `vmin`/`vmax`
//! on the current segment level stay compatible with the tube of half-width
//! `lambda` around the cumulative sum of `y`. When one bound is violated the
//! segment up to the last knot on the opposite side is emitted. Output
//! values inside a segment are bit-identical, so the jump set of the
//! result can be read off exactly.

/// Returns the TV-prox of `y` with weight `lambda >= 0`.
pub fn tv1d_prox(y: &[f64], lambda: f64) -> Vec<f64> {
    let n = y.len();
    let mut out = vec![0.0; n];
    if n == 0 {
        return out;
    }
    if lambda <= 0.0 || n == 1 {
        out.copy_from_slice(y);
        return out;
    }
    let two_lambda = 2.0 * lambda;
    let (mut k, mut k0, mut kminus, mut kplus) = (0usize, 0usize, 0usize, 0usize);
    let mut umin = lambda;
    let mut umax = -lambda;
    let mut vmin = y[0] - lambda;
    let mut vmax = y[0] + lambda;

    // emits out[k0..=last] = value and advances k0
    let emit = |out: &mut [f64], k0: &mut usize, last: usize, value: f64| loop {
        out[*k0] = value;
        *k0 += 1;
        if *k0 > last {
            break;
        }
    };

    loop {
        while k == n - 1 {
            if umin < 0.0 {
                emit(&mut out, &mut k0, kminus, vmin);
                k = k0;
                kminus = k0;
                vmin = y[k0];
                umin = lambda;
                umax = vmin + umin - vmax;
            } else if umax > 0.0 {
                emit(&mut out, &mut k0, kplus, vmax);
                k = k0;
                kplus = k0;
                vmax = y[k0];
                umax = -lambda;
                umin = vmax + umax - vmin;
            } else {
                vmin += umin / (k - k0 + 1) as f64;
                emit(&mut out, &mut k0, k, vmin);
                return out;
            }
        }
        umin += y[k + 1] - vmin;
        if umin < -lambda {
            emit(&mut out, &mut k0, kminus, vmin);
            k = k0;
            kminus = k0;
            kplus = k0;
            vmin = y[k0];
            vmax = vmin + two_lambda;
            umin = lambda;
            umax = -lambda;
            continue;
        }
        umax += y[k + 1] - vmax;
        if umax > lambda {
            emit(&mut out, &mut k0, kplus, vmax);
            k = k0;
            kminus = k0;
            kplus = k0;
            vmax = y[k0];
            vmin = vmax - two_lambda;
            umin = lambda;
            umax = -lambda;
        } else {
            k += 1;
            if umin >= lambda {
                kminus = k;
                vmin += (umin - lambda) / (kminus - k0 + 1) as f64;
                umin = lambda;
            }
            if umax <= -lambda {
                kplus = k;
                vmax += (umax + lambda) / (kplus - k0 + 1) as f64;
                umax = -lambda;
            }
        }
    }
}
