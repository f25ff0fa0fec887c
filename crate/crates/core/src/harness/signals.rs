use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::rng::{gaussian_matrix_from, stream_rng, Stream};
use crate::error::{Error, Result};
use crate::linalg::DenseVector;

/// Structure of the ground-truth signal `x_0`.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalModel {
    /// `sparsity` nonzeros with random signs and magnitudes in `[0.5, 1.5]`.
    Sparse { sparsity: usize },
    /// Piecewise constant with exactly `jumps` jumps of magnitude in `[0.5, 1.5]`.
    PiecewiseConstant { jumps: usize },
    /// Exactly `count` entries equal to `+-1`, the rest uniform in `[-0.9, 0.9]`.
    Saturated { count: usize },
    /// `active_blocks` contiguous blocks of `block_size` nonzeros.
    BlockSparse { block_size: usize, active_blocks: usize },
    /// `rows x cols` product of two Gaussian factors of rank `rank`,
    /// flattened column-major.
    LowRank { rows: usize, cols: usize, rank: usize },
}

impl SignalModel {
    pub fn label(&self) -> &'static str {
        match self {
            SignalModel::Sparse { .. } => "sparse",
            SignalModel::PiecewiseConstant { .. } => "piecewise",
            SignalModel::Saturated { .. } => "saturated",
            SignalModel::BlockSparse { .. } => "block",
            SignalModel::LowRank { .. } => "lowrank",
        }
    }

    /// Checks the structure is realizable in dimension `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        match *self {
            SignalModel::Sparse { sparsity } if sparsity > n => bad(format!("{sparsity}-sparse signal in dimension {n}")),
            SignalModel::PiecewiseConstant { jumps } if n < 2 || jumps > n - 1 => {
                bad(format!("{jumps} jumps in dimension {n}"))
            }
            SignalModel::Saturated { count } if count == 0 || count > n => {
                bad(format!("{count} saturating entries in dimension {n}"))
            }
            SignalModel::BlockSparse { block_size, active_blocks } => {
                if block_size == 0 || !n.is_multiple_of(block_size) {
                    bad(format!("block size {block_size} does not divide {n}"))
                } else if active_blocks > n / block_size {
                    bad(format!("{active_blocks} active blocks out of {}", n / block_size))
                } else {
                    Ok(())
                }
            }
            SignalModel::LowRank { rows, cols, rank } => {
                if rows * cols != n {
                    bad(format!("{rows}x{cols} matrix does not have {n} entries"))
                } else if rank > rows.min(cols) {
                    bad(format!("rank {rank} exceeds {rows}x{cols}"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

fn signed_magnitude(rng: &mut ChaCha8Rng) -> f64 {
    let mag = rng.random_range(0.5..=1.5);
    if rng.random::<bool>() {
        mag
    } else {
        -mag
    }
}

/// Draws `x_0` of dimension `n` from the signal stream of `seed`.
pub fn gen_signal(model: &SignalModel, n: usize, seed: u64) -> Result<DenseVector> {
    model.validate(n)?;
    let mut rng = stream_rng(seed, Stream::Signal as u64);
    let mut x = DenseVector::zeros(n);
    match *model {
        SignalModel::Sparse { sparsity } => {
            for i in sample(&mut rng, n, sparsity) {
                x[i] = signed_magnitude(&mut rng);
            }
        }
        SignalModel::PiecewiseConstant { jumps } => {
            let mut at: Vec<usize> = sample(&mut rng, n - 1, jumps).into_vec();
            at.sort_unstable();
            let mut level = rng.random_range(-1.0..=1.0);
            let mut next = at.iter().peekable();
            for i in 0..n {
                x[i] = level;
                if next.peek() == Some(&&i) {
                    next.next();
                    level += signed_magnitude(&mut rng);
                }
            }
        }
        SignalModel::Saturated { count } => {
            let mut saturated = vec![false; n];
            for i in sample(&mut rng, n, count) {
                saturated[i] = true;
            }
            for i in 0..n {
                x[i] = if saturated[i] {
                    if rng.random::<bool>() {
                        1.0
                    } else {
                        -1.0
                    }
                } else {
                    rng.random_range(-0.9..=0.9)
                };
            }
        }
        SignalModel::BlockSparse { block_size, active_blocks } => {
            for b in sample(&mut rng, n / block_size, active_blocks) {
                for i in b * block_size..(b + 1) * block_size {
                    x[i] = signed_magnitude(&mut rng);
                }
            }
        }
        SignalModel::LowRank { rows, cols, rank } => {
            let left = gaussian_matrix_from(&mut rng, rows, rank);
            let right = gaussian_matrix_from(&mut rng, rank, cols);
            x = DenseVector::from_column_slice((left * right).as_slice());
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{thin_svd, DenseMatrix};

    #[test]
    fn sparse_has_exact_support() {
        let x = gen_signal(&SignalModel::Sparse { sparsity: 8 }, 128, 1).unwrap();
        assert_eq!(x.iter().filter(|v| **v != 0.0).count(), 8);
    }

    #[test]
    fn piecewise_has_exact_jumps() {
        let x = gen_signal(&SignalModel::PiecewiseConstant { jumps: 8 }, 128, 2).unwrap();
        let jumps = x.as_slice().windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(jumps, 8);
    }

    #[test]
    fn saturation_count() {
        let x = gen_signal(&SignalModel::Saturated { count: 10 }, 128, 3).unwrap();
        let m = x.amax();
        assert_eq!(x.iter().filter(|v| v.abs() == m).count(), 10);
    }

    #[test]
    fn block_support() {
        let x = gen_signal(&SignalModel::BlockSparse { block_size: 4, active_blocks: 2 }, 128, 4).unwrap();
        assert_eq!(x.iter().filter(|v| **v != 0.0).count(), 8);
        for b in 0..32 {
            let nz = (0..4).filter(|i| x[b * 4 + i] != 0.0).count();
            assert!(nz == 0 || nz == 4);
        }
    }

    #[test]
    fn low_rank_has_exact_rank() {
        let x = gen_signal(&SignalModel::LowRank { rows: 50, cols: 50, rank: 5 }, 2500, 5).unwrap();
        let svd = thin_svd(&DenseMatrix::from_column_slice(50, 50, x.as_slice())).unwrap();
        assert_eq!(svd.rank(1e-10), 5);
    }

    #[test]
    fn impossible_structures() {
        assert!(gen_signal(&SignalModel::Sparse { sparsity: 9 }, 8, 0).is_err());
        assert!(gen_signal(&SignalModel::PiecewiseConstant { jumps: 8 }, 8, 0).is_err());
        assert!(gen_signal(&SignalModel::Saturated { count: 0 }, 8, 0).is_err());
        assert!(gen_signal(&SignalModel::BlockSparse { block_size: 3, active_blocks: 1 }, 8, 0).is_err());
        assert!(gen_signal(&SignalModel::LowRank { rows: 2, cols: 3, rank: 3 }, 6, 0).is_err());
    }
}
