//! Seeded randomness for experiments.
//!
//! Every experiment derives all of its random objects from one `u64` seed
//! using ChaCha8 (`rand_chacha`). Each generated object draws from its own
//! ChaCha stream: the generator is seeded with `seed_from_u64(seed)` and then
//! switched to a fixed stream id, listed in [`Stream`]. Multi-start initial
//! points use stream `MULTISTART + i`. Gaussian samples use the ziggurat
//! sampler of `rand_distr::StandardNormal`; matrices are filled row by row.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{DenseMatrix, DenseVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Operator = 0,
    Signal = 1,
    Noise = 2,
    Multistart = 16,
}

/// Generator for a given experiment seed and stream.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `m x n` matrix of i.i.d. standard normal entries, filled row-major from
/// the operator stream of `seed`.
pub fn gen_gaussian_matrix(m: usize, n: usize, seed: u64) -> DenseMatrix {
    let mut rng = stream_rng(seed, Stream::Operator as u64);
    gaussian_matrix_from(&mut rng, m, n)
}

pub(crate) fn gaussian_matrix_from(rng: &mut ChaCha8Rng, m: usize, n: usize) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            a[(i, j)] = StandardNormal.sample(rng);
        }
    }
    a
}

pub(crate) fn gaussian_vector_from(rng: &mut ChaCha8Rng, n: usize) -> DenseVector {
    DenseVector::from_fn(n, |_, _| StandardNormal.sample(rng))
}
