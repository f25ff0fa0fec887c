//! Forward-Backward proximal splitting for `min_x F(x) + J(x)` with `F`
//! quadratic and `J` partly smooth, together with an analysis layer:
//! finite identification of the active manifold, certificates for the
//! non-degeneracy and restricted strong convexity assumptions, closed-form
//! local linear rates, and rate fitting on recorded trajectories.
//!
//! ```
//! use fbps::linalg::{DenseMatrix, DenseVector};
//! use fbps::regularizers::Regularizer;
//! use fbps::smooth::SmoothTerm;
//! use fbps::solver::{fb_solve, SolverConfig, StepSchedule};
//!
//! let f = SmoothTerm::least_squares(DenseMatrix::identity(3, 3), DenseVector::from_vec(vec![3.0, -0.5, 1.5])).unwrap();
//! let j = Regularizer::l1(1.0).unwrap();
//! let traj = fb_solve(&f, &j, &DenseVector::zeros(3), &StepSchedule::Constant(1.0), &SolverConfig::default(), None).unwrap();
//! assert_eq!(traj.final_x.as_slice(), &[2.0, 0.0, 0.5]);
//! ```

// `!(x > 0.0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod regularizers;
pub mod smooth;
pub mod solver;

pub use error::{Error, Result};
