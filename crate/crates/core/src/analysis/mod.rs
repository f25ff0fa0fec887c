//! Finite identification detection, assumption certificates, closed-form
//! rate predictions and observed-rate fitting.

mod certificate;
mod identification;
mod rates;

pub use certificate::{certify, fixed_point_residual, stationarity_tol, CertificateReport};
pub use identification::{
    detect_identification, detect_in_descriptors, fit_floor, fit_observed_rate, IdentificationResult,
};
pub use rates::{
    predict_rate_degenerate, predict_rate_q_general, predict_rate_quadratic, predict_rate_r_subspace,
    restricted_kernel_dim, RateParams, RatePrediction, Regime,
};
