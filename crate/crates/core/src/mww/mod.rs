//! Multivariate wavelet Whittle estimation of `d` and `Omega`.

pub mod estimate;
pub mod objective;
pub mod optimize;
pub mod scalogram;

pub use estimate::{
    estimate_d, estimate_omega, estimate_panel, estimate_pyramid, estimate_univariate_each,
    j0_from_holder, regression_start, resolve_scales, DEstimate, Diagnostics, EstimationConfig,
    MwwEstimate, OmegaEstimate, PairFlag, PairIssue, ScaleSelection,
};
pub use objective::{g_hat, objective_gradient, objective_r, whittle_likelihood};
pub use optimize::{nelder_mead, SimplexOptions, SimplexResult};
pub use scalogram::{scalogram, Scalogram};
