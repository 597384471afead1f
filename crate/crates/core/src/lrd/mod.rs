//! Long-memory model: parameters, simulation and model-implied wavelet
//! covariances.

pub mod arfima;
pub mod model;
pub mod params;

pub use arfima::{
    channel_plans, derive_seed, frac_diff_coeffs, integration_order, simulate_arfima, ArfimaSpec,
};
pub use model::{model_wavelet_cov, ApproxOrder};
pub use params::{correlation_of, HolderParams, LongRunCov, MemoryParams};
