//! Multivariate wavelet Whittle estimation for long-range dependent panels.
//!
//! The crate is organized bottom-up:
//!
//! - [`wavelet`]: Daubechies filters, the boundary-free pyramid, `|psi_hat|^2`
//!   and the integrals `K(delta)`, `K_j`.
//! - [`lrd`]: memory parameters, long-run covariance, ARFIMA(0,d,0) simulation
//!   and model-implied wavelet covariances.
//! - [`mww`]: scalogram, profiled Whittle objective, estimation of `d` and `Omega`.
//! - [`harness`]: seeded Monte-Carlo scenarios with bias/std/RMSE reports.

pub mod error;
pub mod harness;
pub mod lrd;
pub mod mww;
pub mod panel;
pub mod plot;
pub mod wavelet;

pub use error::{MwwError, Result};
pub use panel::TimeSeriesPanel;
