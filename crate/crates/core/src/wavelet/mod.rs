//! Daubechies filters, the boundary-free wavelet pyramid, and the
//! frequency-domain integrals of the mother wavelet.

pub mod dwt;
pub mod filters;
pub mod quadrature;
pub mod spectrum;

pub use dwt::{coefficient_count, dwt_pyramid, max_feasible_scale, WaveletPyramid};
pub use filters::{daubechies_filters, FilterPair, QuadratureConfig, WaveletSpec};
pub use spectrum::{k_integral, k_j_integral, psi_hat_sq, psi_spectrum, PsiSpectrum};
