//! Model-implied wavelet covariances under the local spectral approximation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::params::{LongRunCov, MemoryParams};
use crate::error::{MwwError, Result};
use crate::wavelet::{psi_spectrum, WaveletSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApproxOrder {
    /// Scale-free `K(d_l + d_m)`.
    First,
    /// Scale-dependent `K_j(d_l, d_m)`.
    Second,
}

/// Approximate `Cov(W_{j,k}(l), W_{j,k}(m))`:
/// `Omega_lm 2^{j(d_l+d_m)} cos(pi (d_l - d_m) / 2) K / (2 pi)`.
///
/// The `1/(2 pi)` is the normalization of the spectral density, so that a
/// white-noise panel with covariance `Omega` yields `Omega` at every scale.
pub fn model_wavelet_cov(
    j: usize,
    l: usize,
    m: usize,
    d: &MemoryParams,
    omega: &LongRunCov,
    spec: &WaveletSpec,
    order: ApproxOrder,
) -> Result<f64> {
    let p = d.len();
    if l >= p || m >= p || omega.dim() != p {
        return Err(MwwError::Dimension(format!(
            "channels ({l},{m}) with {p} memory exponents and a {}-dim covariance",
            omega.dim()
        )));
    }
    let (dl, dm) = (d.as_slice()[l], d.as_slice()[m]);
    let rule = psi_spectrum(spec);
    let k = match order {
        ApproxOrder::First => rule.k(dl + dm)?,
        ApproxOrder::Second => rule.k_j(j, dl, dm)?,
    };
    let phase = (PI * (dl - dm) / 2.0).cos();
    Ok(omega.matrix()[(l, m)] * 2f64.powf(j as f64 * (dl + dm)) * phase * k / (2.0 * PI))
}
