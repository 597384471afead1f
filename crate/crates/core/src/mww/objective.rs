//! Profiled wavelet Whittle criterion.

use std::f64::consts::LN_2;

use nalgebra::DMatrix;

use super::scalogram::Scalogram;
use crate::error::{MwwError, Result};

/// `2^{-j s} x` evaluated through logarithms so large exponents cannot
/// overflow before the product is formed.
fn scaled(x: f64, j: usize, s: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let log = x.abs().ln() - j as f64 * s * LN_2;
    x.signum() * log.exp()
}

/// `sum_j w(j) Lambda_j^{-1} I(j) Lambda_j^{-1} / n` with entrywise weights.
fn weighted_sum(scal: &Scalogram, d: &[f64], weight: impl Fn(usize) -> f64) -> DMatrix<f64> {
    let p = scal.dim();
    let n = scal.total() as f64;
    let mut g = DMatrix::zeros(p, p);
    for j in scal.scales() {
        let w = weight(j);
        if w == 0.0 {
            continue;
        }
        let i = scal.matrix(j);
        for a in 0..p {
            for b in 0..=a {
                let v = w * scaled(i[(a, b)], j, d[a] + d[b]);
                g[(a, b)] += v;
                if a != b {
                    g[(b, a)] += v;
                }
            }
        }
    }
    g / n
}

fn check_dim(scal: &Scalogram, d: &[f64]) -> Result<()> {
    if d.len() != scal.dim() {
        return Err(MwwError::Dimension(format!(
            "{} memory exponents for a {}-channel scalogram",
            d.len(),
            scal.dim()
        )));
    }
    Ok(())
}

/// `G_hat(d) = (1/n) sum_j Lambda_j(d)^{-1} I(j) Lambda_j(d)^{-1}`, the minimizer
/// of the Whittle criterion over `G` for fixed `d`.
pub fn g_hat(scal: &Scalogram, d: &[f64]) -> Result<DMatrix<f64>> {
    check_dim(scal, d)?;
    Ok(weighted_sum(scal, d, |_| 1.0))
}

/// Whittle criterion in trace form:
/// `(1/n) sum_j [n_j log det(Lambda_j G Lambda_j) + tr((Lambda_j G Lambda_j)^{-1} I(j))]`.
pub fn whittle_likelihood(scal: &Scalogram, g: &DMatrix<f64>, d: &[f64]) -> Result<f64> {
    check_dim(scal, d)?;
    if g.nrows() != scal.dim() || g.ncols() != scal.dim() {
        return Err(MwwError::Dimension("G does not match the scalogram".into()));
    }
    let chol = g.clone().cholesky().ok_or(MwwError::Singular)?;
    let log_det_g = 2.0 * chol.l().diagonal().iter().map(|x| x.ln()).sum::<f64>();
    if !log_det_g.is_finite() {
        return Err(MwwError::Singular);
    }
    let g_inv = chol.inverse();
    let n = scal.total() as f64;
    let sum_d: f64 = d.iter().sum();
    let mut total = 0.0;
    for j in scal.scales() {
        let nj = scal.count(j) as f64;
        let log_det = log_det_g + 2.0 * LN_2 * j as f64 * sum_d;
        let i = scal.matrix(j);
        let p = scal.dim();
        let mut trace = 0.0;
        for a in 0..p {
            for b in 0..p {
                trace += g_inv[(a, b)] * scaled(i[(b, a)], j, d[a] + d[b]);
            }
        }
        total += nj * log_det + trace;
    }
    Ok(total / n)
}

/// `R(d) = log det G_hat(d) + 2 log(2) <J> sum_l d_l`. Returns `+inf` when
/// `G_hat(d)` is not positive definite.
pub fn objective_r(scal: &Scalogram, d: &[f64]) -> f64 {
    let Ok(g) = g_hat(scal, d) else {
        return f64::INFINITY;
    };
    match log_det_spd(&g) {
        Some(ld) => ld + 2.0 * LN_2 * scal.mean_scale() * d.iter().sum::<f64>(),
        None => f64::INFINITY,
    }
}

/// Analytic gradient of `R`:
/// `dR/dd_a = 2 log(2) (<J> - (G_hat^{-1} B)_{aa})` with
/// `B = (1/n) sum_j j Lambda_j^{-1} I(j) Lambda_j^{-1}`.
pub fn objective_gradient(scal: &Scalogram, d: &[f64]) -> Result<Vec<f64>> {
    let g = g_hat(scal, d)?;
    let b = weighted_sum(scal, d, |j| j as f64);
    let chol = g.cholesky().ok_or(MwwError::Singular)?;
    let gb = chol.solve(&b);
    Ok((0..scal.dim())
        .map(|a| 2.0 * LN_2 * (scal.mean_scale() - gb[(a, a)]))
        .collect())
}

pub(crate) fn log_det_spd(m: &DMatrix<f64>) -> Option<f64> {
    let chol = m.clone().cholesky()?;
    let ld = 2.0 * chol.l().diagonal().iter().map(|x| x.ln()).sum::<f64>();
    ld.is_finite().then_some(ld)
}
