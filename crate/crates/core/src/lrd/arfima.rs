//! Multivariate ARFIMA(0, d, 0) simulation through a truncated MA(inf)
//! representation with Cholesky-correlated Gaussian innovations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::params::{LongRunCov, MemoryParams};
use crate::error::{MwwError, Result};
use crate::panel::TimeSeriesPanel;

/// MA(inf) weights of `(1 - L)^{-d}`: `psi_0 = 1`, `psi_j = psi_{j-1} (j - 1 + d) / j`.
pub fn frac_diff_coeffs(d: f64, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut w = 1.0;
    for j in 0..count {
        if j > 0 {
            w *= (j as f64 - 1.0 + d) / j as f64;
        }
        out.push(w);
    }
    out
}

/// Splits `d` into an integration order `D` and a stationary exponent
/// `d - D` in `[-1/2, 1/2)`.
pub fn integration_order(d: f64) -> (i64, f64) {
    let order = (d + 0.5).floor() as i64;
    (order, d - order as f64)
}

/// SplitMix64 finalizer applied to `root + index * golden`; a bijection in
/// `index` for a fixed root, so replication seeds never collide.
pub fn derive_seed(root: u64, index: u64) -> u64 {
    let mut z = root.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArfimaSpec {
    pub d: MemoryParams,
    /// Innovation covariance; equals the long-run covariance for ARFIMA(0,d,0).
    pub omega: LongRunCov,
    pub n: usize,
    /// Number of MA weights kept per channel.
    pub truncation: usize,
    pub burn_in: usize,
    pub seed: u64,
    /// When set, every `d_l` must stay below this number of vanishing moments.
    pub moment_bound: Option<usize>,
    /// Optional per-channel AR(1) coefficients applied to the stationary part.
    pub ar1: Option<Vec<f64>>,
}

impl ArfimaSpec {
    pub fn new(d: MemoryParams, omega: LongRunCov, n: usize, seed: u64) -> Self {
        Self {
            d,
            omega,
            n,
            truncation: 10 * n.max(1),
            burn_in: 100,
            seed,
            moment_bound: None,
            ar1: None,
        }
    }

    pub fn with_moment_bound(mut self, m: usize) -> Self {
        self.moment_bound = Some(m);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_len(mut self, n: usize) -> Self {
        self.n = n;
        self.truncation = self.truncation.max(10 * n);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(MwwError::Config("sample count must be at least 1".into()));
        }
        if self.truncation < self.n {
            return Err(MwwError::Config(format!(
                "truncation {} shorter than sample count {}",
                self.truncation, self.n
            )));
        }
        if self.d.len() != self.omega.dim() {
            return Err(MwwError::Dimension(format!(
                "{} memory exponents for a {}x{} covariance",
                self.d.len(),
                self.omega.dim(),
                self.omega.dim()
            )));
        }
        if let Some(m) = self.moment_bound {
            if let Some((channel, &d)) = self
                .d
                .as_slice()
                .iter()
                .enumerate()
                .find(|(_, &d)| d >= m as f64)
            {
                return Err(MwwError::VanishingMoments {
                    channel,
                    d,
                    moments: m,
                });
            }
        }
        if let Some(phi) = &self.ar1 {
            if phi.len() != self.d.len() || phi.iter().any(|p| p.abs() >= 1.0) {
                return Err(MwwError::Config(
                    "AR(1) coefficients need one entry per channel inside (-1, 1)".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Configuration-independent summary of how each channel is produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelPlan {
    pub integration: i64,
    pub stationary_d: f64,
}

pub fn channel_plans(d: &MemoryParams) -> Vec<ChannelPlan> {
    d.as_slice()
        .iter()
        .map(|&x| {
            let (integration, stationary_d) = integration_order(x);
            ChannelPlan {
                integration,
                stationary_d,
            }
        })
        .collect()
}

/// Draws one panel. Bit-identical for identical specs.
pub fn simulate_arfima(spec: &ArfimaSpec) -> Result<TimeSeriesPanel> {
    spec.validate()?;
    let p = spec.d.len();
    let plans = channel_plans(&spec.d);
    let extra = plans
        .iter()
        .map(|pl| (-pl.integration).max(0) as usize)
        .max()
        .unwrap_or(0);
    let kept = spec.burn_in + spec.n + extra;
    let trunc = spec.truncation;
    let total = kept + trunc - 1;

    let chol = spec.omega.cholesky();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut innovations = vec![vec![0.0; total]; p];
    let mut z = vec![0.0; p];
    for t in 0..total {
        for zi in z.iter_mut() {
            *zi = rng.sample(StandardNormal);
        }
        for (row, series) in innovations.iter_mut().enumerate() {
            series[t] = (0..=row).map(|c| chol[(row, c)] * z[c]).sum();
        }
    }

    let mut planner = FftPlanner::<f64>::new();
    let mut channels = Vec::with_capacity(p);
    for (c, (eps, plan)) in innovations.iter().zip(&plans).enumerate() {
        let mut x = if plan.stationary_d == 0.0 {
            eps[trunc - 1..].to_vec()
        } else {
            let weights = frac_diff_coeffs(plan.stationary_d, trunc);
            valid_convolution(&mut planner, &weights, eps)
        };
        if let Some(phi) = spec.ar1.as_ref().map(|v| v[c]) {
            for t in 1..x.len() {
                x[t] += phi * x[t - 1];
            }
        }
        let x = &x[spec.burn_in..];
        let mut x = x.to_vec();
        if plan.integration >= 0 {
            x.truncate(spec.n);
            for _ in 0..plan.integration {
                let mut acc = 0.0;
                for v in x.iter_mut() {
                    acc += *v;
                    *v = acc;
                }
            }
        } else {
            for _ in 0..(-plan.integration) {
                x = x.windows(2).map(|w| w[1] - w[0]).collect();
            }
            x.truncate(spec.n);
        }
        channels.push(x);
    }
    TimeSeriesPanel::from_channels(channels)
}

/// `y_t = sum_{k < len(w)} w_k e_{t + len(w) - 1 - k}` for every `t` where the
/// window fits inside `e`.
fn valid_convolution(planner: &mut FftPlanner<f64>, w: &[f64], e: &[f64]) -> Vec<f64> {
    let full = w.len() + e.len() - 1;
    let size = full.next_power_of_two();
    let fft = planner.plan_fft_forward(size);
    let ifft = planner.plan_fft_inverse(size);
    let mut a: Vec<Complex64> = w.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    a.resize(size, Complex64::default());
    let mut b: Vec<Complex64> = e.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    b.resize(size, Complex64::default());
    fft.process(&mut a);
    fft.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    ifft.process(&mut a);
    let scale = 1.0 / size as f64;
    a[w.len() - 1..e.len()]
        .iter()
        .map(|c| c.re * scale)
        .collect()
}
