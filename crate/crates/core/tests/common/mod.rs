#![allow(dead_code)]

use mww_core::lrd::{simulate_arfima, ArfimaSpec, LongRunCov, MemoryParams};
use mww_core::mww::Scalogram;
use mww_core::wavelet::WaveletSpec;
use mww_core::TimeSeriesPanel;
use nalgebra::DMatrix;

pub fn spec4() -> WaveletSpec {
    WaveletSpec::daubechies(4).unwrap()
}

/// Upsamples `f` by `factor` (inserting zeros) and convolves with `a`.
pub fn conv_upsampled(a: &[f64], f: &[f64], factor: usize) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + (f.len() - 1) * factor];
    for (t, &ft) in f.iter().enumerate() {
        for (i, &ai) in a.iter().enumerate() {
            out[i + t * factor] += ft * ai;
        }
    }
    out
}

/// Equivalent scale-`j` detail filter built from the two-scale relations.
pub fn equivalent_filter(spec: &WaveletSpec, j: usize) -> Vec<f64> {
    let f = spec.filters();
    let mut approx = vec![1.0];
    for level in 0..j - 1 {
        approx = conv_upsampled(&approx, &f.low, 1 << level);
    }
    conv_upsampled(&approx, &f.high, 1 << (j - 1))
}

/// `W_{j,k} = sum_i h_j[i] x[2^j k + i]` for every fully supported `k`.
pub fn brute_force(x: &[f64], spec: &WaveletSpec, j: usize) -> Vec<f64> {
    let h = equivalent_filter(spec, j);
    let step = 1 << j;
    let mut out = Vec::new();
    let mut k = 0;
    while k * step + h.len() <= x.len() {
        out.push(
            h.iter()
                .enumerate()
                .map(|(i, hi)| hi * x[k * step + i])
                .sum(),
        );
        k += 1;
    }
    out
}

pub fn series(len: usize, seed: u64) -> Vec<f64> {
    // Small deterministic generator; values only need to be irregular.
    let mut s = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    (0..len)
        .map(|_| {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
        .collect()
}

pub struct Lcg(pub u64);

impl Lcg {
    pub fn uniform(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    pub fn normal(&mut self) -> f64 {
        let (u, v) = (self.uniform(), self.uniform());
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    }
}

/// Scalogram of random coefficient vectors whose variance grows like 2^{2 j d}.
pub fn random_scalogram(p: usize, seed: u64) -> (Scalogram, Vec<Vec<Vec<f64>>>) {
    let mut rng = Lcg(seed);
    let counts = [40usize, 20, 10, 5];
    let d: Vec<f64> = (0..p).map(|_| rng.uniform() - 0.3).collect();
    let mut mats = Vec::new();
    let mut coeffs = Vec::new();
    for (i, &n) in counts.iter().enumerate() {
        let j = i + 1;
        let mut m = DMatrix::zeros(p, p);
        let mut level = Vec::new();
        for _ in 0..n {
            let common = rng.normal();
            let w: Vec<f64> = (0..p)
                .map(|l| 2f64.powf(j as f64 * d[l]) * (0.6 * common + 0.8 * rng.normal()))
                .collect();
            for a in 0..p {
                for b in 0..p {
                    m[(a, b)] += w[a] * w[b];
                }
            }
            level.push(w);
        }
        mats.push(m);
        coeffs.push(level);
    }
    (
        Scalogram::from_parts(1, mats, counts.to_vec(), spec4()).unwrap(),
        coeffs,
    )
}

pub fn random_d(p: usize, rng: &mut Lcg) -> Vec<f64> {
    (0..p).map(|_| 2.0 * rng.uniform() - 0.8).collect()
}

/// Whittle criterion written as the sum over individual coefficient vectors.
pub fn likelihood_sum_over_k(
    coeffs: &[Vec<Vec<f64>>],
    counts: &[usize],
    g: &DMatrix<f64>,
    d: &[f64],
) -> f64 {
    let p = d.len();
    let n: usize = counts.iter().sum();
    let mut total = 0.0;
    for (i, level) in coeffs.iter().enumerate() {
        let j = (i + 1) as f64;
        let lam = DMatrix::from_fn(p, p, |a, b| if a == b { 2f64.powf(j * d[a]) } else { 0.0 });
        let s = &lam * g * &lam;
        let inv = s.clone().try_inverse().unwrap();
        total += counts[i] as f64 * s.determinant().ln();
        for w in level {
            let v = DMatrix::from_column_slice(p, 1, w);
            total += (v.transpose() * &inv * &v)[(0, 0)];
        }
    }
    total / n as f64
}

pub fn simulated_panel(d: &[f64], rho: f64, n: usize, seed: u64) -> TimeSeriesPanel {
    let omega = LongRunCov::equicorrelated(d.len(), rho).unwrap();
    simulate_arfima(&ArfimaSpec::new(MemoryParams(d.to_vec()), omega, n, seed)).unwrap()
}
