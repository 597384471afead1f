//! Squared Fourier modulus of the mother wavelet and the scale-free
//! integrals `K(delta)` and `K_j` built on it.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use super::filters::WaveletSpec;
use super::quadrature::{adaptive_partition, kronrod_nodes};
use crate::error::{MwwError, Result};

/// `|m0(w)|^2` with `m0(w) = 2^-1/2 sum_k h_k e^{-ikw}`.
///
/// The taps are deflated as `h(z) = (1 + z)^M q(z)` so that
/// `|m0(w)|^2 = (4 cos^2(w/2))^M |q(e^{-iw})|^2 / 2`; the order-`M` zero at
/// `w = pi` is then carried by the cosine factor instead of by cancellation.
#[derive(Debug, Clone)]
pub struct SquaredGain {
    moments: i32,
    quotient: Vec<f64>,
}

impl SquaredGain {
    /// `low_pass` must have `2M` taps with an order-`M` root at `z = -1`.
    pub fn new(low_pass: &[f64]) -> Self {
        let moments = low_pass.len() / 2;
        let mut poly = low_pass.to_vec();
        for _ in 0..moments {
            // Synthetic division by (z + 1), highest degree first.
            let n = poly.len();
            let mut q = vec![0.0; n - 1];
            let mut carry = 0.0;
            for k in (1..n).rev() {
                carry = poly[k] - carry;
                q[k - 1] = carry;
            }
            poly = q;
        }
        Self {
            moments: moments as i32,
            quotient: poly,
        }
    }

    fn quotient_sq(&self, w: f64) -> f64 {
        let (s, c) = w.sin_cos();
        let (mut re, mut im) = (0.0, 0.0);
        for &h in self.quotient.iter().rev() {
            let nre = re * c + im * s + h;
            let nim = im * c - re * s;
            re = nre;
            im = nim;
        }
        re * re + im * im
    }

    /// Low-pass squared transfer function, `|m0(w)|^2`.
    pub fn low(&self, w: f64) -> f64 {
        let c = (0.5 * w).cos();
        0.5 * (4.0 * c * c).powi(self.moments) * self.quotient_sq(w)
    }

    /// High-pass squared transfer function, `|m0(w + pi)|^2`.
    pub fn high(&self, w: f64) -> f64 {
        let s = (0.5 * w).sin();
        0.5 * (4.0 * s * s).powi(self.moments) * self.quotient_sq(w + PI)
    }

    /// `|psi_hat(lambda)|^2 = |m1(lambda/2)|^2 prod_{i=2}^{depth} |m0(lambda/2^i)|^2`.
    pub fn psi_hat_sq(&self, lambda: f64, depth: usize) -> f64 {
        let mut w = 0.5 * lambda;
        let mut value = self.high(w);
        for _ in 2..=depth {
            if value == 0.0 {
                break;
            }
            w *= 0.5;
            value *= self.low(w);
        }
        value
    }
}

/// `|psi_hat(lambda)|^2` for the Daubechies wavelet of `spec`, with the
/// infinite cascade product truncated at `spec.cascade_depth` factors.
pub fn psi_hat_sq(lambda: f64, spec: &WaveletSpec) -> f64 {
    SquaredGain::new(&spec.filters().low).psi_hat_sq(lambda, spec.cascade_depth.max(2))
}

#[derive(Debug, Clone, Copy)]
struct Node {
    lambda: f64,
    ln_lambda: f64,
    /// Quadrature weight times `|psi_hat|^2`.
    mass: f64,
}

/// A frozen quadrature rule for `int_0^inf lambda^-delta g(lambda) |psi_hat|^2`.
///
/// The half-line is cut into dyadic octaves ending at `max_frequency`; each
/// octave is refined adaptively with G7/K15 panels. Below the first octave
/// the leading behavior `c lambda^(2M)` is integrated in closed form, and the
/// mass beyond `max_frequency` is extrapolated from the geometric decay of the
/// last two octaves.
#[derive(Debug, Clone)]
pub struct PsiSpectrum {
    moments: usize,
    domain: (f64, f64),
    near_zero_edge: f64,
    near_zero_coeff: f64,
    nodes: Vec<Node>,
    last_octave: std::ops::Range<usize>,
    decay_ratio: f64,
}

const OCTAVES: usize = 24;

impl PsiSpectrum {
    pub fn build(spec: &WaveletSpec) -> Self {
        let gain = SquaredGain::new(&spec.filters().low);
        let depth = spec.cascade_depth.max(2);
        let m = spec.vanishing_moments;
        let (lo, hi) = spec.k_domain();
        let psi2 = |x: f64| gain.psi_hat_sq(x, depth);
        let envelope = |x: f64| psi2(x) * (x.powf(-lo) + x.powf(-hi));
        let top = spec.quadrature.max_frequency;
        let width = PI / m.div_ceil(2) as f64;

        let mut nodes = Vec::new();
        let mut octave_starts = Vec::with_capacity(OCTAVES + 1);
        for k in (0..OCTAVES).rev() {
            let a = top / 2f64.powi(k as i32 + 1);
            let b = top / 2f64.powi(k as i32);
            octave_starts.push(nodes.len());
            let panels = adaptive_partition(
                &envelope,
                a,
                b,
                width.min(b - a),
                spec.quadrature.tolerance,
                20,
            );
            for (pa, pb) in panels {
                for (x, w) in kronrod_nodes(pa, pb) {
                    nodes.push(Node {
                        lambda: x,
                        ln_lambda: x.ln(),
                        mass: w * psi2(x),
                    });
                }
            }
        }
        octave_starts.push(nodes.len());
        let last_octave = octave_starts[OCTAVES - 1]..octave_starts[OCTAVES];
        let previous = octave_starts[OCTAVES - 2]..octave_starts[OCTAVES - 1];
        let mass =
            |r: &std::ops::Range<usize>| nodes[r.clone()].iter().map(|n| n.mass).sum::<f64>();
        let decay_ratio = (mass(&last_octave) / mass(&previous)).clamp(0.0, 1.0);

        let edge = top / 2f64.powi(OCTAVES as i32);
        let near_zero_coeff = psi2(edge) / edge.powi(2 * m as i32);
        Self {
            moments: m,
            domain: (lo, hi),
            near_zero_edge: edge,
            near_zero_coeff,
            nodes,
            last_octave,
            decay_ratio,
        }
    }

    /// Number of stored quadrature nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn check(&self, delta: f64) -> Result<()> {
        let (lo, hi) = self.domain;
        if !(delta > lo && delta < hi) || !delta.is_finite() {
            return Err(MwwError::Domain {
                value: delta,
                lower: lo,
                upper: hi,
            });
        }
        Ok(())
    }

    /// `int_R |lambda|^-delta g(lambda) |psi_hat(lambda)|^2 d lambda` for an even `g`
    /// with `g(0) = 1`.
    fn weighted<G: Fn(f64) -> f64>(&self, delta: f64, g: G) -> f64 {
        let power = (2 * self.moments) as f64 - delta + 1.0;
        let near_zero = self.near_zero_coeff * self.near_zero_edge.powf(power) / power;
        let mut body = 0.0;
        let mut last = 0.0;
        for (i, n) in self.nodes.iter().enumerate() {
            let v = n.mass * (-delta * n.ln_lambda).exp() * g(n.lambda);
            body += v;
            if self.last_octave.contains(&i) {
                last += v;
            }
        }
        let r = self.decay_ratio * 2f64.powf(-delta);
        let tail = if r < 1.0 {
            last * r / (1.0 - r)
        } else {
            f64::INFINITY
        };
        2.0 * (near_zero + body + tail)
    }

    /// `K(delta) = int_R |lambda|^-delta |psi_hat(lambda)|^2 d lambda`.
    pub fn k(&self, delta: f64) -> Result<f64> {
        self.check(delta)?;
        Ok(self.weighted(delta, |_| 1.0))
    }

    /// Second-order variant with the factor `cos(2^-j lambda (d_l - d_m) / 2)`.
    pub fn k_j(&self, j: usize, d_l: f64, d_m: f64) -> Result<f64> {
        let delta = d_l + d_m;
        self.check(delta)?;
        if d_l == d_m {
            return Ok(self.weighted(delta, |_| 1.0));
        }
        let freq = 2f64.powi(-(j as i32)) * (d_l - d_m) / 2.0;
        Ok(self.weighted(delta, |x| (freq * x).cos()))
    }
}

type SpecKey = (usize, usize, u64, u64);

fn cache() -> &'static Mutex<HashMap<SpecKey, Arc<PsiSpectrum>>> {
    static CACHE: OnceLock<Mutex<HashMap<SpecKey, Arc<PsiSpectrum>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared, lazily built quadrature rule for `spec`.
pub fn psi_spectrum(spec: &WaveletSpec) -> Arc<PsiSpectrum> {
    let key = (
        spec.vanishing_moments,
        spec.cascade_depth,
        spec.quadrature.max_frequency.to_bits(),
        spec.quadrature.tolerance.to_bits(),
    );
    let mut guard = cache().lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(key)
        .or_insert_with(|| Arc::new(PsiSpectrum::build(spec)))
        .clone()
}

/// `K(delta)` for `delta` in `(-alpha, M)`.
pub fn k_integral(delta: f64, spec: &WaveletSpec) -> Result<f64> {
    psi_spectrum(spec).k(delta)
}

/// `K_j(d_l, d_m)`, which tends to `K(d_l + d_m)` as `j` grows.
pub fn k_j_integral(j: usize, d_l: f64, d_m: f64, spec: &WaveletSpec) -> Result<f64> {
    psi_spectrum(spec).k_j(j, d_l, d_m)
}
