use std::f64::consts::{LN_2, PI};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::objective::{g_hat, objective_gradient, objective_r};
use super::optimize::{nelder_mead, SimplexOptions};
use super::scalogram::{scalogram, Scalogram};
use crate::error::{MwwError, Result};
use crate::lrd::MemoryParams;
use crate::panel::TimeSeriesPanel;
use crate::wavelet::{coefficient_count, dwt_pyramid, psi_spectrum, WaveletPyramid, WaveletSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimationConfig {
    pub j0: usize,
    /// Coarsest scale; `None` selects the largest scale with at least `p`
    /// coefficients. Larger requests are clamped to that scale.
    pub j1: Option<usize>,
    /// Simplex diameter at which the search stops.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub multi_starts: usize,
    /// Open lower end of the search box.
    pub d_lower: f64,
    /// Closed upper end of the search box; `None` uses `M`.
    pub d_upper: Option<f64>,
    /// Pairs with `|cos(pi (d_l - d_m) / 2)|` below this are flagged.
    pub degeneracy_threshold: f64,
}

impl Default for EstimationConfig {
    fn default() -> Self {
        Self {
            j0: 1,
            j1: None,
            tolerance: 1e-7,
            max_iterations: 2000,
            multi_starts: 5,
            d_lower: -2.0,
            d_upper: None,
            degeneracy_threshold: 0.1,
        }
    }
}

impl EstimationConfig {
    pub fn with_scales(mut self, j0: usize, j1: Option<usize>) -> Self {
        self.j0 = j0;
        self.j1 = j1;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.j0 == 0 {
            return Err(MwwError::Config("j0 must be at least 1".into()));
        }
        if let Some(j1) = self.j1 {
            if j1 <= self.j0 {
                return Err(MwwError::Config(format!(
                    "j0={} must be below j1={j1}; a single scale leaves d unidentified",
                    self.j0
                )));
            }
        }
        if self.tolerance.is_nan()
            || self.tolerance <= 0.0
            || self.max_iterations == 0
            || self.multi_starts == 0
        {
            return Err(MwwError::Config(
                "tolerance, iteration cap and start count must be positive".into(),
            ));
        }
        if !self.d_lower.is_finite()
            || self
                .d_upper
                .is_some_and(|u| u.is_nan() || u <= self.d_lower)
        {
            return Err(MwwError::Config("empty search box".into()));
        }
        if self.degeneracy_threshold.is_nan() || self.degeneracy_threshold < 0.0 {
            return Err(MwwError::Config("degeneracy threshold must be >= 0".into()));
        }
        Ok(())
    }

    fn upper(&self, spec: &WaveletSpec) -> f64 {
        self.d_upper.unwrap_or(spec.vanishing_moments as f64)
    }
}

/// `j0` from `2^{j0} = N^{1/(1+2 beta)}`, rounded to the nearest scale and at least 1.
pub fn j0_from_holder(n: usize, beta: f64) -> usize {
    let j = (n as f64).log2() / (1.0 + 2.0 * beta);
    (j.round() as usize).max(1)
}

/// Scale range actually used for a series of length `n` with `p` channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleSelection {
    pub j0: usize,
    pub j1: usize,
    /// `j1` as requested, when it differs from the one used.
    pub requested_j1: Option<usize>,
}

impl ScaleSelection {
    pub fn clamped(&self) -> bool {
        self.requested_j1.is_some()
    }
}

pub fn resolve_scales(
    n: usize,
    p: usize,
    spec: &WaveletSpec,
    config: &EstimationConfig,
) -> Result<ScaleSelection> {
    config.validate()?;
    let need = p.max(1);
    let mut max_j = 0;
    while coefficient_count(n, spec, max_j + 1) >= need {
        max_j += 1;
    }
    let j1 = config.j1.map_or(max_j, |j| j.min(max_j));
    if config.j0 >= j1 {
        return Err(MwwError::ScaleRange {
            j0: config.j0,
            j1,
            reason: format!(
                "a series of length {n} supports scales up to {max_j} with M={}; need j0 < j1",
                spec.vanishing_moments
            ),
        });
    }
    Ok(ScaleSelection {
        j0: config.j0,
        j1,
        requested_j1: config.j1.filter(|&r| r != j1),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DEstimate {
    pub d: MemoryParams,
    /// `R(d_hat)`.
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Euclidean norm of the analytic gradient of `R` at `d_hat`.
    pub gradient_norm: f64,
}

/// Per-channel starting values: half the weighted least-squares slope of
/// `log2(I_ll(j)/n_j)` against `j`.
pub fn regression_start(scal: &Scalogram) -> Vec<f64> {
    (0..scal.dim())
        .map(|l| {
            let pts: Vec<(f64, f64, f64)> = scal
                .scales()
                .filter_map(|j| {
                    let v = scal.matrix(j)[(l, l)];
                    let nj = scal.count(j);
                    (v > 0.0 && nj > 0).then(|| (j as f64, (v / nj as f64).log2(), nj as f64))
                })
                .collect();
            if pts.len() < 2 {
                return 0.0;
            }
            let w: f64 = pts.iter().map(|p| p.2).sum();
            let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / w;
            let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / w;
            let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - mx).powi(2)).sum();
            let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - mx) * (p.1 - my)).sum();
            sxy / sxx / 2.0
        })
        .collect()
}

fn jitter(k: usize, p: usize) -> Vec<f64> {
    let amp = 0.25 * (1 + (k - 1) / 4) as f64;
    let sign = if (k - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let alternating = (k - 1) % 4 >= 2;
    (0..p)
        .map(|i| {
            if alternating && i % 2 == 1 {
                -sign * amp
            } else {
                sign * amp
            }
        })
        .collect()
}

/// Minimizes `R(d)` with a multi-start simplex search inside the configured box.
pub fn estimate_d(scal: &Scalogram, config: &EstimationConfig) -> Result<DEstimate> {
    config.validate()?;
    let p = scal.dim();
    if scal.j0() == scal.j1() {
        return Err(MwwError::Config(
            "a single scale makes R(d) flat; use j0 < j1".into(),
        ));
    }
    if scal.total() < p {
        return Err(MwwError::Config(format!(
            "{} coefficients cannot support {p} channels",
            scal.total()
        )));
    }
    let lower = config.d_lower;
    let upper = config.upper(scal.spec());
    let margin = 0.05f64.min((upper - lower) / 4.0);
    let clamp = |x: f64| x.clamp(lower + margin, upper - margin);

    let base: Vec<f64> = regression_start(scal).into_iter().map(clamp).collect();
    let objective = |d: &[f64]| objective_r(scal, d);
    let opts = SimplexOptions {
        step: 0.1,
        x_tol: config.tolerance,
        max_iter: config.max_iterations,
        ..Default::default()
    };

    let mut best: Option<super::optimize::SimplexResult> = None;
    let mut iterations = 0;
    for k in 0..config.multi_starts {
        let start: Vec<f64> = if k == 0 {
            base.clone()
        } else {
            base.iter()
                .zip(jitter(k, p))
                .map(|(b, j)| clamp(b + j))
                .collect()
        };
        if !objective(&start).is_finite() {
            continue;
        }
        let r = nelder_mead(objective, &start, lower, upper, &opts);
        iterations += r.iterations;
        if best.as_ref().is_none_or(|b| r.value < b.value) {
            best = Some(r);
        }
    }
    let Some(first) = best else {
        return Err(MwwError::Singular);
    };
    // Restarting from the best point rebuilds a full-size simplex, guarding
    // against premature collapse.
    let polish = nelder_mead(
        objective,
        &first.x,
        lower,
        upper,
        &SimplexOptions { step: 0.02, ..opts },
    );
    iterations += polish.iterations;
    let winner = if polish.value <= first.value {
        polish
    } else {
        super::optimize::SimplexResult {
            converged: polish.converged,
            ..first
        }
    };
    let gradient_norm = objective_gradient(scal, &winner.x)
        .map(|g| g.iter().map(|x| x * x).sum::<f64>().sqrt())
        .unwrap_or(f64::NAN);
    Ok(DEstimate {
        d: MemoryParams(winner.x),
        objective: winner.value,
        iterations,
        converged: winner.converged,
        gradient_norm,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairIssue {
    /// `|cos(pi (d_l - d_m) / 2)|` is below the threshold; `Omega_lm` may be
    /// strongly biased.
    NearDegenerate { cos: f64 },
    /// The cosine factor is exactly zero; `Omega_lm` is not defined.
    Undefined,
    /// A diagonal entry of `Omega_hat` is not positive, so the correlation
    /// cannot be formed.
    InvalidCorrelation,
    /// `d_l + d_m` lies outside the domain of `K`; `Omega_lm` is not computed.
    OutsideDomain { delta: f64 },
    /// `|rho_lm| > 1`; reported unclamped.
    CorrelationOutOfRange { value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairFlag {
    pub l: usize,
    pub m: usize,
    pub issue: PairIssue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmegaEstimate {
    pub g_hat: DMatrix<f64>,
    pub omega: DMatrix<f64>,
    pub correlation: DMatrix<f64>,
    pub flags: Vec<PairFlag>,
}

/// Phase-corrected long-run covariance:
/// `Omega_lm = 2 pi G_lm(d) / (cos(pi (d_l - d_m) / 2) K(d_l + d_m))`.
pub fn estimate_omega(
    scal: &Scalogram,
    d: &MemoryParams,
    spec: &WaveletSpec,
    config: &EstimationConfig,
) -> Result<OmegaEstimate> {
    let p = scal.dim();
    let g = g_hat(scal, d.as_slice())?;
    let psi = psi_spectrum(spec);
    let d = d.as_slice();
    let mut omega = DMatrix::zeros(p, p);
    let mut flags = Vec::new();
    for l in 0..p {
        for m in l..p {
            let c = (PI * (d[l] - d[m]) / 2.0).cos();
            let k = psi.k(d[l] + d[m]);
            let v = if let Err(MwwError::Domain { value, .. }) = k {
                flags.push(PairFlag {
                    l,
                    m,
                    issue: PairIssue::OutsideDomain { delta: value },
                });
                f64::NAN
            } else if c == 0.0 {
                flags.push(PairFlag {
                    l,
                    m,
                    issue: PairIssue::Undefined,
                });
                f64::NAN
            } else {
                if c.abs() < config.degeneracy_threshold {
                    flags.push(PairFlag {
                        l,
                        m,
                        issue: PairIssue::NearDegenerate { cos: c },
                    });
                }
                2.0 * PI * g[(l, m)] / (c * k?)
            };
            omega[(l, m)] = v;
            omega[(m, l)] = v;
        }
    }
    let mut correlation = DMatrix::from_element(p, p, f64::NAN);
    for l in 0..p {
        for m in l..p {
            let (a, b) = (omega[(l, l)], omega[(m, m)]);
            if !(a > 0.0 && b > 0.0) {
                flags.push(PairFlag {
                    l,
                    m,
                    issue: PairIssue::InvalidCorrelation,
                });
                continue;
            }
            let r = if l == m {
                1.0
            } else {
                omega[(l, m)] / (a * b).sqrt()
            };
            if r.abs() > 1.0 {
                flags.push(PairFlag {
                    l,
                    m,
                    issue: PairIssue::CorrelationOutOfRange { value: r },
                });
            }
            correlation[(l, m)] = r;
            correlation[(m, l)] = r;
        }
    }
    Ok(OmegaEstimate {
        g_hat: g,
        omega,
        correlation,
        flags,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub scales: ScaleSelection,
    pub iterations: usize,
    pub converged: bool,
    pub gradient_norm: f64,
    pub flags: Vec<PairFlag>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MwwEstimate {
    pub d: MemoryParams,
    pub g_hat: DMatrix<f64>,
    /// Phase-corrected `Omega_hat`; not guaranteed positive definite.
    pub omega: DMatrix<f64>,
    pub correlation: DMatrix<f64>,
    pub objective: f64,
    pub diagnostics: Diagnostics,
}

/// Full pipeline on a precomputed pyramid.
pub fn estimate_pyramid(
    pyramid: &WaveletPyramid,
    config: &EstimationConfig,
) -> Result<MwwEstimate> {
    let scales = resolve_scales(
        pyramid.source_len(),
        pyramid.channels(),
        pyramid.spec(),
        config,
    )?;
    if scales.j1 > pyramid.max_scale() {
        return Err(MwwError::ScaleRange {
            j0: scales.j0,
            j1: scales.j1,
            reason: format!("pyramid only reaches scale {}", pyramid.max_scale()),
        });
    }
    let scal = scalogram(pyramid, scales.j0, scales.j1)?;
    let d = estimate_d(&scal, config)?;
    let om = estimate_omega(&scal, &d.d, pyramid.spec(), config)?;

    let mut warnings = Vec::new();
    if let Some(r) = scales.requested_j1 {
        warnings.push(format!(
            "j1={r} exceeds the coarsest usable scale; clamped to {}",
            scales.j1
        ));
    }
    if !d.converged {
        warnings.push(format!(
            "simplex search stopped after {} iterations without meeting the tolerance",
            d.iterations
        ));
    }
    for f in &om.flags {
        warnings.push(match f.issue {
            PairIssue::NearDegenerate { cos } => format!(
                "pair ({}, {}): |cos| = {:.3e} below threshold; Omega entry may be strongly biased",
                f.l,
                f.m,
                cos.abs()
            ),
            PairIssue::Undefined => format!(
                "pair ({}, {}): cosine factor is zero; Omega undefined",
                f.l, f.m
            ),
            PairIssue::OutsideDomain { delta } => format!(
                "pair ({}, {}): d_l + d_m = {delta:.4} outside the domain of K; Omega undefined",
                f.l, f.m
            ),
            PairIssue::InvalidCorrelation => {
                format!(
                    "pair ({}, {}): non-positive Omega diagonal; correlation undefined",
                    f.l, f.m
                )
            }
            PairIssue::CorrelationOutOfRange { value } => {
                format!(
                    "pair ({}, {}): correlation {value:.4} outside [-1, 1]",
                    f.l, f.m
                )
            }
        });
    }
    Ok(MwwEstimate {
        d: d.d,
        g_hat: om.g_hat,
        omega: om.omega,
        correlation: om.correlation,
        objective: d.objective,
        diagnostics: Diagnostics {
            scales,
            iterations: d.iterations,
            converged: d.converged,
            gradient_norm: d.gradient_norm,
            flags: om.flags,
            warnings,
        },
    })
}

/// Transforms the panel to the resolved coarsest scale and estimates `d`, `Omega`.
pub fn estimate_panel(
    panel: &TimeSeriesPanel,
    spec: &WaveletSpec,
    config: &EstimationConfig,
) -> Result<MwwEstimate> {
    let scales = resolve_scales(panel.len(), panel.channels(), spec, config)?;
    let pyramid = dwt_pyramid(panel, spec, scales.j1)?;
    estimate_pyramid(&pyramid, config)
}

/// Memory estimates from `p` independent univariate fits, one per channel.
pub fn estimate_univariate_each(
    panel: &TimeSeriesPanel,
    spec: &WaveletSpec,
    config: &EstimationConfig,
) -> Result<Vec<DEstimate>> {
    (0..panel.channels())
        .map(|c| {
            let single = panel.select(&[c])?;
            let scales = resolve_scales(single.len(), 1, spec, config)?;
            let pyramid = dwt_pyramid(&single, spec, scales.j1)?;
            let scal = scalogram(&pyramid, scales.j0, scales.j1)?;
            estimate_d(&scal, config)
        })
        .collect()
}

/// The per-scale penalty `2 log(2) <J>` that `R` adds per unit of `sum d`.
pub fn penalty_slope(scal: &Scalogram) -> f64 {
    2.0 * LN_2 * scal.mean_scale()
}
