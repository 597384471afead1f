//! Seeded Monte-Carlo experiments: simulate, estimate, aggregate.

pub mod report;
pub mod scenario;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{MwwError, Result};
use crate::lrd::{derive_seed, simulate_arfima, ArfimaSpec};
use crate::mww::{
    estimate_panel, estimate_univariate_each, j0_from_holder, resolve_scales, scalogram,
};
use crate::wavelet::{dwt_pyramid, WaveletSpec};

pub use report::{d_name, mean_std, omega_name, rho_name, MCReport, QuantityStats, RepOutcome};
pub use scenario::Scenario;

/// Quantity names and true values, in report order.
fn targets(s: &Scenario) -> Result<Vec<(String, f64)>> {
    let p = s.channels();
    let omega = s.long_run_cov()?;
    let corr = omega.correlation();
    let mut out: Vec<(String, f64)> = (0..p).map(|l| (d_name(l), s.d[l])).collect();
    for l in 0..p {
        for m in l..p {
            out.push((omega_name(l, m), omega.matrix()[(l, m)]));
        }
    }
    for l in 0..p {
        for m in l + 1..p {
            out.push((rho_name(l, m), corr[(l, m)]));
        }
    }
    Ok(out)
}

fn run_replication(
    s: &Scenario,
    template: &ArfimaSpec,
    spec: &WaveletSpec,
    index: usize,
) -> RepOutcome {
    let seed = derive_seed(s.seed, index as u64);
    let config = s.estimation_config();
    let p = s.channels();
    let attempt = || -> Result<(Vec<f64>, Option<Vec<f64>>, bool)> {
        let panel = simulate_arfima(&template.clone().with_seed(seed))?;
        let est = estimate_panel(&panel, spec, &config)?;
        let mut values = est.d.0.clone();
        for l in 0..p {
            for m in l..p {
                values.push(est.omega[(l, m)]);
            }
        }
        for l in 0..p {
            for m in l + 1..p {
                values.push(est.correlation[(l, m)]);
            }
        }
        let mut converged = est.diagnostics.converged;
        let uni = if s.univariate {
            let u = estimate_univariate_each(&panel, spec, &config)?;
            converged &= u.iter().all(|e| e.converged);
            Some(u.into_iter().map(|e| e.d.0[0]).collect())
        } else {
            None
        };
        Ok((values, uni, converged))
    };
    match attempt() {
        Ok((values, uni, converged)) => {
            let failure = if !converged {
                Some("optimizer did not converge".to_string())
            } else if values.iter().any(|v| !v.is_finite()) {
                Some("non-finite estimate".to_string())
            } else {
                None
            };
            RepOutcome {
                index,
                seed,
                values,
                univariate_d: uni,
                failure,
            }
        }
        Err(e) => RepOutcome {
            index,
            seed,
            values: Vec::new(),
            univariate_d: None,
            failure: Some(e.to_string()),
        },
    }
}

/// Runs every replication of the scenario in parallel and aggregates in
/// replication order, so the report does not depend on thread scheduling.
pub fn run_scenario(s: &Scenario) -> Result<MCReport> {
    s.validate()?;
    let spec = s.wavelet()?;
    let template = s.arfima_template()?;
    let scales = resolve_scales(s.n, s.channels(), &spec, &s.estimation_config())?;
    let names = targets(s)?;

    let outcomes: Vec<RepOutcome> = (0..s.reps)
        .into_par_iter()
        .map(|i| run_replication(s, &template, &spec, i))
        .collect();
    let ok: Vec<&RepOutcome> = outcomes.iter().filter(|o| o.failure.is_none()).collect();
    if ok.is_empty() {
        return Err(MwwError::AllReplicationsFailed(s.reps));
    }

    let mut quantities: Vec<QuantityStats> = names
        .iter()
        .enumerate()
        .map(|(q, (name, truth))| {
            let samples: Vec<f64> = ok.iter().map(|o| o.values[q]).collect();
            QuantityStats::from_samples(name.clone(), *truth, &samples)
        })
        .collect();
    if s.univariate {
        for (l, q) in quantities.iter_mut().enumerate().take(s.channels()) {
            let samples: Vec<f64> = ok
                .iter()
                .map(|o| o.univariate_d.as_ref().expect("univariate fit")[l])
                .collect();
            let uni = QuantityStats::from_samples("", s.d[l], &samples);
            q.univariate_rmse = Some(uni.rmse);
            q.ratio_mu = (uni.rmse > 0.0).then(|| q.rmse / uni.rmse);
        }
    }

    Ok(MCReport {
        scenario: s.clone(),
        scales,
        version: env!("CARGO_PKG_VERSION").to_string(),
        replications: s.reps,
        failures: outcomes.len() - ok.len(),
        quantities,
        raw: s.keep_raw.then_some(outcomes),
    })
}

/// Per-channel ratio of multivariate to univariate `d` RMSE on shared panels.
pub fn ratio_m_u(s: &Scenario) -> Result<Vec<f64>> {
    let s = Scenario {
        univariate: true,
        ..s.clone()
    };
    let report = run_scenario(&s)?;
    report
        .d_stats()
        .iter()
        .enumerate()
        .map(|(l, q)| q.ratio_mu.ok_or(MwwError::UndefinedRatio(l)))
        .collect()
}

/// How `j0` follows the sample size in [`rate_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum J0Policy {
    /// Keep the scenario's `j0` for every `N`.
    Fixed,
    /// `2^{j0} = N^{1/(1 + 2 beta)}`, rounded.
    Holder { beta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub n: usize,
    pub j0: usize,
    pub j1: usize,
    /// Per-channel `d` RMSE.
    pub rmse: Vec<f64>,
    pub mean_rmse: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    pub rows: Vec<RateRow>,
    /// Least-squares slope of `log(mean RMSE)` on `log(N)`; absent for one row.
    pub slope: Option<f64>,
    /// `mean_rmse[i+1] / mean_rmse[i]`.
    pub ratios: Vec<f64>,
    /// True when the mean RMSE strictly decreases along the table.
    pub monotone: bool,
}

/// RMSE of `d_hat` across increasing sample sizes.
pub fn rate_check(base: &Scenario, n_values: &[usize], policy: J0Policy) -> Result<RateTable> {
    if n_values.is_empty() || n_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(MwwError::Config(
            "N values must be non-empty and increasing".into(),
        ));
    }
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let mut s = base.with_len(n);
        s.univariate = false;
        s.keep_raw = false;
        if let J0Policy::Holder { beta } = policy {
            s.j0 = j0_from_holder(n, beta);
        }
        let r = run_scenario(&s)?;
        let rmse: Vec<f64> = r.d_stats().iter().map(|q| q.rmse).collect();
        rows.push(RateRow {
            n,
            j0: r.scales.j0,
            j1: r.scales.j1,
            mean_rmse: rmse.iter().sum::<f64>() / rmse.len() as f64,
            rmse,
            failures: r.failures,
        });
    }
    let ratios: Vec<f64> = rows
        .windows(2)
        .map(|w| w[1].mean_rmse / w[0].mean_rmse)
        .collect();
    let slope = (rows.len() > 1).then(|| {
        let x: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
        let y: Vec<f64> = rows.iter().map(|r| r.mean_rmse.ln()).collect();
        let (mx, my) = (mean_std(&x).0, mean_std(&y).0);
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
        sxy / sxx
    });
    Ok(RateTable {
        monotone: ratios.iter().all(|&r| r < 1.0),
        rows,
        slope,
        ratios,
    })
}

/// Monte-Carlo moments of the normalized scalogram `I(j)/n_j` at one scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleMoments {
    pub j: usize,
    pub count: usize,
    pub mean: DMatrix<f64>,
    /// Standard error of `mean` across replications.
    pub std_err: DMatrix<f64>,
}

/// Averages `I(j)/n_j` over independent simulated panels for `j = 1..=j_max`.
pub fn wavelet_cov_mc(
    template: &ArfimaSpec,
    spec: &WaveletSpec,
    j_max: usize,
    reps: usize,
    root_seed: u64,
) -> Result<Vec<ScaleMoments>> {
    if reps < 2 {
        return Err(MwwError::Config("need at least two replications".into()));
    }
    let draws: Vec<Vec<DMatrix<f64>>> = (0..reps)
        .into_par_iter()
        .map(|i| -> Result<Vec<DMatrix<f64>>> {
            let panel =
                simulate_arfima(&template.clone().with_seed(derive_seed(root_seed, i as u64)))?;
            let pyr = dwt_pyramid(&panel, spec, j_max)?;
            let scal = scalogram(&pyr, 1, j_max)?;
            Ok((1..=j_max)
                .map(|j| scal.matrix(j) / scal.count(j) as f64)
                .collect())
        })
        .collect::<Result<_>>()?;
    let p = template.d.len();
    Ok((1..=j_max)
        .map(|j| {
            let mut mean = DMatrix::zeros(p, p);
            let mut std_err = DMatrix::zeros(p, p);
            for a in 0..p {
                for b in 0..p {
                    let x: Vec<f64> = draws.iter().map(|d| d[j - 1][(a, b)]).collect();
                    let (m, sd) = mean_std(&x);
                    mean[(a, b)] = m;
                    std_err[(a, b)] =
                        sd * (reps as f64 / (reps as f64 - 1.0)).sqrt() / (reps as f64).sqrt();
                }
            }
            ScaleMoments {
                j,
                count: crate::wavelet::coefficient_count(template.n, spec, j),
                mean,
                std_err,
            }
        })
        .collect())
}
