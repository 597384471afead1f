use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{MwwError, Result};
use crate::lrd::{ArfimaSpec, LongRunCov, MemoryParams};
use crate::mww::EstimationConfig;
use crate::wavelet::WaveletSpec;

fn default_name() -> String {
    "scenario".into()
}
fn default_m() -> usize {
    4
}
fn default_j0() -> usize {
    1
}
fn default_reps() -> usize {
    200
}
fn default_seed() -> u64 {
    1
}
fn default_true() -> bool {
    true
}

/// One Monte-Carlo design: an ARFIMA(0,d,0) template, the estimation scales
/// and the replication plan.
///
/// The text form is TOML:
///
/// ```toml
/// name = "stationary"
/// d = [0.2, 0.2]
/// rho = 0.4          # or: omega = [[1.0, 0.4], [0.4, 1.0]]
/// N = 512
/// M = 4
/// j0 = 1
/// j1 = 9             # optional; clamped to the coarsest usable scale
/// reps = 1000
/// seed = 7
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "default_name")]
    pub name: String,
    pub d: Vec<f64>,
    /// Common off-diagonal correlation with unit variances.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    /// Full long-run covariance, row by row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<Vec<f64>>>,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M", default = "default_m")]
    pub m: usize,
    #[serde(default = "default_j0")]
    pub j0: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j1: Option<usize>,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// MA truncation per channel; defaults to `10 N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    /// Also fit each channel on its own, for the M/U ratio.
    #[serde(default = "default_true")]
    pub univariate: bool,
    /// Keep per-replication estimates in the report.
    #[serde(default)]
    pub keep_raw: bool,
}

impl Scenario {
    pub fn new(d: Vec<f64>, rho: f64, n: usize) -> Self {
        Self {
            name: default_name(),
            d,
            rho: Some(rho),
            omega: None,
            n,
            m: default_m(),
            j0: default_j0(),
            j1: None,
            reps: default_reps(),
            seed: default_seed(),
            truncation: None,
            burn_in: None,
            univariate: true,
            keep_raw: false,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let s: Scenario =
            toml::from_str(text).map_err(|e| MwwError::Config(format!("scenario: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MwwError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn channels(&self) -> usize {
        self.d.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(MwwError::Config("reps must be at least 1".into()));
        }
        self.wavelet()?;
        self.long_run_cov()?;
        self.arfima_template()?.validate()?;
        self.estimation_config().validate()
    }

    pub fn wavelet(&self) -> Result<WaveletSpec> {
        WaveletSpec::daubechies(self.m)
    }

    pub fn long_run_cov(&self) -> Result<LongRunCov> {
        let p = self.d.len();
        match (&self.rho, &self.omega) {
            (Some(_), Some(_)) => Err(MwwError::Config(
                "give either rho or omega, not both".into(),
            )),
            (Some(r), None) => LongRunCov::equicorrelated(p, *r),
            (None, Some(rows)) => {
                if rows.len() != p || rows.iter().any(|r| r.len() != p) {
                    return Err(MwwError::Dimension(format!("omega must be {p}x{p}")));
                }
                LongRunCov::new(DMatrix::from_fn(p, p, |i, j| rows[i][j]))
            }
            (None, None) => Ok(LongRunCov::identity(p)),
        }
    }

    /// Simulation template; the seed is replaced per replication.
    pub fn arfima_template(&self) -> Result<ArfimaSpec> {
        let mut spec = ArfimaSpec::new(
            MemoryParams::new(self.d.clone())?,
            self.long_run_cov()?,
            self.n,
            self.seed,
        )
        .with_moment_bound(self.m);
        if let Some(t) = self.truncation {
            spec.truncation = t;
        }
        if let Some(b) = self.burn_in {
            spec.burn_in = b;
        }
        Ok(spec)
    }

    pub fn estimation_config(&self) -> EstimationConfig {
        EstimationConfig::default().with_scales(self.j0, self.j1)
    }

    /// The same design at a different sample size.
    pub fn with_len(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }
}
