use serde::{Deserialize, Serialize};

use super::scenario::Scenario;
use crate::error::{MwwError, Result};
use crate::mww::ScaleSelection;

/// Bias, spread and error of one estimated quantity across replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantityStats {
    pub quantity: String,
    pub truth: f64,
    pub mean: f64,
    pub bias: f64,
    /// Population standard deviation (divides by the replication count).
    pub std: f64,
    pub rmse: f64,
    /// Multivariate RMSE over univariate RMSE on the same panels.
    pub ratio_mu: Option<f64>,
    pub univariate_rmse: Option<f64>,
}

impl QuantityStats {
    pub fn from_samples(quantity: impl Into<String>, truth: f64, samples: &[f64]) -> Self {
        let (mean, std) = mean_std(samples);
        let bias = mean - truth;
        Self {
            quantity: quantity.into(),
            truth,
            mean,
            bias,
            std,
            rmse: bias.hypot(std),
            ratio_mu: None,
            univariate_rmse: None,
        }
    }
}

/// Mean and population standard deviation.
pub fn mean_std(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepOutcome {
    pub index: usize,
    pub seed: u64,
    /// Estimates in the order of [`MCReport::quantities`].
    pub values: Vec<f64>,
    pub univariate_d: Option<Vec<f64>>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCReport {
    pub scenario: Scenario,
    pub scales: ScaleSelection,
    pub version: String,
    pub replications: usize,
    /// Replications excluded because estimation failed or did not converge.
    pub failures: usize,
    pub quantities: Vec<QuantityStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<Vec<RepOutcome>>,
}

impl MCReport {
    pub fn get(&self, quantity: &str) -> Option<&QuantityStats> {
        self.quantities.iter().find(|q| q.quantity == quantity)
    }

    /// Per-channel statistics for `d`.
    pub fn d_stats(&self) -> Vec<&QuantityStats> {
        (0..self.scenario.channels())
            .filter_map(|l| self.get(&d_name(l)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| MwwError::Config(format!("report: {e}")))
    }

    /// CSV table preceded by `#` comment lines echoing the scenario.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# mww {} monte-carlo report\n", self.version));
        for line in self.scenario.to_toml_string().lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&format!(
            "# scales = {}..{}\n# replications = {}\n# failures = {}\n",
            self.scales.j0, self.scales.j1, self.replications, self.failures
        ));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "quantity", "truth", "mean", "bias", "std", "rmse", "ratio_mu",
        ])
        .expect("in-memory write");
        for q in &self.quantities {
            w.write_record([
                q.quantity.clone(),
                q.truth.to_string(),
                q.mean.to_string(),
                q.bias.to_string(),
                q.std.to_string(),
                q.rmse.to_string(),
                q.ratio_mu.map(|r| r.to_string()).unwrap_or_default(),
            ])
            .expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8"));
        out
    }
}

pub fn d_name(l: usize) -> String {
    format!("d[{l}]")
}

pub fn omega_name(l: usize, m: usize) -> String {
    format!("omega[{l},{m}]")
}

pub fn rho_name(l: usize, m: usize) -> String {
    format!("rho[{l},{m}]")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rmse_decomposes() {
        let q = QuantityStats::from_samples("x", 1.0, &[0.5, 1.5, 2.0, 0.9]);
        assert!((q.rmse.powi(2) - q.bias.powi(2) - q.std.powi(2)).abs() < 1e-12);
        let direct = [0.5f64, 1.5, 2.0, 0.9]
            .iter()
            .map(|v| (v - 1.0).powi(2))
            .sum::<f64>()
            / 4.0;
        assert!((q.rmse.powi(2) - direct).abs() < 1e-12);
    }

    #[test]
    fn single_sample_has_zero_std() {
        let q = QuantityStats::from_samples("x", 0.2, &[0.25]);
        assert_eq!(q.std, 0.0);
        assert!((q.rmse - 0.05).abs() < 1e-15);
    }
}
