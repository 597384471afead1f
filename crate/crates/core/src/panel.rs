use crate::error::{MwwError, Result};

/// An `N x p` sample matrix stored channel by channel.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesPanel {
    channels: Vec<Vec<f64>>,
    len: usize,
}

impl TimeSeriesPanel {
    /// Builds a panel from per-channel sample vectors of equal length.
    pub fn from_channels(channels: Vec<Vec<f64>>) -> Result<Self> {
        let len = channels.first().map(Vec::len).unwrap_or(0);
        if channels.is_empty() {
            return Err(MwwError::Dimension("panel has no channels".into()));
        }
        if let Some((idx, c)) = channels.iter().enumerate().find(|(_, c)| c.len() != len) {
            return Err(MwwError::Dimension(format!(
                "channel {idx} has {} samples, expected {len}",
                c.len()
            )));
        }
        if let Some(idx) = channels
            .iter()
            .position(|c| c.iter().any(|x| !x.is_finite()))
        {
            return Err(MwwError::Dimension(format!(
                "channel {idx} contains non-finite samples"
            )));
        }
        Ok(Self { channels, len })
    }

    /// Builds a panel from row-major records (one row per time point).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let p = rows.first().map(Vec::len).unwrap_or(0);
        let mut channels = vec![Vec::with_capacity(rows.len()); p];
        for (t, row) in rows.iter().enumerate() {
            if row.len() != p {
                return Err(MwwError::Dimension(format!(
                    "row {t} has {} columns, expected {p}",
                    row.len()
                )));
            }
            for (c, &x) in channels.iter_mut().zip(row) {
                c.push(x);
            }
        }
        Self::from_channels(channels)
    }

    /// Number of time points `N`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of channels `p`.
    pub fn channels(&self) -> usize {
        self.channels.len()
    }

    pub fn channel(&self, idx: usize) -> &[f64] {
        &self.channels[idx]
    }

    pub fn iter_channels(&self) -> impl Iterator<Item = &[f64]> {
        self.channels.iter().map(Vec::as_slice)
    }

    pub fn into_channels(self) -> Vec<Vec<f64>> {
        self.channels
    }

    /// Row `t` across all channels.
    pub fn row(&self, t: usize) -> Vec<f64> {
        self.channels.iter().map(|c| c[t]).collect()
    }

    /// Keeps only the listed channels, in the given order.
    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        let mut out = Vec::with_capacity(idx.len());
        for &i in idx {
            let c = self
                .channels
                .get(i)
                .ok_or_else(|| MwwError::Dimension(format!("no channel {i}")))?;
            out.push(c.clone());
        }
        Self::from_channels(out)
    }

    /// Subtracts the sample mean from every channel.
    pub fn demeaned(&self) -> Self {
        let channels = self
            .channels
            .iter()
            .map(|c| {
                let mean = c.iter().sum::<f64>() / c.len().max(1) as f64;
                c.iter().map(|x| x - mean).collect()
            })
            .collect();
        Self {
            channels,
            len: self.len,
        }
    }

    /// Multiplies channel `idx` by `factor`.
    pub fn scale_channel(&mut self, idx: usize, factor: f64) {
        for x in &mut self.channels[idx] {
            *x *= factor;
        }
    }
}
