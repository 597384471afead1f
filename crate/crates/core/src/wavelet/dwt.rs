//! Mallat pyramid restricted to boundary-free detail coefficients.

use super::filters::WaveletSpec;
use crate::error::{MwwError, Result};
use crate::panel::TimeSeriesPanel;

/// Length of the equivalent detail filter at scale `j`.
pub fn equivalent_filter_len(spec: &WaveletSpec, j: usize) -> usize {
    ((1usize << j) - 1) * (spec.filter_len() - 1) + 1
}

/// Number of detail coefficients at scale `j` whose support lies entirely
/// inside `N` samples.
pub fn coefficient_count(n: usize, spec: &WaveletSpec, j: usize) -> usize {
    if j == 0 {
        return n;
    }
    if j >= usize::BITS as usize - 1 {
        return 0;
    }
    let width = equivalent_filter_len(spec, j);
    if n < width {
        0
    } else {
        (n - width) / (1usize << j) + 1
    }
}

/// Largest `j` with at least one valid coefficient (0 when none).
pub fn max_feasible_scale(n: usize, spec: &WaveletSpec) -> usize {
    (1..)
        .take_while(|&j| coefficient_count(n, spec, j) >= 1)
        .last()
        .unwrap_or(0)
}

/// Detail coefficients `W_{j,k}(l)` for `j = 1..=j_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletPyramid {
    /// `levels[j - 1][channel][k]`.
    levels: Vec<Vec<Vec<f64>>>,
    counts: Vec<usize>,
    source_len: usize,
    spec: WaveletSpec,
}

impl WaveletPyramid {
    pub fn max_scale(&self) -> usize {
        self.levels.len()
    }

    pub fn channels(&self) -> usize {
        self.levels.first().map(Vec::len).unwrap_or(0)
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn spec(&self) -> &WaveletSpec {
        &self.spec
    }

    /// `n_j`, the number of stored coefficients per channel at scale `j`.
    pub fn count(&self, j: usize) -> usize {
        if j == 0 || j > self.levels.len() {
            0
        } else {
            self.counts[j - 1]
        }
    }

    /// All channels at scale `j` (1-based).
    pub fn level(&self, j: usize) -> &[Vec<f64>] {
        &self.levels[j - 1]
    }

    pub fn coefficients(&self, j: usize, channel: usize) -> &[f64] {
        &self.levels[j - 1][channel]
    }

    /// A single-channel pyramid sharing the same coefficients.
    pub fn channel_pyramid(&self, channel: usize) -> WaveletPyramid {
        WaveletPyramid {
            levels: self
                .levels
                .iter()
                .map(|lvl| vec![lvl[channel].clone()])
                .collect(),
            counts: self.counts.clone(),
            source_len: self.source_len,
            spec: self.spec,
        }
    }
}

/// Multichannel discrete wavelet transform up to scale `j_max`.
///
/// Samples are identified with scale-0 approximation coefficients; each level
/// correlates the running approximation with the low/high-pass filters and
/// decimates by two, keeping only outputs whose taps all fall on data.
pub fn dwt_pyramid(
    panel: &TimeSeriesPanel,
    spec: &WaveletSpec,
    j_max: usize,
) -> Result<WaveletPyramid> {
    let n = panel.len();
    let max_feasible = max_feasible_scale(n, spec);
    if n < spec.support_length || j_max == 0 || j_max > max_feasible {
        return Err(MwwError::InsufficientData {
            len: n,
            requested: j_max,
            max_feasible,
        });
    }
    let filters = spec.filters();
    let taps = filters.low.len();
    let mut levels: Vec<Vec<Vec<f64>>> = vec![Vec::with_capacity(panel.channels()); j_max];
    for x in panel.iter_channels() {
        let mut approx = x.to_vec();
        for level in levels.iter_mut() {
            let out_len = (approx.len() - taps) / 2 + 1;
            let mut detail = Vec::with_capacity(out_len);
            let mut next = Vec::with_capacity(out_len);
            for k in 0..out_len {
                let window = &approx[2 * k..2 * k + taps];
                let (mut d, mut a) = (0.0, 0.0);
                for ((w, g), h) in window.iter().zip(&filters.high).zip(&filters.low) {
                    d += g * w;
                    a += h * w;
                }
                detail.push(d);
                next.push(a);
            }
            level.push(detail);
            approx = next;
        }
    }
    let counts = (1..=j_max).map(|j| coefficient_count(n, spec, j)).collect();
    Ok(WaveletPyramid {
        levels,
        counts,
        source_len: n,
        spec: *spec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: usize) -> WaveletSpec {
        WaveletSpec::daubechies(m).unwrap()
    }

    #[test]
    fn first_scale_count_for_n512_m4() {
        assert_eq!(coefficient_count(512, &spec(4), 1), 253);
        // The first scale agrees with floor(2^-j (N - T + 1)).
        for m in 1..=10 {
            for n in [64usize, 100, 257, 512, 1000] {
                let s = spec(m);
                let expected = (n + 1).saturating_sub(s.support_length) / 2;
                assert_eq!(coefficient_count(n, &s, 1), expected, "M={m} N={n}");
            }
        }
    }

    #[test]
    fn closed_form_matches_recursive_lengths() {
        for m in 1..=6 {
            let s = spec(m);
            for n in (2 * m)..300 {
                let mut len = n;
                for j in 1..12 {
                    len = if len >= s.filter_len() {
                        (len - s.filter_len()) / 2 + 1
                    } else {
                        0
                    };
                    assert_eq!(coefficient_count(n, &s, j), len, "M={m} N={n} j={j}");
                    if len == 0 {
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn feasible_scales() {
        assert_eq!(max_feasible_scale(512, &spec(4)), 6);
        assert_eq!(max_feasible_scale(512, &spec(1)), 9);
        assert_eq!(max_feasible_scale(3, &spec(4)), 0);
    }

    #[test]
    fn too_short_for_scale_reports_largest_feasible() {
        let panel = TimeSeriesPanel::from_channels(vec![vec![0.0; 512]]).unwrap();
        let err = dwt_pyramid(&panel, &spec(4), 7).unwrap_err();
        assert_eq!(
            err,
            MwwError::InsufficientData {
                len: 512,
                requested: 7,
                max_feasible: 6
            }
        );
    }

    #[test]
    fn zero_and_constant_panels() {
        let zero = TimeSeriesPanel::from_channels(vec![vec![0.0; 256]; 2]).unwrap();
        let pyr = dwt_pyramid(&zero, &spec(3), 4).unwrap();
        for j in 1..=4 {
            assert!(pyr.level(j).iter().flatten().all(|&w| w == 0.0));
        }
        for m in 1..=10 {
            let c = TimeSeriesPanel::from_channels(vec![vec![3.7; 1024]]).unwrap();
            let s = spec(m);
            let jm = max_feasible_scale(1024, &s);
            let pyr = dwt_pyramid(&c, &s, jm).unwrap();
            for j in 1..=jm {
                for &w in pyr.coefficients(j, 0) {
                    assert!(w.abs() < 1e-11, "M={m} j={j} w={w}");
                }
            }
        }
    }

    #[test]
    fn counts_are_stored_and_nonincreasing() {
        let panel = TimeSeriesPanel::from_channels(vec![vec![1.0; 777]; 3]).unwrap();
        let s = spec(2);
        let pyr = dwt_pyramid(&panel, &s, max_feasible_scale(777, &s)).unwrap();
        for j in 1..=pyr.max_scale() {
            assert_eq!(pyr.count(j), coefficient_count(777, &s, j));
            for c in 0..3 {
                assert_eq!(pyr.coefficients(j, c).len(), pyr.count(j));
            }
            if j > 1 {
                assert!(pyr.count(j) <= pyr.count(j - 1));
            }
        }
    }
}
