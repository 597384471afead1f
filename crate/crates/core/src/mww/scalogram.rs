use nalgebra::DMatrix;

use crate::error::{MwwError, Result};
use crate::wavelet::{WaveletPyramid, WaveletSpec};

/// Unnormalized per-scale cross-products `I(j) = sum_k W_{j,k} W_{j,k}^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scalogram {
    j0: usize,
    j1: usize,
    matrices: Vec<DMatrix<f64>>,
    counts: Vec<usize>,
    total: usize,
    mean_scale: f64,
    spec: WaveletSpec,
}

impl Scalogram {
    /// Builds a scalogram directly from per-scale matrices, for callers that
    /// already hold aggregated cross-products.
    pub fn from_parts(
        j0: usize,
        matrices: Vec<DMatrix<f64>>,
        counts: Vec<usize>,
        spec: WaveletSpec,
    ) -> Result<Self> {
        if matrices.is_empty() || matrices.len() != counts.len() || j0 == 0 {
            return Err(MwwError::ScaleRange {
                j0,
                j1: j0 + matrices.len().saturating_sub(1),
                reason: "need one matrix and one count per scale, starting at j0 >= 1".into(),
            });
        }
        let p = matrices[0].nrows();
        if matrices.iter().any(|m| m.nrows() != p || m.ncols() != p) {
            return Err(MwwError::Dimension(
                "scalogram matrices differ in shape".into(),
            ));
        }
        let total: usize = counts.iter().sum();
        if total == 0 {
            return Err(MwwError::ScaleRange {
                j0,
                j1: j0 + matrices.len() - 1,
                reason: "no coefficients in range".into(),
            });
        }
        let mean_scale = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (j0 + i) as f64 * c as f64)
            .sum::<f64>()
            / total as f64;
        Ok(Self {
            j0,
            j1: j0 + matrices.len() - 1,
            matrices,
            counts,
            total,
            mean_scale,
            spec,
        })
    }

    pub fn j0(&self) -> usize {
        self.j0
    }

    pub fn j1(&self) -> usize {
        self.j1
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn scales(&self) -> impl Iterator<Item = usize> {
        self.j0..=self.j1
    }

    /// `I(j)`.
    pub fn matrix(&self, j: usize) -> &DMatrix<f64> {
        &self.matrices[j - self.j0]
    }

    /// `n_j`.
    pub fn count(&self, j: usize) -> usize {
        self.counts[j - self.j0]
    }

    /// `n = sum_j n_j`.
    pub fn total(&self) -> usize {
        self.total
    }

    /// `<J> = (1/n) sum_j j n_j`.
    pub fn mean_scale(&self) -> f64 {
        self.mean_scale
    }

    pub fn spec(&self) -> &WaveletSpec {
        &self.spec
    }

    /// Scalogram of a single channel.
    pub fn channel(&self, l: usize) -> Scalogram {
        Scalogram {
            matrices: self
                .matrices
                .iter()
                .map(|m| DMatrix::from_element(1, 1, m[(l, l)]))
                .collect(),
            ..self.clone()
        }
    }
}

/// Sums outer products of the coefficient vectors over `k` for `j0..=j1`.
pub fn scalogram(pyramid: &WaveletPyramid, j0: usize, j1: usize) -> Result<Scalogram> {
    if j0 == 0 || j0 > j1 {
        return Err(MwwError::ScaleRange {
            j0,
            j1,
            reason: "empty scale range".into(),
        });
    }
    if j1 > pyramid.max_scale() || pyramid.count(j1) == 0 {
        return Err(MwwError::ScaleRange {
            j0,
            j1,
            reason: format!(
                "pyramid holds coefficients up to scale {}",
                pyramid.max_scale()
            ),
        });
    }
    let p = pyramid.channels();
    let mut matrices = Vec::with_capacity(j1 - j0 + 1);
    let mut counts = Vec::with_capacity(j1 - j0 + 1);
    for j in j0..=j1 {
        let level = pyramid.level(j);
        let mut m = DMatrix::zeros(p, p);
        for a in 0..p {
            for b in 0..=a {
                let s: f64 = level[a].iter().zip(&level[b]).map(|(x, y)| x * y).sum();
                m[(a, b)] = s;
                m[(b, a)] = s;
            }
        }
        matrices.push(m);
        counts.push(pyramid.count(j));
    }
    Scalogram::from_parts(j0, matrices, counts, *pyramid.spec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> WaveletSpec {
        WaveletSpec::daubechies(1).unwrap()
    }

    #[test]
    fn single_scale_scalar() {
        let s = Scalogram::from_parts(1, vec![DMatrix::from_element(1, 1, 9.0)], vec![3], spec())
            .unwrap();
        assert_eq!(s.matrix(1)[(0, 0)], 9.0);
        assert_eq!(s.total(), 3);
        assert_eq!(s.mean_scale(), 1.0);
    }

    #[test]
    fn mean_scale_weights_counts() {
        let m = DMatrix::identity(2, 2);
        let s = Scalogram::from_parts(2, vec![m.clone(), m.clone(), m], vec![30, 10, 0], spec())
            .unwrap();
        assert_eq!(s.j1(), 4);
        assert!((s.mean_scale() - (2.0 * 30.0 + 3.0 * 10.0) / 40.0).abs() < 1e-15);
        assert!(s.mean_scale() >= 2.0 && s.mean_scale() <= 4.0);
    }

    #[test]
    fn empty_range_is_rejected() {
        let panel = crate::TimeSeriesPanel::from_channels(vec![vec![1.0; 64]]).unwrap();
        let pyr = crate::wavelet::dwt_pyramid(&panel, &spec(), 3).unwrap();
        assert!(matches!(
            scalogram(&pyr, 3, 2),
            Err(MwwError::ScaleRange { .. })
        ));
        assert!(matches!(
            scalogram(&pyr, 0, 2),
            Err(MwwError::ScaleRange { .. })
        ));
        assert!(matches!(
            scalogram(&pyr, 1, 4),
            Err(MwwError::ScaleRange { .. })
        ));
        assert!(scalogram(&pyr, 2, 2).is_ok());
    }
}
