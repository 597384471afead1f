//! Plot-ready data: histogram bins and matrix grids.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` increasing edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    /// Equal-width bins over the finite values; `bins = None` uses
    /// `ceil(sqrt(n))`. Values equal to the upper edge fall in the last bin.
    pub fn new(values: &[f64], bins: Option<usize>) -> Self {
        let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        let bins = bins
            .unwrap_or_else(|| (finite.len() as f64).sqrt().ceil() as usize)
            .max(1);
        if finite.is_empty() {
            return Self {
                edges: vec![0.0, 1.0],
                counts: vec![0],
            };
        }
        let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
        let mut hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi == lo {
            hi = lo + 1.0;
        }
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
        let mut counts = vec![0; bins];
        for v in finite {
            let i = (((v - lo) / width) as usize).min(bins - 1);
            counts[i] += 1;
        }
        Self { edges, counts }
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Two columns `bin_center,count` with the edges echoed in comment lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# edges = [{}]\n",
            self.edges
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str("bin_center,count\n");
        for (c, n) in self.centers().iter().zip(&self.counts) {
            out.push_str(&format!("{c},{n}\n"));
        }
        out
    }
}

/// Long-format `(row, col, value)` triples of a matrix, row-major.
pub fn matrix_grid(m: &DMatrix<f64>) -> Vec<(usize, usize, f64)> {
    (0..m.nrows())
        .flat_map(|r| (0..m.ncols()).map(move |c| (r, c, m[(r, c)])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_every_value_once() {
        let v = [0.1, 0.2, 0.2, 0.5, 0.9, f64::NAN];
        let h = Histogram::new(&v, Some(4));
        assert_eq!(h.counts.iter().sum::<usize>(), 5);
        assert_eq!(h.edges.len(), 5);
        assert_eq!(h.counts[3], 1);
        assert_eq!(h.counts[0], 3);
    }

    #[test]
    fn degenerate_inputs() {
        let h = Histogram::new(&[0.3; 4], None);
        assert_eq!(h.counts, vec![4, 0]);
        assert_eq!(Histogram::new(&[], None).counts, vec![0]);
    }

    #[test]
    fn grid_is_row_major() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(matrix_grid(&m)[1], (0, 1, 2.0));
    }
}
