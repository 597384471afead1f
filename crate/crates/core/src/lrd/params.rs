use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{MwwError, Result};
use crate::wavelet::WaveletSpec;

/// Memory exponents `d`, one per channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MemoryParams(pub Vec<f64>);

impl MemoryParams {
    pub fn new(d: Vec<f64>) -> Result<Self> {
        if d.is_empty() {
            return Err(MwwError::Config("memory vector is empty".into()));
        }
        if d.iter().any(|x| !x.is_finite()) {
            return Err(MwwError::Config(
                "memory vector has non-finite entries".into(),
            ));
        }
        Ok(Self(d))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Checks `(1 + beta)/2 - alpha < d_l <= M` for every channel.
    pub fn validate_for(&self, spec: &WaveletSpec, holder: &HolderParams) -> Result<()> {
        let lower = spec.memory_lower_bound(holder.beta);
        let upper = spec.vanishing_moments as f64;
        for (channel, &d) in self.0.iter().enumerate() {
            if d > upper {
                return Err(MwwError::VanishingMoments {
                    channel,
                    d,
                    moments: spec.vanishing_moments,
                });
            }
            if d <= lower {
                return Err(MwwError::Domain {
                    value: d,
                    lower,
                    upper,
                });
            }
        }
        Ok(())
    }
}

/// Smoothness class `H(beta, L)` of the short-memory spectral factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderParams {
    pub beta: f64,
    pub lipschitz: f64,
}

impl HolderParams {
    pub fn new(beta: f64, lipschitz: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 2.0) {
            return Err(MwwError::Config(format!("beta={beta} outside (0, 2]")));
        }
        if lipschitz.is_nan() || lipschitz <= 0.0 {
            return Err(MwwError::Config(format!("L={lipschitz} must be positive")));
        }
        Ok(Self { beta, lipschitz })
    }
}

impl Default for HolderParams {
    /// ARFIMA(0,d,0) has a flat short-memory factor; beta is effectively 2.
    fn default() -> Self {
        Self {
            beta: 2.0,
            lipschitz: 1.0,
        }
    }
}

/// Symmetric positive-definite long-run covariance `Omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct LongRunCov {
    matrix: DMatrix<f64>,
}

/// Eigenvalue floor below which a covariance is treated as singular.
pub const PD_TOLERANCE: f64 = 1e-12;

impl LongRunCov {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(MwwError::Dimension(format!(
                "covariance must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(MwwError::NotPositiveDefinite("non-finite entry".into()));
        }
        let p = matrix.nrows();
        for i in 0..p {
            for j in 0..i {
                let (a, b) = (matrix[(i, j)], matrix[(j, i)]);
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    return Err(MwwError::NotPositiveDefinite(format!(
                        "not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        if let Some(i) = (0..p).find(|&i| matrix[(i, i)] <= 0.0) {
            return Err(MwwError::NotPositiveDefinite(format!(
                "diagonal entry {i} is not positive"
            )));
        }
        let min_eig = matrix.clone().symmetric_eigenvalues().min();
        if min_eig <= PD_TOLERANCE {
            return Err(MwwError::NotPositiveDefinite(format!(
                "smallest eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn identity(p: usize) -> Self {
        Self {
            matrix: DMatrix::identity(p, p),
        }
    }

    /// Unit-variance bivariate covariance with correlation `rho`.
    pub fn bivariate(rho: f64) -> Result<Self> {
        Self::new(DMatrix::from_row_slice(2, 2, &[1.0, rho, rho, 1.0]))
    }

    /// Unit diagonal with every off-diagonal equal to `rho`.
    pub fn equicorrelated(p: usize, rho: f64) -> Result<Self> {
        Self::new(DMatrix::from_fn(
            p,
            p,
            |i, j| if i == j { 1.0 } else { rho },
        ))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Lower Cholesky factor.
    pub fn cholesky(&self) -> DMatrix<f64> {
        self.matrix
            .clone()
            .cholesky()
            .expect("positive definiteness checked at construction")
            .l()
    }

    pub fn correlation(&self) -> DMatrix<f64> {
        correlation_of(&self.matrix)
    }
}

/// `C_lm = A_lm / sqrt(A_ll A_mm)`; entries with a non-positive diagonal are NaN.
pub fn correlation_of(a: &DMatrix<f64>) -> DMatrix<f64> {
    let p = a.nrows();
    DMatrix::from_fn(p, p, |i, j| {
        let denom = a[(i, i)] * a[(j, j)];
        if denom > 0.0 && denom.is_finite() {
            a[(i, j)] / denom.sqrt()
        } else {
            f64::NAN
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covariance_validation() {
        assert!(LongRunCov::bivariate(0.4).is_ok());
        assert!(matches!(
            LongRunCov::bivariate(1.5),
            Err(MwwError::NotPositiveDefinite(_))
        ));
        assert!(LongRunCov::bivariate(1.0).is_err());
        assert!(LongRunCov::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.3, 1.0])).is_err());
        assert!(LongRunCov::new(DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0])).is_err());
        assert!(LongRunCov::new(DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn correlation_is_scale_free() {
        let om = LongRunCov::new(DMatrix::from_row_slice(2, 2, &[4.0, 1.2, 1.2, 9.0])).unwrap();
        let c = om.correlation();
        assert!((c[(0, 1)] - 0.2).abs() < 1e-15);
        assert!((c[(0, 0)] - 1.0).abs() < 1e-15);
        let l = om.cholesky();
        assert!((&l * l.transpose() - om.matrix()).norm() < 1e-14);
    }

    #[test]
    fn memory_bounds() {
        let spec = WaveletSpec::daubechies(4).unwrap();
        let h = HolderParams::default();
        assert!(MemoryParams::new(vec![0.2, 1.2])
            .unwrap()
            .validate_for(&spec, &h)
            .is_ok());
        assert!(matches!(
            MemoryParams::new(vec![4.5])
                .unwrap()
                .validate_for(&spec, &h),
            Err(MwwError::VanishingMoments { channel: 0, .. })
        ));
        // (1 + 2)/2 - 1.9125 = -0.4125
        assert!(MemoryParams::new(vec![-0.45])
            .unwrap()
            .validate_for(&spec, &h)
            .is_err());
        assert!(MemoryParams::new(vec![f64::NAN]).is_err());
        assert!(HolderParams::new(2.5, 1.0).is_err());
        assert!(HolderParams::new(0.0, 1.0).is_err());
        assert!(HolderParams::new(1.0, 0.0).is_err());
    }
}
