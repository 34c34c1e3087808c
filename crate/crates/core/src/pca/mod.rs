//! Covariance PCA and the SPAD+ detector built on it.

mod eigen;
mod spad_plus;

use ndarray::{Array1, Array2, ArrayView2, Axis};

use crate::error::{Error, Result};

pub use eigen::{symmetric_eigen, SymmetricEigen, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use spad_plus::{ScoreVariant, SpadPlusModel, SpadPlusVariant};

/// Sample covariance with `1/(N − 1)` scaling.
pub fn covariance(data: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
    let n = data.nrows();
    if n < 2 {
        return Err(Error::TooFewRows {
            required: 2,
            found: n,
        });
    }
    let mean = data.mean_axis(Axis(0)).expect("non-empty");
    let centered = &data - &mean;
    Ok(centered.t().dot(&centered) / (n - 1) as f64)
}

/// The map `x ↦ componentsᵀ · (x − mean)` learned from training data.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaTransform {
    mean: Array1<f64>,
    /// Unit eigenvectors as columns, by descending eigenvalue.
    components: Array2<f64>,
    eigenvalues: Vec<f64>,
}

impl PcaTransform {
    pub fn fit(train: ArrayView2<'_, f64>) -> Result<Self> {
        let cov = covariance(train)?;
        let mean = train.mean_axis(Axis(0)).expect("non-empty");
        let SymmetricEigen {
            values,
            mut vectors,
            ..
        } = symmetric_eigen(&cov)?;

        // largest-magnitude entry of each eigenvector is positive
        for mut col in vectors.axis_iter_mut(Axis(1)) {
            let pivot = col
                .iter()
                .copied()
                .reduce(|best, v| if v.abs() > best.abs() { v } else { best })
                .unwrap_or(0.0);
            if pivot < 0.0 {
                col.mapv_inplace(|v| -v);
            }
        }
        let eigenvalues = values.into_iter().map(|l| l.max(0.0)).collect();

        Ok(PcaTransform {
            mean,
            components: vectors,
            eigenvalues,
        })
    }

    pub fn from_parts(
        mean: Vec<f64>,
        components: Array2<f64>,
        eigenvalues: Vec<f64>,
    ) -> Result<Self> {
        let m = mean.len();
        if components.dim() != (m, m) {
            return Err(Error::InvalidParameter(format!(
                "components are {:?}, expected ({m}, {m})",
                components.dim()
            )));
        }
        Error::check_dims(m, eigenvalues.len())?;
        Ok(PcaTransform {
            mean: Array1::from(mean),
            components,
            eigenvalues,
        })
    }

    pub fn n_features(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &Array1<f64> {
        &self.mean
    }

    pub fn components(&self) -> &Array2<f64> {
        &self.components
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Smallest `m` whose leading eigenvalues reach `fraction` of the total
    /// variance. A zero-variance training set yields 1.
    pub fn components_for_variance(&self, fraction: f64) -> usize {
        let total: f64 = self.eigenvalues.iter().sum();
        if total <= 0.0 {
            return 1;
        }
        let mut acc = 0.0;
        for (i, l) in self.eigenvalues.iter().enumerate() {
            acc += l;
            if acc >= fraction * total {
                return i + 1;
            }
        }
        self.eigenvalues.len()
    }

    pub fn transform(&self, x: &[f64]) -> Result<Vec<f64>> {
        Error::check_dims(self.n_features(), x.len())?;
        let centered: Vec<f64> = x.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        Ok(self
            .components
            .columns()
            .into_iter()
            .map(|c| c.iter().zip(&centered).map(|(v, d)| v * d).sum())
            .collect())
    }

    pub fn transform_rows(&self, data: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        Error::check_dims(self.n_features(), data.ncols())?;
        Ok((&data - &self.mean).dot(&self.components))
    }
}
