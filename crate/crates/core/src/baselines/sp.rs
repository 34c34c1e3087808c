use ndarray::{Array2, ArrayView2, Axis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::detector::{AnomalyDetector, Orientation};
use crate::error::{Error, Result};

use super::squared_distance;

/// Nearest-neighbour distance to a small random subsample of the training data.
#[derive(Debug, Clone, PartialEq)]
pub struct SpModel {
    subsample: Array2<f64>,
    seed: u64,
}

impl SpModel {
    pub const DEFAULT_SUBSAMPLE: usize = 25;

    /// Draws `min(psi, N)` rows without replacement.
    pub fn fit(train: ArrayView2<'_, f64>, psi: usize, seed: u64) -> Result<Self> {
        let n = train.nrows();
        if n == 0 {
            return Err(Error::EmptyTrainingSet);
        }
        if psi == 0 {
            return Err(Error::InvalidParameter(
                "Sp subsample size must be at least 1".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = rand::seq::index::sample(&mut rng, n, psi.min(n)).into_vec();
        Ok(SpModel {
            subsample: train.select(Axis(0), &rows),
            seed,
        })
    }

    /// Uses `subsample` as-is.
    pub fn from_subsample(subsample: Array2<f64>) -> Result<Self> {
        if subsample.nrows() == 0 {
            return Err(Error::EmptyTrainingSet);
        }
        Ok(SpModel { subsample, seed: 0 })
    }

    pub fn subsample(&self) -> ArrayView2<'_, f64> {
        self.subsample.view()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl AnomalyDetector for SpModel {
    fn orientation(&self) -> Orientation {
        Orientation::HigherIsAnomalous
    }

    fn n_features(&self) -> usize {
        self.subsample.ncols()
    }

    fn score(&self, x: &[f64]) -> Result<f64> {
        Error::check_dims(self.n_features(), x.len())?;
        let best = self
            .subsample
            .rows()
            .into_iter()
            .map(|y| squared_distance(x, y))
            .fold(f64::INFINITY, f64::min);
        Ok(best.sqrt())
    }
}
