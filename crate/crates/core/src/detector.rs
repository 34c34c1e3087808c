//! The contract every detector implements.

use ndarray::ArrayView2;

use crate::error::{Error, Result};

/// Which end of the score range marks anomalies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// LOF, Sp.
    HigherIsAnomalous,
    /// Isolation forest path length, SPAD and SPAD+ log mass.
    LowerIsAnomalous,
}

impl Orientation {
    /// Maps a raw score onto a scale where larger means more anomalous.
    pub fn anomalousness(self, score: f64) -> f64 {
        match self {
            Orientation::HigherIsAnomalous => score,
            Orientation::LowerIsAnomalous => -score,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::HigherIsAnomalous => Orientation::LowerIsAnomalous,
            Orientation::LowerIsAnomalous => Orientation::HigherIsAnomalous,
        }
    }
}

/// Scores for a test set, in test-row order, tagged with their orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorOutput {
    scores: Vec<f64>,
    orientation: Orientation,
}

impl DetectorOutput {
    pub fn new(scores: Vec<f64>, orientation: Orientation) -> Result<Self> {
        if let Some((i, s)) = scores.iter().enumerate().find(|(_, s)| !s.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "score {i} is not finite: {s}"
            )));
        }
        Ok(DetectorOutput {
            scores,
            orientation,
        })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// A fitted detector. Implementations are immutable once fitted, so scoring
/// may run from any number of threads.
pub trait AnomalyDetector: Send + Sync {
    fn orientation(&self) -> Orientation;

    /// Input dimensionality the detector was fitted on.
    fn n_features(&self) -> usize;

    fn score(&self, x: &[f64]) -> Result<f64>;

    fn score_rows(&self, data: ArrayView2<'_, f64>) -> Result<DetectorOutput> {
        Error::check_dims(self.n_features(), data.ncols())?;
        let scores = data
            .rows()
            .into_iter()
            .map(|row| match row.as_slice() {
                Some(x) => self.score(x),
                None => self.score(&row.to_vec()),
            })
            .collect::<Result<Vec<_>>>()?;
        DetectorOutput::new(scores, self.orientation())
    }
}
