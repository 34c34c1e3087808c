//! SPAD: per-dimension equal-width histograms over `[μ − 3σ, μ + 3σ]`.
//!
//! The score of `x` is `Σ_i ln((|H_i(x)| + 1) / (N + b))` where `|H_i(x)|` is
//! the training count of the bin holding `x_i`. Lower scores are more
//! anomalous. Values outside the 3σ range fall into the first or last bin; a
//! dimension with σ = 0 puts everything in bin 0.

use ndarray::{ArrayView2, Axis};

use crate::detector::{AnomalyDetector, Orientation};
use crate::error::{Error, Result};

/// `⌊log2 n⌋ + 1`, the default bin count for `n ≥ 1` training rows.
pub fn default_bin_count(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

/// One dimension's histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionHistogram {
    mean: f64,
    std_dev: f64,
    counts: Vec<u64>,
}

impl DimensionHistogram {
    pub fn new(mean: f64, std_dev: f64, counts: Vec<u64>) -> Result<Self> {
        if !mean.is_finite() || !std_dev.is_finite() || std_dev < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "histogram mean {mean} / std dev {std_dev}"
            )));
        }
        if counts.is_empty() {
            return Err(Error::InvalidParameter(
                "histogram needs at least one bin".into(),
            ));
        }
        Ok(DimensionHistogram {
            mean,
            std_dev,
            counts,
        })
    }

    fn fit(values: impl Iterator<Item = f64> + Clone, n: usize, bins: usize) -> Self {
        let first = values.clone().next().expect("non-empty column");
        let (mean, std_dev) = if values.clone().all(|v| v == first) {
            (first, 0.0)
        } else {
            let mean = values.clone().sum::<f64>() / n as f64;
            let var = values.clone().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
            (mean, var.sqrt())
        };
        let mut hist = DimensionHistogram {
            mean,
            std_dev,
            counts: vec![0; bins],
        };
        for v in values {
            let j = hist.bin_index(v);
            hist.counts[j] += 1;
        }
        hist
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std_dev(&self) -> f64 {
        self.std_dev
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// Left edge of bin 0.
    pub fn lower_edge(&self) -> f64 {
        self.mean - 3.0 * self.std_dev
    }

    pub fn bin_width(&self) -> f64 {
        6.0 * self.std_dev / self.bins() as f64
    }

    /// `⌊(x − (μ − 3σ)) / width⌋` clamped to `[0, b − 1]`; always 0 when σ = 0.
    pub fn bin_index(&self, x: f64) -> usize {
        let b = self.bins();
        if self.std_dev == 0.0 {
            return 0;
        }
        let pos = ((x - self.lower_edge()) / self.bin_width()).floor();
        // NaN and negatives saturate to 0 in the cast
        (pos as usize).min(b - 1)
    }

    pub fn count_at(&self, x: f64) -> u64 {
        self.counts[self.bin_index(x)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramModel {
    n_train: usize,
    bins: usize,
    dims: Vec<DimensionHistogram>,
}

impl HistogramModel {
    /// Fits one histogram per column. `bins` defaults to [`default_bin_count`].
    pub fn fit(train: ArrayView2<'_, f64>, bins: Option<usize>) -> Result<Self> {
        let n = train.nrows();
        if n == 0 {
            return Err(Error::EmptyTrainingSet);
        }
        let bins = bins.unwrap_or_else(|| default_bin_count(n));
        if bins == 0 {
            return Err(Error::InvalidParameter(
                "bin count must be at least 1".into(),
            ));
        }
        let dims = train
            .axis_iter(Axis(1))
            .map(|col| DimensionHistogram::fit(col.into_iter().copied(), n, bins))
            .collect();
        Ok(HistogramModel {
            n_train: n,
            bins,
            dims,
        })
    }

    /// Rebuilds a model from stored parts, checking that every dimension has
    /// `bins` bins whose counts sum to `n_train`.
    pub fn from_parts(n_train: usize, bins: usize, dims: Vec<DimensionHistogram>) -> Result<Self> {
        if n_train == 0 {
            return Err(Error::EmptyTrainingSet);
        }
        for (i, d) in dims.iter().enumerate() {
            if d.bins() != bins {
                return Err(Error::InvalidParameter(format!(
                    "dimension {i} has {} bins, expected {bins}",
                    d.bins()
                )));
            }
            let total: u64 = d.counts.iter().sum();
            if total != n_train as u64 {
                return Err(Error::InvalidParameter(format!(
                    "dimension {i} counts sum to {total}, expected {n_train}"
                )));
            }
        }
        Ok(HistogramModel {
            n_train,
            bins,
            dims,
        })
    }

    pub fn n_train(&self) -> usize {
        self.n_train
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn dimensions(&self) -> &[DimensionHistogram] {
        &self.dims
    }

    pub fn bin_index(&self, dim: usize, x: f64) -> usize {
        self.dims[dim].bin_index(x)
    }

    /// `ln((|H_dim(x)| + 1) / (N + b))`.
    pub fn log_mass(&self, dim: usize, x: f64) -> f64 {
        let count = self.dims[dim].count_at(x) as f64;
        ((count + 1.0) / (self.n_train + self.bins) as f64).ln()
    }

    /// Sum of [`log_mass`](Self::log_mass) over the first `m` dimensions.
    /// `x` may be longer than `m`; extra entries are ignored.
    pub fn score_leading(&self, x: &[f64], m: usize) -> f64 {
        x.iter()
            .take(m)
            .enumerate()
            .map(|(i, &v)| self.log_mass(i, v))
            .sum()
    }

    /// `(lowest, highest)` attainable score: `M·ln(1/(N+b))` and `M·ln((N+1)/(N+b))`.
    /// Summed term by term like a score, so the bounds hold after rounding.
    pub fn score_bounds(&self) -> (f64, f64) {
        let denom = (self.n_train + self.bins) as f64;
        let lo = (1.0 / denom).ln();
        let hi = ((self.n_train as f64 + 1.0) / denom).ln();
        let sum = |term: f64| self.dims.iter().map(|_| term).sum::<f64>();
        (sum(lo), sum(hi))
    }
}

impl AnomalyDetector for HistogramModel {
    fn orientation(&self) -> Orientation {
        Orientation::LowerIsAnomalous
    }

    fn n_features(&self) -> usize {
        self.dims.len()
    }

    fn score(&self, x: &[f64]) -> Result<f64> {
        Error::check_dims(self.dims.len(), x.len())?;
        Ok(self.score_leading(x, x.len()))
    }
}
