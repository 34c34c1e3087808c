//! Min-max normalization fitted on training data.

use ndarray::{Array2, ArrayView2, Axis};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};

/// Per-dimension `(min, max)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct MinMaxParams {
    mins: Vec<f64>,
    maxs: Vec<f64>,
}

impl MinMaxParams {
    pub fn fit(train: ArrayView2<'_, f64>) -> Result<Self> {
        if train.nrows() == 0 {
            return Err(Error::EmptyTrainingSet);
        }
        let fold = |init: f64, pick: fn(f64, f64) -> f64| {
            train
                .axis_iter(Axis(1))
                .map(|col| col.iter().copied().fold(init, pick))
                .collect::<Vec<_>>()
        };
        let mins = fold(f64::INFINITY, f64::min);
        let maxs = fold(f64::NEG_INFINITY, f64::max);
        Ok(MinMaxParams { mins, maxs })
    }

    pub fn from_bounds(mins: Vec<f64>, maxs: Vec<f64>) -> Result<Self> {
        Error::check_dims(mins.len(), maxs.len())?;
        for (i, (lo, hi)) in mins.iter().zip(&maxs).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::InvalidParameter(format!(
                    "dimension {i}: min {lo} / max {hi}"
                )));
            }
        }
        Ok(MinMaxParams { mins, maxs })
    }

    pub fn n_features(&self) -> usize {
        self.mins.len()
    }

    pub fn mins(&self) -> &[f64] {
        &self.mins
    }

    pub fn maxs(&self) -> &[f64] {
        &self.maxs
    }

    /// `(x - min) / (max - min)` per dimension, 0 where `max == min`. Values
    /// outside the training range map outside `[0, 1]`; nothing is clamped.
    pub fn apply(&self, data: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        Error::check_dims(self.n_features(), data.ncols())?;
        let mut out = data.to_owned();
        for (mut col, (&lo, &hi)) in out
            .axis_iter_mut(Axis(1))
            .zip(self.mins.iter().zip(&self.maxs))
        {
            let range = hi - lo;
            if range > 0.0 {
                col.mapv_inplace(|v| (v - lo) / range);
            } else {
                col.fill(0.0);
            }
        }
        Ok(out)
    }

    pub fn apply_dataset(&self, data: &LabeledDataset) -> Result<LabeledDataset> {
        data.with_values(self.apply(data.values())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn midpoint_and_extrapolation() {
        let p = MinMaxParams::fit(array![[2.0], [4.0], [6.0]].view()).unwrap();
        assert_eq!(p.mins(), [2.0]);
        assert_eq!(p.maxs(), [6.0]);
        let out = p
            .apply(array![[4.0], [8.0], [2.0], [6.0], [0.0]].view())
            .unwrap();
        assert_eq!(out, array![[0.5], [1.5], [0.0], [1.0], [-0.5]]);
    }

    #[test]
    fn constant_dimension_maps_to_zero() {
        let p = MinMaxParams::fit(array![[5.0, 1.0], [5.0, 2.0], [5.0, 3.0]].view()).unwrap();
        let out = p.apply(array![[5.0, 2.0], [9.0, 3.0]].view()).unwrap();
        assert_eq!(out.column(0).to_vec(), vec![0.0, 0.0]);
        assert_eq!(out.column(1).to_vec(), vec![0.5, 1.0]);
    }

    #[test]
    fn dimension_mismatch() {
        let p = MinMaxParams::fit(array![[1.0, 2.0]].view()).unwrap();
        assert!(matches!(
            p.apply(array![[1.0]].view()),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn empty_train() {
        let empty = Array2::<f64>::zeros((0, 3));
        assert!(matches!(
            MinMaxParams::fit(empty.view()),
            Err(Error::EmptyTrainingSet)
        ));
    }

    #[test]
    fn bounds_validated() {
        assert!(MinMaxParams::from_bounds(vec![1.0], vec![0.0]).is_err());
        assert!(MinMaxParams::from_bounds(vec![0.0], vec![1.0, 2.0]).is_err());
        assert!(MinMaxParams::from_bounds(vec![0.0], vec![0.0]).is_ok());
    }
}
