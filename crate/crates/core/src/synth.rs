//! Two-dimensional correlated Gaussian data with planted anomalies that are
//! unremarkable in each coordinate but sit across the correlation axis.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dataset::{Label, LabeledDataset};
use crate::error::{Error, Result};

/// Range of `|coordinate|` for planted points, in marginal standard deviations.
pub const PLANTED_OFFSET: (f64, f64) = (0.7, 1.0);

/// `n_points` normals from a unit-variance bivariate Gaussian with correlation
/// `rho`, followed by `n_planted` anomalies at `(u, −sgn(ρ)·v)` with
/// `u, v ~ U(0.7, 1.0)` (`sgn(0) = 1`). Columns are `x` and `y`.
pub fn correlated_gaussian(
    n_points: usize,
    rho: f64,
    n_planted: usize,
    seed: u64,
) -> Result<LabeledDataset> {
    if n_points < 10 {
        return Err(Error::InvalidParameter(format!(
            "need at least 10 normal points, got {n_points}"
        )));
    }
    if !rho.is_finite() || rho.abs() >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "correlation must lie in (-1, 1), got {rho}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let residual = (1.0 - rho * rho).sqrt();
    let total = n_points + n_planted;
    let mut values = Vec::with_capacity(2 * total);
    for _ in 0..n_points {
        let z1: f64 = StandardNormal.sample(&mut rng);
        let z2: f64 = StandardNormal.sample(&mut rng);
        values.push(z1);
        values.push(rho * z1 + residual * z2);
    }
    let side = if rho < 0.0 { 1.0 } else { -1.0 };
    let (lo, hi) = PLANTED_OFFSET;
    for _ in 0..n_planted {
        let u = rng.random_range(lo..hi);
        let v = rng.random_range(lo..hi);
        values.push(u);
        values.push(side * v);
    }
    let mut labels = vec![Label::Normal; n_points];
    labels.resize(total, Label::Anomaly);
    let values = Array2::from_shape_vec((total, 2), values).expect("two columns per row");
    LabeledDataset::new(values, vec!["x".into(), "y".into()], labels)
}

/// Squared Mahalanobis distance of `(x, y)` from the origin under unit
/// marginals with correlation `rho`.
pub fn mahalanobis_sq(x: f64, y: f64, rho: f64) -> f64 {
    (x * x - 2.0 * rho * x * y + y * y) / (1.0 - rho * rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_labels() {
        let d = correlated_gaussian(1000, 0.95, 3, 7).unwrap();
        assert_eq!(d.n_rows(), 1003);
        assert_eq!(d.anomaly_count(), 3);
        assert_eq!(d.feature_names(), ["x", "y"]);
        assert!(d.labels()[..1000].iter().all(|l| !l.is_anomaly()));
    }

    #[test]
    fn planted_points_are_marginally_typical() {
        for seed in 0..20 {
            let d = correlated_gaussian(10, 0.95, 5, seed).unwrap();
            for i in 10..15 {
                let (x, y) = (d.row(i)[0], d.row(i)[1]);
                assert!(x.abs() <= 1.0 && y.abs() <= 1.0);
                assert!(x > 0.0 && y < 0.0);
                assert!(mahalanobis_sq(x, y, 0.95).sqrt() > 4.0);
            }
        }
    }

    #[test]
    fn sample_correlation_close_to_rho() {
        let d = correlated_gaussian(20_000, 0.8, 0, 1).unwrap();
        let v = d.values();
        let n = v.nrows() as f64;
        let (mx, my) = (v.column(0).sum() / n, v.column(1).sum() / n);
        let sxy: f64 = v
            .rows()
            .into_iter()
            .map(|r| (r[0] - mx) * (r[1] - my))
            .sum::<f64>()
            / n;
        let sx = (v.column(0).iter().map(|a| (a - mx).powi(2)).sum::<f64>() / n).sqrt();
        let sy = (v.column(1).iter().map(|a| (a - my).powi(2)).sum::<f64>() / n).sqrt();
        assert!((sxy / (sx * sy) - 0.8).abs() < 0.02);
        assert!((sx - 1.0).abs() < 0.03 && (sy - 1.0).abs() < 0.03);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(correlated_gaussian(9, 0.5, 1, 0).is_err());
        assert!(correlated_gaussian(100, 1.0, 1, 0).is_err());
        assert!(correlated_gaussian(100, f64::NAN, 1, 0).is_err());
        assert_eq!(
            correlated_gaussian(100, 0.3, 2, 5).unwrap().values(),
            correlated_gaussian(100, 0.3, 2, 5).unwrap().values()
        );
    }
}
