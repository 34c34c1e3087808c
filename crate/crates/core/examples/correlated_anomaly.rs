//! A point that looks ordinary on each axis but breaks a strong correlation.
//! SPAD sees two typical coordinates; SPAD+ also sees the minor principal
//! component, where the point sits far out.
//!
//!     cargo run --example correlated_anomaly [rho]

use spadplus::synth::{correlated_gaussian, mahalanobis_sq};
use spadplus::{AnomalyDetector, HistogramModel, MinMaxParams, SpadPlusModel};

/// Share of normals scored lower (more anomalous) than `p`, ties half.
fn rank(normals: &[f64], p: f64) -> f64 {
    let below = normals.iter().filter(|&&s| s < p).count() as f64;
    let ties = normals.iter().filter(|&&s| s == p).count() as f64;
    (below + 0.5 * ties) / normals.len() as f64
}

fn main() -> spadplus::Result<()> {
    let rho: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.95);
    println!("rho = {rho}");
    println!("seed  planted          mahalanobis  SPAD rank  SPAD+ rank");
    for seed in 0..10 {
        let data = correlated_gaussian(1000, rho, 1, seed)?;
        let normals: Vec<usize> = (0..1000).collect();
        let train_raw = data.select_rows(&normals);
        let norm = MinMaxParams::fit(train_raw.values())?;
        let train = norm.apply(train_raw.values())?;
        let all = norm.apply(data.values())?;

        let spad = HistogramModel::fit(train.view(), None)?.score_rows(all.view())?;
        let plus = SpadPlusModel::fit(train.view(), None)?.score_rows(all.view())?;
        let (x, y) = (data.row(1000)[0], data.row(1000)[1]);
        println!(
            "{seed:>4}  ({x:+.3}, {y:+.3})  {:>11.2}  {:>8.1}%  {:>9.1}%",
            mahalanobis_sq(x, y, rho).sqrt(),
            100.0 * rank(&spad.scores()[..1000], spad.scores()[1000]),
            100.0 * rank(&plus.scores()[..1000], plus.scores()[1000]),
        );
    }
    Ok(())
}
