//! Fit SPAD on a small table, look at the histograms, score a few rows.

use ndarray::array;
use spadplus::{AnomalyDetector, HistogramModel};

fn main() -> spadplus::Result<()> {
    let train = array![
        [5.1, 3.5],
        [4.9, 3.0],
        [4.7, 3.2],
        [4.6, 3.1],
        [5.0, 3.6],
        [5.4, 3.9],
        [4.6, 3.4],
        [5.0, 3.4],
        [4.4, 2.9],
        [4.9, 3.1],
    ];
    let model = HistogramModel::fit(train.view(), None)?;
    println!("N = {}, b = {}", model.n_train(), model.bins());
    for (i, d) in model.dimensions().iter().enumerate() {
        println!(
            "dim {i}: mean {:.3}, sd {:.3}, range [{:.3}, {:.3}), counts {:?}",
            d.mean(),
            d.std_dev(),
            d.lower_edge(),
            d.lower_edge() + d.bin_width() * d.bins() as f64,
            d.counts()
        );
    }

    let (lo, hi) = model.score_bounds();
    println!("score range [{lo:.4}, {hi:.4}], lower is more anomalous");
    for x in [[5.0, 3.4], [4.5, 3.0], [7.0, 3.4], [5.0, 1.0]] {
        println!("{x:?} -> {:.4}", model.score(&x)?);
    }
    Ok(())
}
