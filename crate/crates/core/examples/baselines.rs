//! The three comparison detectors on one cluster with two planted outliers.

use ndarray::{array, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spadplus::eval::auc;
use spadplus::{AnomalyDetector, IForestModel, Label, LofModel, SpModel};

fn main() -> spadplus::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let train = Array2::from_shape_fn((400, 2), |_| rng.random_range(-1.0..1.0));
    let test = array![
        [0.0, 0.1],
        [0.5, -0.5],
        [-0.3, 0.8],
        [3.0, 3.0],
        [0.0, -4.0]
    ];
    let labels = [
        Label::Normal,
        Label::Normal,
        Label::Normal,
        Label::Anomaly,
        Label::Anomaly,
    ];

    let detectors: Vec<(&str, Box<dyn AnomalyDetector>)> = vec![
        ("LOF (k = 20)", Box::new(LofModel::fit(train.view(), None)?)),
        (
            "iforest (t = 100, psi = 256)",
            Box::new(IForestModel::fit(train.view(), 100, 256, 7)?),
        ),
        (
            "Sp (psi = 25)",
            Box::new(SpModel::fit(train.view(), 25, 7)?),
        ),
    ];
    for (name, det) in &detectors {
        let out = det.score_rows(test.view())?;
        println!(
            "{name:<30} {:?}  scores {:.3?}  AUC {}",
            det.orientation(),
            out.scores(),
            auc(&out, &labels)?
        );
    }
    Ok(())
}
