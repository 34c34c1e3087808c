//! Score variants on Pima: inputs only, PCs only, inputs plus the PCs that
//! reach 95% of the variance, and everything.

use std::path::PathBuf;

use spadplus::eval::{auc, prepare_split};
use spadplus::{load_csv, AnomalyDetector, PcaTransform, ScoreVariant, SpadPlusModel};

fn main() -> spadplus::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/pima.csv");
    let data = load_csv(path, "class", "positive")?;
    let mut totals = [0.0; 4];
    let seeds = 0..10u64;
    for seed in seeds.clone() {
        let split = prepare_split(&data, seed)?;
        let model = SpadPlusModel::fit(split.train.view(), None)?;
        let top = PcaTransform::fit(split.train.view())?.components_for_variance(0.95);
        let variants = [
            ScoreVariant::InputOnly,
            ScoreVariant::PcsOnly,
            ScoreVariant::TopPcs(top),
            ScoreVariant::Full,
        ];
        for (total, v) in totals.iter_mut().zip(variants) {
            let out = model
                .clone()
                .with_variant(v)?
                .score_rows(split.test.view())?;
            *total += auc(&out, &split.test_labels)?;
        }
    }
    let n = seeds.count() as f64;
    for (name, total) in ["input_only", "pcs_only", "top PCs (95%)", "full"]
        .iter()
        .zip(totals)
    {
        println!("{name:<14} mean AUC {:.4}", total / n);
    }
    Ok(())
}
