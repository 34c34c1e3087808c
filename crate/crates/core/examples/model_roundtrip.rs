//! Save a fitted SPAD+ model with its normalization, load it back, and check
//! the scores agree bit for bit.

use spadplus::persist::{FittedModel, ModelFile};
use spadplus::synth::correlated_gaussian;
use spadplus::{MinMaxParams, SpadPlusModel};

fn main() -> spadplus::Result<()> {
    let data = correlated_gaussian(200, 0.8, 2, 3)?;
    let normalization = MinMaxParams::fit(data.values())?;
    let train = normalization.apply(data.values())?;
    let file = ModelFile {
        normalization,
        model: FittedModel::SpadPlus(SpadPlusModel::fit(train.view(), None)?),
    };

    let dir = std::env::temp_dir().join(format!("spadplus-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| spadplus::Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    let path = dir.join("model.txt");
    file.save(&path)?;
    let text = std::fs::read_to_string(&path).unwrap_or_default();
    println!("{}", text.lines().take(12).collect::<Vec<_>>().join("\n"));
    println!("... ({} lines)", text.lines().count());

    let loaded = ModelFile::load(&path)?;
    let before = file.score_raw(data.values())?;
    let after = loaded.score_raw(data.values())?;
    let same = before
        .iter()
        .zip(&after)
        .all(|(a, b)| a.to_bits() == b.to_bits());
    println!(
        "reloaded model identical: {}, scores identical: {same}",
        loaded == file
    );
    let _ = std::fs::remove_dir_all(&dir);
    Ok(())
}
