//! All five detectors on the bundled Pima and Ionosphere copies, averaged over
//! ten split seeds.
//!
//!     cargo run --release --example uci_benchmark [repeats]

use std::path::PathBuf;

use spadplus::eval::{benchmark, BenchmarkConfig, Timing};
use spadplus::{load_csv, BenchmarkReport, DetectorConfig, DetectorKind};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn main() -> spadplus::Result<()> {
    let repeats: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    let detectors: Vec<DetectorConfig> = DetectorKind::ALL
        .into_iter()
        .map(DetectorConfig::new)
        .collect();

    let mut per_seed = BenchmarkReport::default();
    for (name, file, anomaly) in [
        ("Pima", "pima.csv", "positive"),
        ("Ionosphere", "ionosphere.csv", "b"),
    ] {
        let data = load_csv(data_dir().join(file), "class", anomaly)?;
        println!(
            "{name}: {} rows, {} features, {} anomalies",
            data.n_rows(),
            data.n_features(),
            data.anomaly_count()
        );
        for split_seed in 0..repeats as u64 {
            let config = BenchmarkConfig::new(1, split_seed * 1000);
            per_seed.extend(benchmark(name, &data, &detectors, &config)?);
        }
    }

    // one row per (detector, dataset): mean over split seeds
    let mut summary = BenchmarkReport::default();
    for dataset in per_seed.datasets() {
        for detector in per_seed.detectors() {
            let rows: Vec<_> = per_seed
                .rows()
                .iter()
                .filter(|r| r.dataset == dataset && r.detector == detector)
                .collect();
            let mut row = rows[0].clone();
            row.aucs = rows.iter().map(|r| r.mean_auc).collect();
            row.mean_auc = row.aucs.iter().sum::<f64>() / row.aucs.len() as f64;
            row.runs = rows.iter().map(|r| r.runs).sum();
            row.fit_seconds = rows.iter().map(|r| r.fit_seconds).sum();
            row.score_seconds = rows.iter().map(|r| r.score_seconds).sum();
            summary.push(row);
        }
    }
    println!();
    print!("{}", summary.to_markdown(Timing::Include));
    Ok(())
}
