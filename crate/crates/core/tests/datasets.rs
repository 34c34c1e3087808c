use std::path::PathBuf;

use spadplus::eval::{benchmark, BenchmarkConfig};
use spadplus::{
    default_bin_count, load_csv, semi_supervised_split, DetectorConfig, DetectorKind,
    LabeledDataset,
};

fn data(file: &str, anomaly: &str) -> LabeledDataset {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(file);
    load_csv(p, "class", anomaly).unwrap()
}

#[test]
fn pima_shape_and_split() {
    let d = data("pima.csv", "positive");
    assert_eq!(
        (d.n_rows(), d.n_features(), d.anomaly_count()),
        (768, 8, 268)
    );
    let s = semi_supervised_split(&d, 3).unwrap();
    assert_eq!(s.train.n_rows(), 250);
    assert_eq!((s.test.normal_count(), s.test.anomaly_count()), (250, 268));
    assert_eq!(default_bin_count(250), 8);
}

#[test]
fn ionosphere_shape_and_split() {
    let d = data("ionosphere.csv", "b");
    assert_eq!(
        (d.n_rows(), d.n_features(), d.anomaly_count()),
        (351, 33, 126)
    );
    let s = semi_supervised_split(&d, 0).unwrap();
    assert_eq!(s.train.n_rows(), 112);
    assert_eq!((s.test.normal_count(), s.test.anomaly_count()), (113, 126));
    assert_eq!(default_bin_count(112), 7);
}

#[test]
fn deterministic_detectors_repeat_their_auc() {
    let pima = data("pima.csv", "positive");
    let iono = data("ionosphere.csv", "b");
    let detectors: Vec<DetectorConfig> = DetectorKind::ALL
        .into_iter()
        .map(DetectorConfig::new)
        .collect();
    let config = BenchmarkConfig::new(10, 5);
    let mut report = benchmark("pima", &pima, &detectors, &config).unwrap();
    report.extend(benchmark("ionosphere", &iono, &detectors, &config).unwrap());
    assert_eq!(report.rows().len(), 10);
    for row in report.rows() {
        assert_eq!(row.aucs.len(), 10);
        assert!((0.0..=1.0).contains(&row.mean_auc));
        assert!(row.total_seconds() > 0.0);
        let kind: DetectorKind = row.detector.parse().unwrap();
        if kind.is_random() {
            assert_eq!(row.runs, 10);
            assert_eq!(row.detector_seeds, (6..=15).collect::<Vec<u64>>());
        } else {
            assert_eq!(row.runs, 1);
            assert!(row.aucs.iter().all(|&a| a == row.aucs[0]));
        }
    }
}
