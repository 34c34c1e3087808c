use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

use spadplus::cli::parse_scores;
use spadplus::persist::ModelFile;
use spadplus::{load_csv, AnomalyDetector, MinMaxParams, SpadPlusModel};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spadplus"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn spadplus")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn synth(dir: &TempDir, name: &str, rho: &str, planted: &str, seed: &str) -> PathBuf {
    let out = path(dir, name);
    let o = run(&[
        "synth",
        "--n-points",
        "1000",
        "--rho",
        rho,
        "--n-planted",
        planted,
        "--seed",
        seed,
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// `(detector, mean_auc)` rows of a report CSV.
fn report_aucs(csv: &str) -> Vec<(String, f64)> {
    csv.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_owned(), f[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn synth_output_loads_with_labels() {
    let dir = tempfile::tempdir().unwrap();
    let file = synth(&dir, "s.csv", "0.95", "3", "1");
    let d = load_csv(&file, "class", "anomaly").unwrap();
    assert_eq!(d.n_rows(), 1003);
    assert_eq!(d.n_features(), 2);
    assert_eq!(d.anomaly_count(), 3);
    let again = synth(&dir, "t.csv", "0.95", "3", "1");
    assert_eq!(std::fs::read(file).unwrap(), std::fs::read(again).unwrap());
}

#[test]
fn fit_score_roundtrip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let data_path = synth(&dir, "s.csv", "0.9", "5", "4");
    let model_path = path(&dir, "m.txt");
    let scores_path = path(&dir, "scores.csv");

    let o = run(&[
        "fit",
        "--input",
        s(&data_path),
        "--label-col",
        "class",
        "--out",
        s(&model_path),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run(&[
        "score",
        "--model",
        s(&model_path),
        "--input",
        s(&data_path),
        "--label-col",
        "class",
        "--out",
        s(&scores_path),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&scores_path).unwrap();
    assert!(text.starts_with("id,score\n"));
    let (ids, scores) = parse_scores(&text).unwrap();
    assert_eq!(ids, (0..1005).collect::<Vec<_>>());

    // same pipeline in memory: normalize on normals, fit, score every row
    let data = load_csv(&data_path, "class", "anomaly").unwrap();
    let normals: Vec<usize> = (0..data.n_rows())
        .filter(|&i| !data.labels()[i].is_anomaly())
        .collect();
    let train_raw = data.select_rows(&normals);
    let norm = MinMaxParams::fit(train_raw.values()).unwrap();
    let model = SpadPlusModel::fit(norm.apply(train_raw.values()).unwrap().view(), None).unwrap();
    let expected = model
        .score_rows(norm.apply(data.values()).unwrap().view())
        .unwrap();
    for (a, b) in scores.iter().zip(expected.scores()) {
        assert_eq!(a.to_bits(), b.to_bits());
    }

    let saved = ModelFile::load(&model_path).unwrap();
    let (lo, hi) = model.score_bounds();
    assert!(saved
        .score_raw(train_raw.values())
        .unwrap()
        .iter()
        .all(|&v| lo <= v && v <= hi));
}

#[test]
fn spad_model_and_stdout_scores() {
    let dir = tempfile::tempdir().unwrap();
    let data_path = synth(&dir, "s.csv", "0.5", "2", "2");
    let model_path = path(&dir, "m.txt");
    let o = run(&[
        "fit",
        "--input",
        s(&data_path),
        "--label-col",
        "class",
        "--detector",
        "spad",
        "--b",
        "6",
        "--out",
        s(&model_path),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(std::fs::read_to_string(&model_path)
        .unwrap()
        .contains("\ndetector spad\n"));
    let o = run(&[
        "score",
        "--model",
        s(&model_path),
        "--input",
        s(&data_path),
        "--label-col",
        "class",
    ]);
    assert!(o.status.success());
    let (ids, _) = parse_scores(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(ids.len(), 1002);

    // variants only exist for spad+
    let o = run(&[
        "score",
        "--model",
        s(&model_path),
        "--input",
        s(&data_path),
        "--label-col",
        "class",
        "--variant",
        "pcs-only",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mismatched_dimensions_fail_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let data_path = synth(&dir, "s.csv", "0.9", "1", "0");
    let model_path = path(&dir, "m.txt");
    assert!(run(&[
        "fit",
        "--input",
        s(&data_path),
        "--label-col",
        "class",
        "--out",
        s(&model_path)
    ])
    .status
    .success());
    let wide = path(&dir, "wide.csv");
    std::fs::write(&wide, "a,b,c\n1,2,3\n4,5,6\n").unwrap();
    let o = run(&["score", "--model", s(&model_path), "--input", s(&wide)]);
    assert_eq!(o.status.code(), Some(5));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("dimension mismatch"), "{err}");
}

#[test]
fn exit_codes_by_failure_class() {
    let dir = tempfile::tempdir().unwrap();
    let missing = path(&dir, "nope.csv");
    let o = run(&["bench", "--input", s(&missing)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let bad = path(&dir, "bad.csv");
    std::fs::write(&bad, "a,b,class\n1,2,n\n3,abc,anomaly\n").unwrap();
    let o = run(&["bench", "--input", s(&bad)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("row 2, column \"b\""), "{}", stderr(&o));

    let data_path = synth(&dir, "s.csv", "0.9", "1", "0");
    let o = run(&[
        "bench",
        "--input",
        s(&data_path),
        "--detector",
        "spad",
        "--psi",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["bench", "--input", s(&data_path), "--variant", "top-m-pcs"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["synth", "--rho", "1.5", "--out", s(&path(&dir, "x.csv"))]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["bench", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));

    let garbage = path(&dir, "model.txt");
    std::fs::write(&garbage, "not a model\n").unwrap();
    let o = run(&["score", "--model", s(&garbage), "--input", s(&data_path)]);
    assert_eq!(o.status.code(), Some(4));

    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn bench_shapes_and_variant_routing() {
    let dir = tempfile::tempdir().unwrap();
    let data_path = synth(&dir, "corr.csv", "0.95", "40", "3");
    let prefix = path(&dir, "all");
    let o = run(&[
        "bench",
        "--input",
        s(&data_path),
        "--repeats",
        "2",
        "--out",
        s(&prefix),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(path(&dir, "all.csv")).unwrap();
    let rows = report_aucs(&csv);
    let names: Vec<&str> = rows.iter().map(|r| r.0.as_str()).collect();
    assert_eq!(names, ["LOF", "iforest", "Sp", "SPAD", "SPAD+"]);
    let md = std::fs::read_to_string(path(&dir, "all.md")).unwrap();
    assert!(md.contains("| corr |"));
    assert!(md.contains("Total runtime"));

    // correlation-violating points: PCs help
    let spad = rows[3].1;
    let plus = rows[4].1;
    assert!(plus > spad, "SPAD+ {plus} vs SPAD {spad}");

    let o = run(&[
        "bench",
        "--input",
        s(&data_path),
        "--detector",
        "spad+",
        "--variant",
        "pcs-only",
        "--repeats",
        "3",
        "--no-timing",
        "--out",
        s(&path(&dir, "pcs")),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(path(&dir, "pcs.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("SPAD+ [pcs_only],corr,"));
    assert!(!csv.contains("seconds"));
}

#[test]
fn bench_with_pcs_and_several_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let a = synth(&dir, "a.csv", "0.8", "10", "1");
    let b = synth(&dir, "b.csv", "-0.8", "10", "2");
    let o = run(&[
        "bench",
        "--input",
        s(&a),
        "--input",
        s(&b),
        "--detector",
        "sp",
        "--detector",
        "spad",
        "--with-pcs",
        "--psi",
        "16",
        "--no-timing",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let md = String::from_utf8(o.stdout).unwrap();
    assert!(md.contains("| Name | Sp+PCs | SPAD |"), "{md}");
    assert!(md.contains("| a |") && md.contains("| b |"));
}

/// With no correlation there is nothing to violate: neither histogram
/// detector flags the planted points. They sit within 1σ on both axes, so they
/// are if anything denser than an average normal and the AUC lands at or
/// somewhat below 0.5, depending on where bin edges fall.
#[test]
fn uncorrelated_scenario_is_unremarkable() {
    let dir = tempfile::tempdir().unwrap();
    let mut all = Vec::new();
    for seed in ["1", "2", "3", "4", "5"] {
        let data_path = synth(&dir, "flat.csv", "0", "100", seed);
        let prefix = path(&dir, "flat");
        let o = run(&[
            "bench",
            "--input",
            s(&data_path),
            "--detector",
            "spad",
            "--detector",
            "spad+",
            "--no-timing",
            "--out",
            s(&prefix),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        for (det, auc) in report_aucs(&std::fs::read_to_string(path(&dir, "flat.csv")).unwrap()) {
            assert!(auc < 0.6, "seed {seed}: {det} AUC {auc}");
            all.push(auc);
        }
    }
    let mean = all.iter().sum::<f64>() / all.len() as f64;
    assert!((mean - 0.5).abs() < 0.2, "mean AUC {mean}");
}

#[test]
fn pima_bench_reports_all_detectors() {
    let dir = tempfile::tempdir().unwrap();
    let pima = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/pima.csv");
    let prefix = path(&dir, "pima");
    let o = run(&[
        "bench",
        "--input",
        s(&pima),
        "--anomaly-value",
        "positive",
        "--repeats",
        "10",
        "--out",
        s(&prefix),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(path(&dir, "pima.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 10);
        assert_eq!(fields[3].split(';').count(), 10);
    }
}
