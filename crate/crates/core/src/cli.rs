//! The `spadplus` command line.
//!
//! Pipeline for `bench`: load → split → min-max fit on train → normalize both
//! halves → fit each detector on train → score test → AUC → report.

use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use crate::dataset::{load_csv, load_unlabeled_csv, write_csv, LabeledDataset};
use crate::detector::AnomalyDetector;
use crate::error::{Error, Result};
use crate::eval::{
    benchmark, BenchmarkConfig, BenchmarkReport, DetectorConfig, DetectorKind, Timing,
};
use crate::histogram::HistogramModel;
use crate::normalize::MinMaxParams;
use crate::pca::{ScoreVariant, SpadPlusModel};
use crate::persist::{FittedModel, ModelFile};
use crate::synth::correlated_gaussian;
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  invalid arguments or configuration
  3  file could not be read or written
  4  malformed input (CSV cell, label column, model file)
  5  detector or data error (dimension mismatch, too few rows, ...)";

#[derive(Debug, Parser)]
#[command(name = "spadplus", version, about = "Histogram anomaly detection with principal components", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit SPAD or SPAD+ on a CSV and save the model with its normalization.
    Fit(FitArgs),
    /// Score a CSV with a saved model; writes "id,score".
    Score(ScoreArgs),
    /// Split, fit and score detectors on labeled CSVs; report AUC and runtime.
    Bench(BenchArgs),
    /// Write a correlated 2-D Gaussian with planted anomalies.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Full,
    InputOnly,
    PcsOnly,
    TopMPcs,
}

#[derive(Debug, Args)]
pub struct VariantArgs {
    /// SPAD+ score terms.
    #[arg(long, value_enum, default_value = "full")]
    pub variant: VariantArg,
    /// Leading components kept by `--variant top-m-pcs`.
    #[arg(long)]
    pub top_m: Option<usize>,
}

impl VariantArgs {
    fn resolve(&self) -> Result<ScoreVariant> {
        match (self.variant, self.top_m) {
            (VariantArg::TopMPcs, Some(m)) => Ok(ScoreVariant::TopPcs(m)),
            (VariantArg::TopMPcs, None) => Err(config("--variant top-m-pcs needs --top-m")),
            (_, Some(_)) => Err(config("--top-m only applies to --variant top-m-pcs")),
            (VariantArg::Full, None) => Ok(ScoreVariant::Full),
            (VariantArg::InputOnly, None) => Ok(ScoreVariant::InputOnly),
            (VariantArg::PcsOnly, None) => Ok(ScoreVariant::PcsOnly),
        }
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Label column; rows carrying the anomaly value are left out of training.
    #[arg(long)]
    pub label_col: Option<String>,
    #[arg(long, default_value = "anomaly")]
    pub anomaly_value: String,
    /// spad or spad+.
    #[arg(long, default_value = "spad+")]
    pub detector: DetectorKind,
    /// Bins per dimension (default ⌊log2 N⌋ + 1).
    #[arg(long)]
    pub b: Option<usize>,
    /// Model file to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    /// Label column to drop before scoring.
    #[arg(long)]
    pub label_col: Option<String>,
    #[command(flatten)]
    pub variant: VariantArgs,
    /// Scores CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Labeled CSV; repeat for several datasets.
    #[arg(long, required = true)]
    pub input: Vec<PathBuf>,
    #[arg(long, default_value = "class")]
    pub label_col: String,
    #[arg(long, default_value = "anomaly")]
    pub anomaly_value: String,
    /// lof, iforest, sp, spad or spad+; repeat to select several (default all).
    #[arg(long)]
    pub detector: Vec<DetectorKind>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub trees: Option<usize>,
    #[arg(long)]
    pub psi: Option<usize>,
    /// Split seed; random detectors use seed+1 ..= seed+repeats.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    #[command(flatten)]
    pub variant: VariantArgs,
    /// Give LOF, iforest and Sp the principal components as extra features.
    #[arg(long)]
    pub with_pcs: bool,
    /// Leave wall-clock columns out of the report.
    #[arg(long)]
    pub no_timing: bool,
    /// Writes <out>.csv and <out>.md; markdown goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 1000)]
    pub n_points: usize,
    #[arg(long, default_value_t = 0.95, allow_negative_numbers = true)]
    pub rho: f64,
    #[arg(long, default_value_t = 1)]
    pub n_planted: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Label column is "class" with values normal/anomaly.
    #[arg(long)]
    pub out: PathBuf,
}

fn config(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Exit code for an error class.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_) => 2,
        Error::Io { .. } => 3,
        Error::Csv(e) if e.is_io_error() => 3,
        Error::Csv(_)
        | Error::ParseCell { .. }
        | Error::MissingLabelColumn(_)
        | Error::NoFeatures
        | Error::ModelFormat { .. } => 4,
        Error::Detector { source, .. } => exit_code(source).max(5),
        _ => 5,
    }
}

/// Parses `args` (program name first), runs the command, and maps failures
/// to an exit code with a one-line diagnostic on stderr.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spadplus: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fit(a) => cmd_fit(&a),
        Command::Score(a) => cmd_score(&a),
        Command::Bench(a) => cmd_bench(&a),
        Command::Synth(a) => cmd_synth(&a),
    }
}

fn cmd_fit(a: &FitArgs) -> Result<()> {
    let data = match &a.label_col {
        Some(col) => {
            let d = load_csv(&a.input, col, &a.anomaly_value)?;
            let normals: Vec<usize> = (0..d.n_rows())
                .filter(|&i| !d.labels()[i].is_anomaly())
                .collect();
            d.select_rows(&normals)
        }
        None => load_unlabeled_csv(&a.input)?,
    };
    if data.n_rows() == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    let normalization = MinMaxParams::fit(data.values())?;
    let train = normalization.apply(data.values())?;
    let model = match a.detector {
        DetectorKind::Spad => FittedModel::Spad(HistogramModel::fit(train.view(), a.b)?),
        DetectorKind::SpadPlus => FittedModel::SpadPlus(SpadPlusModel::fit(train.view(), a.b)?),
        other => {
            return Err(config(format!(
                "fit saves spad or spad+ models, not {other}"
            )))
        }
    };
    ModelFile {
        normalization,
        model,
    }
    .save(&a.out)
}

fn cmd_score(a: &ScoreArgs) -> Result<()> {
    let file = ModelFile::load(&a.model)?;
    let data = match &a.label_col {
        Some(col) => load_csv(&a.input, col, "")?,
        None => load_unlabeled_csv(&a.input)?,
    };
    let variant = a.variant.resolve()?;
    let detector: Box<dyn AnomalyDetector> = match (&file.model, variant) {
        (FittedModel::Spad(h), ScoreVariant::Full) => Box::new(h.clone()),
        (FittedModel::Spad(_), _) => return Err(config("--variant applies to spad+ models only")),
        (FittedModel::SpadPlus(m), v) => Box::new(m.clone().with_variant(v)?),
    };
    let normalized = file.normalization.apply(data.values())?;
    let scores = detector.score_rows(normalized.view())?;

    let mut out = String::from("id,score\n");
    for (i, s) in scores.scores().iter().enumerate() {
        out.push_str(&format!("{i},{s:?}\n"));
    }
    match &a.out {
        Some(path) => fs::write(path, out).map_err(|e| Error::io(path, e)),
        None => io::stdout()
            .write_all(out.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

/// Builds one detector config per selected kind, applying each override to
/// the detectors it fits and rejecting overrides that fit none of them.
pub fn bench_detectors(a: &BenchArgs) -> Result<Vec<DetectorConfig>> {
    let kinds: Vec<DetectorKind> = if a.detector.is_empty() {
        DetectorKind::ALL.to_vec()
    } else {
        a.detector.clone()
    };
    let variant = a.variant.resolve()?;
    let has = |pred: fn(DetectorKind) -> bool| kinds.iter().any(|&k| pred(k));
    type Check = (bool, &'static str, fn(DetectorKind) -> bool);
    let checks: [Check; 6] = [
        (
            a.b.is_some(),
            "--b (spad, spad+)",
            DetectorKind::is_histogram,
        ),
        (a.k.is_some(), "--k (lof)", |k| k == DetectorKind::Lof),
        (a.trees.is_some(), "--trees (iforest)", |k| {
            k == DetectorKind::IForest
        }),
        (
            a.psi.is_some(),
            "--psi (iforest, sp)",
            DetectorKind::is_random,
        ),
        (variant != ScoreVariant::Full, "--variant (spad+)", |k| {
            k == DetectorKind::SpadPlus
        }),
        (a.with_pcs, "--with-pcs (lof, iforest, sp)", |k| {
            !k.is_histogram()
        }),
    ];
    for (set, flag, applies) in checks {
        if set && !has(applies) {
            return Err(config(format!(
                "{flag} does not apply to the selected detectors"
            )));
        }
    }
    Ok(kinds
        .into_iter()
        .map(|kind| {
            let mut c = DetectorConfig::new(kind);
            if kind.is_histogram() {
                c.bins = a.b;
            }
            if kind == DetectorKind::Lof {
                c.k = a.k;
            }
            if kind == DetectorKind::IForest {
                c.trees = a.trees;
            }
            if kind.is_random() {
                c.psi = a.psi;
            }
            if kind == DetectorKind::SpadPlus {
                c.variant = variant;
            }
            c.with_pcs = a.with_pcs && !kind.is_histogram();
            c
        })
        .collect())
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn cmd_bench(a: &BenchArgs) -> Result<()> {
    let detectors = bench_detectors(a)?;
    let config = BenchmarkConfig::new(a.repeats, a.seed);
    config.validate()?;
    let timing = if a.no_timing {
        Timing::Exclude
    } else {
        Timing::Include
    };

    let mut report = BenchmarkReport::default();
    for path in &a.input {
        let data = load_csv(path, &a.label_col, &a.anomaly_value)?;
        report.extend(benchmark(&dataset_name(path), &data, &detectors, &config)?);
    }

    let markdown = report.to_markdown(timing);
    match &a.out {
        Some(prefix) => {
            let csv_path = with_suffix(prefix, "csv");
            let md_path = with_suffix(prefix, "md");
            fs::write(&csv_path, report.to_csv(timing)?).map_err(|e| Error::io(&csv_path, e))?;
            fs::write(&md_path, &markdown).map_err(|e| Error::io(&md_path, e))?;
        }
        None => io::stdout()
            .write_all(markdown.as_bytes())
            .map_err(|e| Error::io("<stdout>", e))?,
    }
    Ok(())
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn cmd_synth(a: &SynthArgs) -> Result<()> {
    let data: LabeledDataset = correlated_gaussian(a.n_points, a.rho, a.n_planted, a.seed)?;
    let file = File::create(&a.out).map_err(|e| Error::io(&a.out, e))?;
    write_csv(
        &data,
        io::BufWriter::new(file),
        "class",
        "normal",
        "anomaly",
    )
}

/// Shape of a score CSV: `(ids, scores)`, for tests and examples.
pub fn parse_scores(text: &str) -> Result<(Vec<usize>, Vec<f64>)> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut ids = Vec::new();
    let mut scores = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let cell = |c: usize, name: &str| -> Result<String> {
            rec.get(c)
                .map(str::to_owned)
                .ok_or_else(|| Error::ParseCell {
                    row: r + 1,
                    column: name.into(),
                    value: String::new(),
                })
        };
        let id = cell(0, "id")?;
        let score = cell(1, "score")?;
        ids.push(id.parse().map_err(|_| Error::ParseCell {
            row: r + 1,
            column: "id".into(),
            value: id.clone(),
        })?);
        scores.push(score.parse().map_err(|_| Error::ParseCell {
            row: r + 1,
            column: "score".into(),
            value: score.clone(),
        })?);
    }
    Ok((ids, scores))
}
