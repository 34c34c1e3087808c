use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use ndarray::{concatenate, Array2, ArrayView2, Axis};

use crate::baselines::{IForestModel, LofModel, SpModel};
use crate::dataset::{Label, LabeledDataset};
use crate::detector::{AnomalyDetector, Orientation};
use crate::error::{Error, Result};
use crate::histogram::HistogramModel;
use crate::normalize::MinMaxParams;
use crate::pca::{PcaTransform, ScoreVariant, SpadPlusModel};
use crate::split::semi_supervised_split;

use super::auc::auc;
use super::report::{BenchmarkReport, BenchmarkRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorKind {
    Lof,
    IForest,
    Sp,
    Spad,
    SpadPlus,
}

impl DetectorKind {
    /// Report column order.
    pub const ALL: [DetectorKind; 5] = [
        DetectorKind::Lof,
        DetectorKind::IForest,
        DetectorKind::Sp,
        DetectorKind::Spad,
        DetectorKind::SpadPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DetectorKind::Lof => "LOF",
            DetectorKind::IForest => "iforest",
            DetectorKind::Sp => "Sp",
            DetectorKind::Spad => "SPAD",
            DetectorKind::SpadPlus => "SPAD+",
        }
    }

    /// Whether fitting consumes a seed.
    pub fn is_random(self) -> bool {
        matches!(self, DetectorKind::IForest | DetectorKind::Sp)
    }

    pub fn is_histogram(self) -> bool {
        matches!(self, DetectorKind::Spad | DetectorKind::SpadPlus)
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lof" => Ok(DetectorKind::Lof),
            "iforest" | "if" => Ok(DetectorKind::IForest),
            "sp" => Ok(DetectorKind::Sp),
            "spad" => Ok(DetectorKind::Spad),
            "spad+" | "spadplus" | "spad-plus" => Ok(DetectorKind::SpadPlus),
            other => Err(Error::InvalidParameter(format!(
                "unknown detector {other:?}"
            ))),
        }
    }
}

/// A detector and its parameters. Unset overrides fall back to the defaults:
/// LOF `k = ⌊√N⌋`, iforest `t = 100, ψ = 256`, Sp `ψ = 25`, histograms
/// `b = ⌊log2 N⌋ + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    pub kind: DetectorKind,
    pub bins: Option<usize>,
    pub k: Option<usize>,
    pub trees: Option<usize>,
    pub psi: Option<usize>,
    /// SPAD+ only.
    pub variant: ScoreVariant,
    /// Append all principal components to the inputs (LOF, iforest, Sp only).
    pub with_pcs: bool,
}

impl DetectorConfig {
    pub fn new(kind: DetectorKind) -> Self {
        DetectorConfig {
            kind,
            bins: None,
            k: None,
            trees: None,
            psi: None,
            variant: ScoreVariant::Full,
            with_pcs: false,
        }
    }

    pub fn label(&self) -> String {
        let mut s = self.kind.name().to_owned();
        if self.with_pcs {
            s.push_str("+PCs");
        }
        if self.variant != ScoreVariant::Full {
            s.push_str(&format!(" [{}]", self.variant.name()));
        }
        s
    }

    /// Rejects overrides that do not apply to this detector.
    pub fn validate(&self) -> Result<()> {
        let kind = self.kind;
        let reject = |what: &str| {
            Err(Error::InvalidParameter(format!(
                "{what} does not apply to {kind}"
            )))
        };
        if self.bins.is_some() && !kind.is_histogram() {
            return reject("bin count");
        }
        if self.k.is_some() && kind != DetectorKind::Lof {
            return reject("k");
        }
        if self.trees.is_some() && kind != DetectorKind::IForest {
            return reject("tree count");
        }
        if self.psi.is_some() && !kind.is_random() {
            return reject("psi");
        }
        if self.variant != ScoreVariant::Full && kind != DetectorKind::SpadPlus {
            return reject("score variant");
        }
        if self.with_pcs && kind.is_histogram() {
            return reject("PC augmentation");
        }
        Ok(())
    }

    pub fn fit(&self, train: ArrayView2<'_, f64>, seed: u64) -> Result<Box<dyn AnomalyDetector>> {
        self.validate()?;
        if self.with_pcs {
            let transform = PcaTransform::fit(train)?;
            let augmented = concatenate(Axis(1), &[train, transform.transform_rows(train)?.view()])
                .expect("row counts match");
            let inner = self.fit_plain(augmented.view(), seed)?;
            return Ok(Box::new(PcAugmented { transform, inner }));
        }
        self.fit_plain(train, seed)
    }

    fn fit_plain(&self, train: ArrayView2<'_, f64>, seed: u64) -> Result<Box<dyn AnomalyDetector>> {
        Ok(match self.kind {
            DetectorKind::Lof => Box::new(LofModel::fit(train, self.k)?),
            DetectorKind::IForest => Box::new(IForestModel::fit(
                train,
                self.trees.unwrap_or(IForestModel::DEFAULT_TREES),
                self.psi.unwrap_or(IForestModel::DEFAULT_SUBSAMPLE),
                seed,
            )?),
            DetectorKind::Sp => Box::new(SpModel::fit(
                train,
                self.psi.unwrap_or(SpModel::DEFAULT_SUBSAMPLE),
                seed,
            )?),
            DetectorKind::Spad => Box::new(HistogramModel::fit(train, self.bins)?),
            DetectorKind::SpadPlus => {
                Box::new(SpadPlusModel::fit(train, self.bins)?.with_variant(self.variant)?)
            }
        })
    }
}

/// Scores `[x, x′]` with an inner detector fitted on inputs plus principal components.
pub struct PcAugmented {
    transform: PcaTransform,
    inner: Box<dyn AnomalyDetector>,
}

impl AnomalyDetector for PcAugmented {
    fn orientation(&self) -> Orientation {
        self.inner.orientation()
    }

    fn n_features(&self) -> usize {
        self.transform.n_features()
    }

    fn score(&self, x: &[f64]) -> Result<f64> {
        let mut joined = x.to_vec();
        joined.extend(self.transform.transform(x)?);
        self.inner.score(&joined)
    }
}

/// A split after min-max normalization fitted on its training half.
#[derive(Debug, Clone)]
pub struct PreparedSplit {
    pub train: Array2<f64>,
    pub test: Array2<f64>,
    pub test_labels: Vec<Label>,
    pub normalization: MinMaxParams,
    pub split_seed: u64,
}

pub fn prepare_split(data: &LabeledDataset, split_seed: u64) -> Result<PreparedSplit> {
    let split = semi_supervised_split(data, split_seed)?;
    let normalization = MinMaxParams::fit(split.train.values())?;
    Ok(PreparedSplit {
        train: normalization.apply(split.train.values())?,
        test: normalization.apply(split.test.values())?,
        test_labels: split.test.labels().to_vec(),
        normalization,
        split_seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunResult {
    pub auc: f64,
    pub fit_seconds: f64,
    pub score_seconds: f64,
}

/// Fits on the training half, scores the test half, and times both phases.
pub fn run_once(config: &DetectorConfig, split: &PreparedSplit, seed: u64) -> Result<RunResult> {
    let wrap = |e: Error| Error::Detector {
        name: config.label(),
        source: Box::new(e),
    };
    let start = Instant::now();
    let detector = config.fit(split.train.view(), seed).map_err(wrap)?;
    let fitted = Instant::now();
    let output = detector.score_rows(split.test.view()).map_err(wrap)?;
    let scored = Instant::now();
    Ok(RunResult {
        auc: auc(&output, &split.test_labels).map_err(wrap)?,
        fit_seconds: (fitted - start).as_secs_f64(),
        score_seconds: (scored - fitted).as_secs_f64(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub repeats: usize,
    pub split_seed: u64,
    /// One seed per repeat for random detectors.
    pub detector_seeds: Vec<u64>,
}

impl BenchmarkConfig {
    /// Detector seeds `split_seed + 1, ..., split_seed + repeats`.
    pub fn new(repeats: usize, split_seed: u64) -> Self {
        BenchmarkConfig {
            repeats,
            split_seed,
            detector_seeds: (1..=repeats as u64)
                .map(|r| split_seed.wrapping_add(r))
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::InvalidParameter("repeats must be at least 1".into()));
        }
        if self.detector_seeds.len() != self.repeats {
            return Err(Error::InvalidParameter(format!(
                "{} detector seeds for {} repeats",
                self.detector_seeds.len(),
                self.repeats
            )));
        }
        let mut sorted = self.detector_seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.repeats {
            return Err(Error::InvalidParameter(
                "detector seeds must be distinct".into(),
            ));
        }
        Ok(())
    }
}

/// One split of `data`, shared by every detector. Random detectors run once
/// per seed; deterministic ones run once and their AUC is repeated.
/// Detectors run sequentially so timings do not overlap.
pub fn benchmark(
    dataset_name: &str,
    data: &LabeledDataset,
    detectors: &[DetectorConfig],
    config: &BenchmarkConfig,
) -> Result<BenchmarkReport> {
    config.validate()?;
    for d in detectors {
        d.validate()?;
    }
    let split = prepare_split(data, config.split_seed)?;
    let mut report = BenchmarkReport::default();
    for detector in detectors {
        let seeds: Vec<u64> = if detector.kind.is_random() {
            config.detector_seeds.clone()
        } else {
            vec![0]
        };
        let runs = seeds
            .iter()
            .map(|&seed| run_once(detector, &split, seed))
            .collect::<Result<Vec<_>>>()?;
        let aucs: Vec<f64> = if detector.kind.is_random() {
            runs.iter().map(|r| r.auc).collect()
        } else {
            vec![runs[0].auc; config.repeats]
        };
        report.push(BenchmarkRow {
            detector: detector.label(),
            dataset: dataset_name.to_owned(),
            mean_auc: aucs.iter().sum::<f64>() / aucs.len() as f64,
            aucs,
            split_seed: config.split_seed,
            detector_seeds: if detector.kind.is_random() {
                seeds
            } else {
                Vec::new()
            },
            runs: runs.len(),
            fit_seconds: runs.iter().map(|r| r.fit_seconds).sum(),
            score_seconds: runs.iter().map(|r| r.score_seconds).sum(),
        });
    }
    Ok(report)
}
