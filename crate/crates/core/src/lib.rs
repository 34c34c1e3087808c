//! Histogram-based anomaly detection with principal-component features.
//!
//! The crate implements SPAD, a detector that scores an instance by the sum of
//! log smoothed bin masses over per-dimension equal-width histograms, and
//! SPAD+, which applies the same histograms to the input features together
//! with all principal components of the training data. Three comparison
//! detectors (LOF, isolation forest and Sp) share the same [`AnomalyDetector`]
//! contract, and the [`eval`] module runs the semi-supervised benchmark
//! protocol: fit on half of the normal rows, rank the remaining normals plus
//! every anomaly, report ROC AUC and wall time.
//!
//! ```
//! use ndarray::array;
//! use spadplus::{AnomalyDetector, SpadPlusModel};
//!
//! let train = array![[0.0, 0.1], [0.2, 0.2], [0.4, 0.5], [0.6, 0.6], [0.8, 0.7], [1.0, 1.0]];
//! let model = SpadPlusModel::fit(train.view(), None).unwrap();
//! let typical = model.score(&[0.5, 0.5]).unwrap();
//! let odd = model.score(&[0.9, 0.1]).unwrap();
//! assert!(odd < typical); // lower is more anomalous
//! ```

pub mod baselines;
pub mod cli;
pub mod dataset;
pub mod detector;
pub mod error;
pub mod eval;
pub mod histogram;
pub mod normalize;
pub mod pca;
pub mod persist;
pub mod split;
pub mod synth;

pub use baselines::{IForestModel, LofModel, SpModel};
pub use dataset::{load_csv, Label, LabeledDataset};
pub use detector::{AnomalyDetector, DetectorOutput, Orientation};
pub use error::{Error, Result};
pub use eval::{auc, BenchmarkReport, DetectorConfig, DetectorKind};
pub use histogram::{default_bin_count, HistogramModel};
pub use normalize::MinMaxParams;
pub use pca::{PcaTransform, ScoreVariant, SpadPlusModel};
pub use split::{semi_supervised_split, EvalSplit};
