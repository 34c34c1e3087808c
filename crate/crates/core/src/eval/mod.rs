//! ROC AUC, the repeated-run benchmark protocol and its reports.

mod auc;
mod bench;
mod report;

pub use auc::{auc, auc_from_scores};
pub use bench::{
    benchmark, prepare_split, run_once, BenchmarkConfig, DetectorConfig, DetectorKind, PcAugmented,
    PreparedSplit, RunResult,
};
pub use report::{BenchmarkReport, BenchmarkRow, Timing};
