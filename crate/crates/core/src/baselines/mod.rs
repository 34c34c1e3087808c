//! Comparison detectors: local outlier factor, isolation forest and Sp.

mod iforest;
mod lof;
mod sp;

pub use iforest::{average_path_length, harmonic, IForestModel, IsolationTree, Node};
pub use lof::LofModel;
pub use sp::SpModel;

use ndarray::ArrayView1;

#[inline]
pub(crate) fn squared_distance(a: &[f64], b: ArrayView1<'_, f64>) -> f64 {
    match b.as_slice() {
        Some(b) => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum(),
        None => a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum(),
    }
}
