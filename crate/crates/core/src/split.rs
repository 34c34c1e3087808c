//! Semi-supervised train/test split: half the normals train, everything else tests.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Label, LabeledDataset};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct EvalSplit {
    /// Normal rows only.
    pub train: LabeledDataset,
    /// Remaining normals plus every anomaly.
    pub test: LabeledDataset,
    pub seed: u64,
    train_rows: Vec<usize>,
    test_rows: Vec<usize>,
}

impl EvalSplit {
    /// Source-row indices of the training set, ascending.
    pub fn train_rows(&self) -> &[usize] {
        &self.train_rows
    }

    /// Source-row indices of the test set, ascending.
    pub fn test_rows(&self) -> &[usize] {
        &self.test_rows
    }
}

/// Shuffles the normal rows with a ChaCha8 permutation keyed on `seed` and
/// takes the first ⌊normals/2⌋ as training data. Both halves keep source
/// order, so the test set interleaves normals and anomalies as in the input.
pub fn semi_supervised_split(data: &LabeledDataset, seed: u64) -> Result<EvalSplit> {
    let mut normals: Vec<usize> = data
        .labels()
        .iter()
        .enumerate()
        .filter(|(_, l)| **l == Label::Normal)
        .map(|(i, _)| i)
        .collect();
    if normals.len() < 2 {
        return Err(Error::TooFewNormals(normals.len()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    normals.shuffle(&mut rng);
    let n_train = normals.len() / 2;

    let mut in_train = vec![false; data.n_rows()];
    for &i in &normals[..n_train] {
        in_train[i] = true;
    }
    let (train_rows, test_rows): (Vec<usize>, Vec<usize>) =
        (0..data.n_rows()).partition(|&i| in_train[i]);

    Ok(EvalSplit {
        train: data.select_rows(&train_rows),
        test: data.select_rows(&test_rows),
        seed,
        train_rows,
        test_rows,
    })
}
