use ndarray::ArrayView2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::detector::{AnomalyDetector, Orientation};
use crate::error::{Error, Result};

/// `H(n) = 1 + 1/2 + ... + 1/n`; `H(0) = 0`.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}

/// `c(m) = 2 (H(m − 1) − (m − 1)/m)`, the expected path length of an
/// unsuccessful search among `m` points; 0 for `m ≤ 1`.
pub fn average_path_length(m: usize) -> f64 {
    if m <= 1 {
        return 0.0;
    }
    let m1 = (m - 1) as f64;
    2.0 * (harmonic(m - 1) - m1 / m as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Internal {
        dim: usize,
        split: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        size: usize,
    },
}

/// Nodes in an arena; index 0 is the root.
#[derive(Debug, Clone, PartialEq)]
pub struct IsolationTree {
    nodes: Vec<Node>,
}

impl IsolationTree {
    fn build(
        train: ArrayView2<'_, f64>,
        rows: &mut [usize],
        height_limit: usize,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let mut tree = IsolationTree { nodes: Vec::new() };
        tree.grow(train, rows, 0, height_limit, rng);
        tree
    }

    fn grow(
        &mut self,
        train: ArrayView2<'_, f64>,
        rows: &mut [usize],
        depth: usize,
        height_limit: usize,
        rng: &mut ChaCha8Rng,
    ) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { size: rows.len() });
        if rows.len() <= 1 || depth >= height_limit {
            return id;
        }

        let spreads: Vec<(usize, f64, f64)> = (0..train.ncols())
            .filter_map(|d| {
                let (lo, hi) =
                    rows.iter()
                        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| {
                            let v = train[[r, d]];
                            (lo.min(v), hi.max(v))
                        });
                (hi > lo).then_some((d, lo, hi))
            })
            .collect();
        if spreads.is_empty() {
            return id;
        }
        let (dim, lo, hi) = spreads[rng.random_range(0..spreads.len())];
        let mut split = rng.random_range(lo..hi);
        while split <= lo {
            split = rng.random_range(lo..hi);
        }

        // partition in place: value < split goes left
        let mut mid = 0;
        for i in 0..rows.len() {
            if train[[rows[i], dim]] < split {
                rows.swap(i, mid);
                mid += 1;
            }
        }
        let (left_rows, right_rows) = rows.split_at_mut(mid);
        let left = self.grow(train, left_rows, depth + 1, height_limit, rng);
        let right = self.grow(train, right_rows, depth + 1, height_limit, rng);
        self.nodes[id] = Node::Internal {
            dim,
            split,
            left,
            right,
        };
        id
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// `(edges from root, leaf size)` for the leaf `x` reaches.
    pub fn route(&self, x: &[f64]) -> (usize, usize) {
        let mut id = 0;
        let mut depth = 0;
        loop {
            match self.nodes[id] {
                Node::Leaf { size } => return (depth, size),
                Node::Internal {
                    dim,
                    split,
                    left,
                    right,
                } => {
                    id = if x[dim] < split { left } else { right };
                    depth += 1;
                }
            }
        }
    }

    /// Edge count to the leaf plus `c(size)` for leaves holding more than one row.
    pub fn path_length(&self, x: &[f64]) -> f64 {
        let (depth, size) = self.route(x);
        depth as f64 + average_path_length(size)
    }

    /// Longest root-to-leaf edge count.
    pub fn height(&self) -> usize {
        fn walk(nodes: &[Node], id: usize) -> usize {
            match nodes[id] {
                Node::Leaf { .. } => 0,
                Node::Internal { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Training rows the tree was built from.
    pub fn sample_size(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| match n {
                Node::Leaf { size } => *size,
                Node::Internal { .. } => 0,
            })
            .sum()
    }
}

/// Isolation forest scored by mean path length; shorter paths are more anomalous.
#[derive(Debug, Clone, PartialEq)]
pub struct IForestModel {
    trees: Vec<IsolationTree>,
    subsample_size: usize,
    height_limit: usize,
    n_features: usize,
    seed: u64,
}

impl IForestModel {
    pub const DEFAULT_TREES: usize = 100;
    pub const DEFAULT_SUBSAMPLE: usize = 256;

    /// Each tree is grown on `min(psi, N)` rows drawn without replacement, up
    /// to height `⌊log2 min(psi, N)⌋`.
    pub fn fit(train: ArrayView2<'_, f64>, trees: usize, psi: usize, seed: u64) -> Result<Self> {
        let n = train.nrows();
        if n < 2 {
            return Err(Error::TooFewRows {
                required: 2,
                found: n,
            });
        }
        if trees == 0 || psi < 2 {
            return Err(Error::InvalidParameter(format!(
                "isolation forest needs trees >= 1 and psi >= 2, got {trees} and {psi}"
            )));
        }
        let subsample_size = psi.min(n);
        let height_limit = subsample_size.ilog2() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let trees = (0..trees)
            .map(|_| {
                let mut rows = rand::seq::index::sample(&mut rng, n, subsample_size).into_vec();
                IsolationTree::build(train, &mut rows, height_limit, &mut rng)
            })
            .collect();
        Ok(IForestModel {
            trees,
            subsample_size,
            height_limit,
            n_features: train.ncols(),
            seed,
        })
    }

    pub fn trees(&self) -> &[IsolationTree] {
        &self.trees
    }

    pub fn subsample_size(&self) -> usize {
        self.subsample_size
    }

    pub fn height_limit(&self) -> usize {
        self.height_limit
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl AnomalyDetector for IForestModel {
    fn orientation(&self) -> Orientation {
        Orientation::LowerIsAnomalous
    }

    fn n_features(&self) -> usize {
        self.n_features
    }

    fn score(&self, x: &[f64]) -> Result<f64> {
        Error::check_dims(self.n_features, x.len())?;
        let total: f64 = self.trees.iter().map(|t| t.path_length(x)).sum();
        Ok(total / self.trees.len() as f64)
    }
}
