use std::cmp::Ordering;
use std::collections::BinaryHeap;

use ndarray::{Array2, ArrayView2};

use crate::detector::{AnomalyDetector, Orientation};
use crate::error::{Error, Result};

/// Local outlier factor against a fixed training set.
///
/// Neighbourhoods include every training point within the k-distance, so
/// ties can make them larger than `k`. Training neighbourhoods exclude the
/// point itself. Distances are brute force.
#[derive(Debug, Clone, PartialEq)]
pub struct LofModel {
    train: Array2<f64>,
    k: usize,
    k_distance: Vec<f64>,
    lrd: Vec<f64>,
}

struct MaxF64(f64);

impl PartialEq for MaxF64 {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for MaxF64 {}

impl PartialOrd for MaxF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MaxF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// k-th smallest squared distance from `x` to the rows of `flat`, skipping
/// row `skip`.
fn kth_squared(x: &[f64], flat: &[f64], m: usize, k: usize, skip: Option<usize>) -> f64 {
    let mut heap: BinaryHeap<MaxF64> = BinaryHeap::with_capacity(k + 1);
    for (j, y) in flat.chunks_exact(m).enumerate() {
        if Some(j) == skip {
            continue;
        }
        let d = sq(x, y);
        if heap.len() < k {
            heap.push(MaxF64(d));
        } else if let Some(mut top) = heap.peek_mut() {
            if d < top.0 {
                *top = MaxF64(d);
            }
        }
    }
    heap.peek().map_or(f64::INFINITY, |t| t.0)
}

#[inline]
fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `Σ lrd(y) / (|N| · lrd(x))` with `finite/∞ = 0`, `∞/∞ = 1`, and
/// `∞/finite` saturating at `f64::MAX`.
fn lof_ratio(sum_lrd: f64, count: usize, lrd_x: f64) -> f64 {
    match (sum_lrd.is_infinite(), lrd_x.is_infinite()) {
        (false, true) => 0.0,
        (true, true) => 1.0,
        (true, false) => f64::MAX,
        (false, false) => sum_lrd / (count as f64 * lrd_x),
    }
}

impl LofModel {
    /// `⌊√N⌋`, at least 1.
    pub fn default_k(n: usize) -> usize {
        n.isqrt().max(1)
    }

    pub fn fit(train: ArrayView2<'_, f64>, k: Option<usize>) -> Result<Self> {
        let n = train.nrows();
        let k = k.unwrap_or_else(|| Self::default_k(n));
        if k == 0 {
            return Err(Error::InvalidParameter("LOF k must be at least 1".into()));
        }
        if n <= k {
            return Err(Error::TooFewRows {
                required: k + 1,
                found: n,
            });
        }
        let train = train.as_standard_layout().into_owned();
        let m = train.ncols();
        let flat = train.as_slice().expect("standard layout");

        let kth_sq: Vec<f64> = flat
            .chunks_exact(m)
            .enumerate()
            .map(|(i, x)| kth_squared(x, flat, m, k, Some(i)))
            .collect();
        let k_distance: Vec<f64> = kth_sq.iter().map(|d| d.sqrt()).collect();

        let lrd = flat
            .chunks_exact(m)
            .enumerate()
            .map(|(i, x)| {
                let mut count = 0usize;
                let mut reach = 0.0;
                for (j, y) in flat.chunks_exact(m).enumerate() {
                    if j == i {
                        continue;
                    }
                    let d = sq(x, y);
                    if d <= kth_sq[i] {
                        count += 1;
                        reach += k_distance[j].max(d.sqrt());
                    }
                }
                if reach == 0.0 {
                    f64::INFINITY
                } else {
                    count as f64 / reach
                }
            })
            .collect();

        Ok(LofModel {
            train,
            k,
            k_distance,
            lrd,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Distance from each training point to its k-th nearest other training point.
    pub fn k_distances(&self) -> &[f64] {
        &self.k_distance
    }

    /// Local reachability density of each training point.
    pub fn lrds(&self) -> &[f64] {
        &self.lrd
    }
}

impl AnomalyDetector for LofModel {
    fn orientation(&self) -> Orientation {
        Orientation::HigherIsAnomalous
    }

    fn n_features(&self) -> usize {
        self.train.ncols()
    }

    fn score(&self, x: &[f64]) -> Result<f64> {
        let m = self.n_features();
        Error::check_dims(m, x.len())?;
        let flat = self.train.as_slice().expect("standard layout");
        let kth = kth_squared(x, flat, m, self.k, None);

        let mut count = 0usize;
        let mut reach = 0.0;
        let mut sum_lrd = 0.0;
        for (j, y) in flat.chunks_exact(m).enumerate() {
            let d = sq(x, y);
            if d <= kth {
                count += 1;
                reach += self.k_distance[j].max(d.sqrt());
                sum_lrd += self.lrd[j];
            }
        }
        let lrd_x = if reach == 0.0 {
            f64::INFINITY
        } else {
            count as f64 / reach
        };
        Ok(lof_ratio(sum_lrd, count, lrd_x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn symmetric_lattice_k1() {
        let m = LofModel::fit(array![[0.0], [1.0], [2.0]].view(), Some(1)).unwrap();
        assert_eq!(m.k_distances(), [1.0, 1.0, 1.0]);
        assert_eq!(m.lrds(), [1.0, 1.0, 1.0]);
        assert_eq!(m.score(&[1.0]).unwrap(), 1.0);
    }

    #[test]
    fn ties_enlarge_neighbourhood() {
        // the middle point has two neighbours at distance 1 with k = 1
        let m = LofModel::fit(array![[0.0], [1.0], [2.0], [10.0]].view(), Some(1)).unwrap();
        // lrd(1) = 2 / (max(kd(0), 1) + max(kd(2), 1)) = 1
        assert_eq!(m.lrds()[1], 1.0);
        // the outlier's only neighbour is 2 at distance 8
        assert_eq!(m.k_distances()[3], 8.0);
    }

    #[test]
    fn default_k() {
        assert_eq!(LofModel::default_k(200), 14);
        assert_eq!(LofModel::default_k(250), 15);
        assert_eq!(LofModel::default_k(3), 1);
        assert_eq!(LofModel::default_k(0), 1);
    }

    #[test]
    fn duplicate_guard() {
        // every training point duplicated: all reach distances are 0
        let m = LofModel::fit(array![[0.0], [0.0], [5.0], [5.0]].view(), Some(1)).unwrap();
        assert!(m.lrds().iter().all(|l| l.is_infinite()));
        // coincident probe: ∞/∞
        assert_eq!(m.score(&[0.0]).unwrap(), 1.0);
        // a probe between clusters has finite lrd, neighbours infinite
        assert_eq!(m.score(&[1.0]).unwrap(), f64::MAX);
    }

    #[test]
    fn dense_probe_against_finite_neighbours() {
        // probe coincides with two training points, whose own lrd is finite
        let train = array![[0.0], [0.0], [3.0], [4.0]];
        let m = LofModel::fit(train.view(), Some(2)).unwrap();
        // kNN(x=0) = {0, 0} at distance 0, but reach uses their k-distance (3)
        assert!(m.score(&[0.0]).unwrap().is_finite());
    }

    #[test]
    fn too_few_rows() {
        assert!(matches!(
            LofModel::fit(array![[0.0], [1.0]].view(), Some(2)),
            Err(Error::TooFewRows {
                required: 3,
                found: 2
            })
        ));
        assert!(LofModel::fit(array![[0.0], [1.0]].view(), Some(0)).is_err());
    }
}
