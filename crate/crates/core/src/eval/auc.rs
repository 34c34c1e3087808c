use crate::dataset::Label;
use crate::detector::{DetectorOutput, Orientation};
use crate::error::{Error, Result};

/// Area under the ROC curve as the Mann–Whitney statistic: the fraction of
/// (anomaly, normal) pairs where the anomaly is scored more anomalous, ties
/// counting one half. Sort-based, `O(n log n)`.
pub fn auc(output: &DetectorOutput, labels: &[Label]) -> Result<f64> {
    auc_from_scores(output.scores(), output.orientation(), labels)
}

pub fn auc_from_scores(scores: &[f64], orientation: Orientation, labels: &[Label]) -> Result<f64> {
    Error::check_dims(labels.len(), scores.len())?;
    let anomalies = labels.iter().filter(|l| l.is_anomaly()).count();
    let normals = labels.len() - anomalies;
    if anomalies == 0 || normals == 0 {
        return Err(Error::SingleClass { anomalies, normals });
    }

    let key: Vec<f64> = scores
        .iter()
        .map(|&s| orientation.anomalousness(s))
        .collect();
    let mut order: Vec<usize> = (0..key.len()).collect();
    order.sort_by(|&a, &b| key[a].total_cmp(&key[b]));

    // sum of 1-based mid-ranks over anomalies; doubled to stay integral
    let mut twice_rank_sum: u128 = 0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && key[order[end]] == key[order[start]] {
            end += 1;
        }
        let twice_mid = (start + 1 + end) as u128;
        let anomalies_here = order[start..end]
            .iter()
            .filter(|&&i| labels[i].is_anomaly())
            .count();
        twice_rank_sum += twice_mid * anomalies_here as u128;
        start = end;
    }
    let na = anomalies as u128;
    let twice_u = twice_rank_sum - na * (na + 1);
    Ok(twice_u as f64 / (2.0 * anomalies as f64 * normals as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Anomaly as A, Normal as N};

    fn higher(scores: Vec<f64>) -> DetectorOutput {
        DetectorOutput::new(scores, Orientation::HigherIsAnomalous).unwrap()
    }

    #[test]
    fn perfect_ranking() {
        assert_eq!(
            auc(&higher(vec![0.9, 0.1, 0.8, 0.2]), &[A, N, A, N]).unwrap(),
            1.0
        );
        let lower =
            DetectorOutput::new(vec![-5.0, 1.0, -4.0, 2.0], Orientation::LowerIsAnomalous).unwrap();
        assert_eq!(auc(&lower, &[A, N, A, N]).unwrap(), 1.0);
    }

    #[test]
    fn all_ties() {
        assert_eq!(
            auc(&higher(vec![3.0; 6]), &[A, N, N, A, N, N]).unwrap(),
            0.5
        );
    }

    #[test]
    fn pair_count_examples() {
        let labels = [A, N, A, N];
        assert_eq!(
            auc(&higher(vec![0.9, 0.4, 0.7, 0.1]), &labels).unwrap(),
            1.0
        );
        assert_eq!(
            auc(&higher(vec![0.9, 0.4, 0.2, 0.1]), &labels).unwrap(),
            0.75
        );
    }

    #[test]
    fn partial_tie() {
        // anomaly 0.5 ties normal 0.5 and beats 0.1: (0.5 + 1) / 2
        assert_eq!(auc(&higher(vec![0.5, 0.5, 0.1]), &[A, N, N]).unwrap(), 0.75);
    }

    #[test]
    fn single_class_and_length_errors() {
        assert!(matches!(
            auc(&higher(vec![1.0, 2.0]), &[N, N]),
            Err(Error::SingleClass {
                anomalies: 0,
                normals: 2
            })
        ));
        assert!(matches!(
            auc(&higher(vec![1.0]), &[A]),
            Err(Error::SingleClass { .. })
        ));
        assert!(auc(&higher(vec![1.0, 2.0]), &[A]).is_err());
    }
}
