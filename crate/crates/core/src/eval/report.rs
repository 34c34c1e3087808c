use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Whether report output includes wall-clock columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Timing {
    Include,
    Exclude,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRow {
    pub detector: String,
    pub dataset: String,
    pub mean_auc: f64,
    /// One entry per repeat.
    pub aucs: Vec<f64>,
    pub split_seed: u64,
    /// Empty for deterministic detectors.
    pub detector_seeds: Vec<u64>,
    /// Fit+score runs actually executed.
    pub runs: usize,
    pub fit_seconds: f64,
    pub score_seconds: f64,
}

impl BenchmarkRow {
    pub fn total_seconds(&self) -> f64 {
        self.fit_seconds + self.score_seconds
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchmarkReport {
    rows: Vec<BenchmarkRow>,
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn first_seen(items: impl Iterator<Item = String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for it in items {
        if !out.contains(&it) {
            out.push(it);
        }
    }
    out
}

impl BenchmarkReport {
    pub fn push(&mut self, row: BenchmarkRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: BenchmarkReport) {
        self.rows.extend(other.rows);
    }

    pub fn rows(&self) -> &[BenchmarkRow] {
        &self.rows
    }

    pub fn detectors(&self) -> Vec<String> {
        first_seen(self.rows.iter().map(|r| r.detector.clone()))
    }

    pub fn datasets(&self) -> Vec<String> {
        first_seen(self.rows.iter().map(|r| r.dataset.clone()))
    }

    pub fn get(&self, detector: &str, dataset: &str) -> Option<&BenchmarkRow> {
        self.rows
            .iter()
            .find(|r| r.detector == detector && r.dataset == dataset)
    }

    /// Per-dataset ranks by mean AUC (1 = best), tied detectors sharing the
    /// mean of the ranks they span. Returns `(dataset, [(detector, rank)])`.
    pub fn ranks(&self) -> Vec<(String, Vec<(String, f64)>)> {
        self.datasets()
            .into_iter()
            .map(|ds| {
                let mut entries: Vec<(String, f64)> = self
                    .rows
                    .iter()
                    .filter(|r| r.dataset == ds)
                    .map(|r| (r.detector.clone(), r.mean_auc))
                    .collect();
                entries.sort_by(|a, b| b.1.total_cmp(&a.1));
                let mut ranked = Vec::with_capacity(entries.len());
                let mut i = 0;
                while i < entries.len() {
                    let mut j = i + 1;
                    while j < entries.len() && entries[j].1 == entries[i].1 {
                        j += 1;
                    }
                    let rank = (i + 1 + j) as f64 / 2.0;
                    ranked.extend(entries[i..j].iter().map(|(d, _)| (d.clone(), rank)));
                    i = j;
                }
                (ds, ranked)
            })
            .collect()
    }

    /// Mean rank of each detector over the datasets it ran on.
    pub fn average_ranks(&self) -> Vec<(String, f64)> {
        let ranks = self.ranks();
        self.detectors()
            .into_iter()
            .map(|det| {
                let mine: Vec<f64> = ranks
                    .iter()
                    .filter_map(|(_, rs)| rs.iter().find(|(d, _)| *d == det).map(|(_, r)| *r))
                    .collect();
                let avg = mine.iter().sum::<f64>() / mine.len() as f64;
                (det, avg)
            })
            .collect()
    }

    pub fn to_csv(&self, timing: Timing) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let mut header = vec![
            "detector",
            "dataset",
            "mean_auc",
            "aucs",
            "split_seed",
            "detector_seeds",
        ];
        if timing == Timing::Include {
            header.extend(["runs", "fit_seconds", "score_seconds", "total_seconds"]);
        }
        wtr.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![
                r.detector.clone(),
                r.dataset.clone(),
                format!("{:.6}", r.mean_auc),
                join(r.aucs.iter().map(|a| format!("{a:.6}"))),
                r.split_seed.to_string(),
                join(&r.detector_seeds),
            ];
            if timing == Timing::Include {
                rec.extend([
                    r.runs.to_string(),
                    format!("{:.6}", r.fit_seconds),
                    format!("{:.6}", r.score_seconds),
                    format!("{:.6}", r.total_seconds()),
                ]);
            }
            wtr.write_record(&rec)?;
        }
        let bytes = wtr
            .into_inner()
            .map_err(|e| Error::io("<report>", e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Dataset rows by detector columns: an AUC table with average AUC and
    /// average rank rows, then (optionally) a total-runtime table.
    pub fn to_markdown(&self, timing: Timing) -> String {
        let detectors = self.detectors();
        let datasets = self.datasets();
        let mut out = String::new();

        let header = |out: &mut String| {
            let _ = writeln!(out, "| Name | {} |", detectors.join(" | "));
            let _ = writeln!(out, "|---|{}", "---:|".repeat(detectors.len()));
        };
        let cells = |f: &dyn Fn(&str) -> String| {
            detectors
                .iter()
                .map(|d| f(d))
                .collect::<Vec<_>>()
                .join(" | ")
        };

        out.push_str("AUC\n\n");
        header(&mut out);
        for ds in &datasets {
            let line = cells(&|det| {
                self.get(det, ds)
                    .map_or_else(|| "-".to_owned(), |r| format!("{:.4}", r.mean_auc))
            });
            let _ = writeln!(out, "| {ds} | {line} |");
        }
        let avg_auc = cells(&|det| {
            let v: Vec<f64> = self
                .rows
                .iter()
                .filter(|r| r.detector == det)
                .map(|r| r.mean_auc)
                .collect();
            format!("{:.4}", v.iter().sum::<f64>() / v.len() as f64)
        });
        let _ = writeln!(out, "| Avg. AUC | {avg_auc} |");
        let avg_ranks = self.average_ranks();
        let rank_line = cells(&|det| {
            let r = avg_ranks
                .iter()
                .find(|(d, _)| d == det)
                .map_or(f64::NAN, |(_, r)| *r);
            format!("{r:.2}")
        });
        let _ = writeln!(out, "| Avg. rank | {rank_line} |");

        if timing == Timing::Include {
            out.push_str("\nTotal runtime including training and testing (seconds)\n\n");
            header(&mut out);
            for ds in &datasets {
                let line = cells(&|det| {
                    self.get(det, ds)
                        .map_or_else(|| "-".to_owned(), |r| format!("{:.2}", r.total_seconds()))
                });
                let _ = writeln!(out, "| {ds} | {line} |");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(detector: &str, dataset: &str, auc: f64) -> BenchmarkRow {
        BenchmarkRow {
            detector: detector.into(),
            dataset: dataset.into(),
            mean_auc: auc,
            aucs: vec![auc; 2],
            split_seed: 1,
            detector_seeds: vec![],
            runs: 1,
            fit_seconds: 0.5,
            score_seconds: 0.25,
        }
    }

    fn sample() -> BenchmarkReport {
        let mut r = BenchmarkReport::default();
        for (det, a, b) in [("LOF", 0.9, 0.7), ("SPAD", 0.8, 0.7), ("SPAD+", 0.8, 0.95)] {
            r.push(row(det, "A", a));
            r.push(row(det, "B", b));
        }
        r
    }

    #[test]
    fn ranks_share_ties() {
        let r = sample();
        let ranks = r.ranks();
        assert_eq!(ranks[0].0, "A");
        assert_eq!(
            ranks[0].1,
            vec![
                ("LOF".into(), 1.0),
                ("SPAD".into(), 2.5),
                ("SPAD+".into(), 2.5)
            ]
        );
        let avg = r.average_ranks();
        assert_eq!(
            avg,
            vec![
                ("LOF".into(), 1.75),
                ("SPAD".into(), 2.5),
                ("SPAD+".into(), 1.75)
            ]
        );
    }

    #[test]
    fn csv_shape() {
        let r = sample();
        let with = r.to_csv(Timing::Include).unwrap();
        let without = r.to_csv(Timing::Exclude).unwrap();
        assert_eq!(with.lines().count(), 7);
        assert!(with.starts_with("detector,dataset,mean_auc,aucs,split_seed,detector_seeds,runs,"));
        assert_eq!(
            without.lines().nth(1).unwrap(),
            "LOF,A,0.900000,0.900000;0.900000,1,"
        );
    }

    #[test]
    fn markdown_layout() {
        let md = sample().to_markdown(Timing::Include);
        assert!(md.contains("| Name | LOF | SPAD | SPAD+ |"));
        assert!(md.contains("| A | 0.9000 | 0.8000 | 0.8000 |"));
        assert!(md.contains("| Avg. rank | 1.75 | 2.50 | 1.75 |"));
        assert!(md.contains("| B | 0.75 | 0.75 | 0.75 |"));
        assert!(!sample().to_markdown(Timing::Exclude).contains("runtime"));
    }
}
