//! Plain-text model files for the `fit` → `score` handoff.
//!
//! ```text
//! spadplus-model v1
//! detector spad+
//! minmax 2
//! min 0 1.5
//! max 4 9
//! histograms input
//! n 250
//! m 2
//! b 8
//! dim <mean> <std_dev> <count_0> ... <count_{b-1}>
//! dim ...
//! histograms pc                 (spad+ only)
//! ...same block...
//! pca                           (spad+ only)
//! mean <m values>
//! eigenvalues <m values>
//! component <row 0 of the m×m matrix>
//! ...
//! end
//! ```
//!
//! Reals are written in Rust's shortest round-trip form, so a saved model
//! scores bit-identically to the in-memory one.

use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::detector::{AnomalyDetector, Orientation};
use crate::error::{Error, Result};
use crate::histogram::{DimensionHistogram, HistogramModel};
use crate::normalize::MinMaxParams;
use crate::pca::{PcaTransform, SpadPlusModel};

const MAGIC: &str = "spadplus-model v1";

#[derive(Debug, Clone, PartialEq)]
pub enum FittedModel {
    Spad(HistogramModel),
    SpadPlus(SpadPlusModel),
}

impl FittedModel {
    pub fn detector(&self) -> &dyn AnomalyDetector {
        match self {
            FittedModel::Spad(m) => m,
            FittedModel::SpadPlus(m) => m,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FittedModel::Spad(_) => "spad",
            FittedModel::SpadPlus(_) => "spad+",
        }
    }
}

/// A histogram detector with the normalization fitted alongside it. Raw
/// (unnormalized) rows go in, scores come out.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub normalization: MinMaxParams,
    pub model: FittedModel,
}

impl ModelFile {
    pub fn n_features(&self) -> usize {
        self.normalization.n_features()
    }

    pub fn orientation(&self) -> Orientation {
        Orientation::LowerIsAnomalous
    }

    /// Normalizes then scores each row.
    pub fn score_raw(&self, data: ndarray::ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        let normalized = self.normalization.apply(data)?;
        Ok(self
            .model
            .detector()
            .score_rows(normalized.view())?
            .scores()
            .to_vec())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        line(&mut out, MAGIC);
        line(&mut out, &format!("detector {}", self.model.name()));
        let norm = &self.normalization;
        line(&mut out, &format!("minmax {}", norm.n_features()));
        line(&mut out, &format!("min {}", reals(norm.mins())));
        line(&mut out, &format!("max {}", reals(norm.maxs())));
        match &self.model {
            FittedModel::Spad(h) => write_histograms(&mut out, "input", h),
            FittedModel::SpadPlus(m) => {
                write_histograms(&mut out, "input", m.input_histograms());
                write_histograms(&mut out, "pc", m.pc_histograms());
                let t = m.transform();
                line(&mut out, "pca");
                line(
                    &mut out,
                    &format!("mean {}", reals(t.mean().as_slice().expect("contiguous"))),
                );
                line(&mut out, &format!("eigenvalues {}", reals(t.eigenvalues())));
                for row in t.components().rows() {
                    line(&mut out, &format!("component {}", reals(&row.to_vec())));
                }
            }
        }
        line(&mut out, "end");
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (n, first) = lines.next_line()?;
        if first != MAGIC {
            return Err(format_err(
                n,
                format!("expected header {MAGIC:?}, found {first:?}"),
            ));
        }
        let kind = lines.single("detector")?;
        let m: usize = lines.parsed_single("minmax")?;
        let mins = lines.reals("min", Some(m))?;
        let maxs = lines.reals("max", Some(m))?;
        let normalization = MinMaxParams::from_bounds(mins, maxs)
            .map_err(|e| format_err(lines.at, e.to_string()))?;

        let model = match kind.as_str() {
            "spad" => FittedModel::Spad(read_histograms(&mut lines, "input", m)?),
            "spad+" => {
                let input = read_histograms(&mut lines, "input", m)?;
                let pc = read_histograms(&mut lines, "pc", m)?;
                lines.keyword("pca")?;
                let mean = lines.reals("mean", Some(m))?;
                let eigenvalues = lines.reals("eigenvalues", Some(m))?;
                let mut flat = Vec::with_capacity(m * m);
                for _ in 0..m {
                    flat.extend(lines.reals("component", Some(m))?);
                }
                let components = Array2::from_shape_vec((m, m), flat).expect("m×m values");
                let at = lines.at;
                let transform = PcaTransform::from_parts(mean, components, eigenvalues)
                    .map_err(|e| format_err(at, e.to_string()))?;
                FittedModel::SpadPlus(
                    SpadPlusModel::from_parts(input, pc, transform)
                        .map_err(|e| format_err(at, e.to_string()))?,
                )
            }
            other => return Err(format_err(lines.at, format!("unknown detector {other:?}"))),
        };
        lines.keyword("end")?;
        Ok(ModelFile {
            normalization,
            model,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }
}

fn line(out: &mut String, s: &str) {
    out.push_str(s);
    out.push('\n');
}

fn reals(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:?}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_histograms(out: &mut String, space: &str, h: &HistogramModel) {
    line(out, &format!("histograms {space}"));
    line(out, &format!("n {}", h.n_train()));
    line(out, &format!("m {}", h.dimensions().len()));
    line(out, &format!("b {}", h.bins()));
    for d in h.dimensions() {
        let counts: Vec<String> = d.counts().iter().map(u64::to_string).collect();
        line(
            out,
            &format!("dim {:?} {:?} {}", d.mean(), d.std_dev(), counts.join(" ")),
        );
    }
}

fn read_histograms(lines: &mut Lines<'_>, space: &str, m: usize) -> Result<HistogramModel> {
    let found = lines.single("histograms")?;
    if found != space {
        return Err(format_err(
            lines.at,
            format!("expected {space} histograms, found {found}"),
        ));
    }
    let n: usize = lines.parsed_single("n")?;
    let dims: usize = lines.parsed_single("m")?;
    if dims != m {
        return Err(format_err(
            lines.at,
            format!("{dims} histogram dimensions, expected {m}"),
        ));
    }
    let b: usize = lines.parsed_single("b")?;
    let mut hists = Vec::with_capacity(m);
    for _ in 0..m {
        let (at, fields) = lines.fields("dim")?;
        if fields.len() != b + 2 {
            return Err(format_err(
                at,
                format!("expected mean, std dev and {b} counts"),
            ));
        }
        let mean = parse_real(at, fields[0])?;
        let std_dev = parse_real(at, fields[1])?;
        let counts = fields[2..]
            .iter()
            .map(|c| {
                c.parse::<u64>()
                    .map_err(|_| format_err(at, format!("bad count {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        hists.push(
            DimensionHistogram::new(mean, std_dev, counts)
                .map_err(|e| format_err(at, e.to_string()))?,
        );
    }
    HistogramModel::from_parts(n, b, hists).map_err(|e| format_err(lines.at, e.to_string()))
}

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::ModelFormat {
        line,
        message: message.into(),
    }
}

fn parse_real(line: usize, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format_err(line, format!("bad number {s:?}")))
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    at: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            at: 0,
        }
    }

    fn next_line(&mut self) -> Result<(usize, &'a str)> {
        for (i, l) in self.inner.by_ref() {
            self.at = i + 1;
            let l = l.trim();
            if !l.is_empty() {
                return Ok((self.at, l));
            }
        }
        Err(format_err(self.at + 1, "unexpected end of file"))
    }

    fn fields(&mut self, key: &str) -> Result<(usize, Vec<&'a str>)> {
        let (n, l) = self.next_line()?;
        let mut it = l.split_whitespace();
        match it.next() {
            Some(k) if k == key => Ok((n, it.collect())),
            Some(k) => Err(format_err(n, format!("expected {key:?}, found {k:?}"))),
            None => Err(format_err(n, format!("expected {key:?}"))),
        }
    }

    fn keyword(&mut self, key: &str) -> Result<()> {
        let (n, rest) = self.fields(key)?;
        if rest.is_empty() {
            Ok(())
        } else {
            Err(format_err(n, format!("unexpected values after {key:?}")))
        }
    }

    fn single(&mut self, key: &str) -> Result<String> {
        let (n, rest) = self.fields(key)?;
        match rest.as_slice() {
            [v] => Ok((*v).to_owned()),
            _ => Err(format_err(n, format!("{key:?} takes exactly one value"))),
        }
    }

    fn parsed_single<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let v = self.single(key)?;
        v.parse()
            .map_err(|_| format_err(self.at, format!("bad value {v:?} for {key:?}")))
    }

    fn reals(&mut self, key: &str, expected: Option<usize>) -> Result<Vec<f64>> {
        let (n, rest) = self.fields(key)?;
        if let Some(e) = expected {
            if rest.len() != e {
                return Err(format_err(
                    n,
                    format!("{key:?} has {} values, expected {e}", rest.len()),
                ));
            }
        }
        rest.iter().map(|s| parse_real(n, s)).collect()
    }
}
