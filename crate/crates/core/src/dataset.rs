//! Labeled numeric datasets and CSV ingestion.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Normal,
    Anomaly,
}

impl Label {
    pub fn is_anomaly(self) -> bool {
        self == Label::Anomaly
    }
}

/// An N×M matrix of finite reals with one [`Label`] per row.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    values: Array2<f64>,
    feature_names: Vec<String>,
    labels: Vec<Label>,
}

impl LabeledDataset {
    pub fn new(
        values: Array2<f64>,
        feature_names: Vec<String>,
        labels: Vec<Label>,
    ) -> Result<Self> {
        if labels.len() != values.nrows() {
            return Err(Error::InvalidDataset(format!(
                "{} labels for {} rows",
                labels.len(),
                values.nrows()
            )));
        }
        if feature_names.len() != values.ncols() {
            return Err(Error::InvalidDataset(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                values.ncols()
            )));
        }
        if let Some(((r, c), v)) = values.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value {v} at row {r}, column {c}"
            )));
        }
        Ok(LabeledDataset {
            values,
            feature_names,
            labels,
        })
    }

    /// Every row labeled normal, features named `x0`, `x1`, ...
    pub fn all_normal(values: Array2<f64>) -> Result<Self> {
        let names = (0..values.ncols()).map(|i| format!("x{i}")).collect();
        let labels = vec![Label::Normal; values.nrows()];
        Self::new(values, names, labels)
    }

    pub fn values(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn n_rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.values.ncols()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.values.row(i)
    }

    pub fn anomaly_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_anomaly()).count()
    }

    pub fn normal_count(&self) -> usize {
        self.n_rows() - self.anomaly_count()
    }

    /// Rows at `indices`, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> LabeledDataset {
        LabeledDataset {
            values: self.values.select(Axis(0), indices),
            feature_names: self.feature_names.clone(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Same names and labels over a replacement matrix of the same shape.
    pub fn with_values(&self, values: Array2<f64>) -> Result<LabeledDataset> {
        if values.dim() != self.values.dim() {
            return Err(Error::InvalidDataset(format!(
                "replacement matrix is {:?}, dataset is {:?}",
                values.dim(),
                self.values.dim()
            )));
        }
        LabeledDataset::new(values, self.feature_names.clone(), self.labels.clone())
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }
}

/// Reads a comma-delimited file with a header row. Rows whose `label_column`
/// cell equals `anomaly_value` are anomalies; every other row is normal.
pub fn load_csv(
    path: impl AsRef<Path>,
    label_column: &str,
    anomaly_value: &str,
) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, label_column, anomaly_value)
}

/// Reads a header + numeric-columns file with no label column; all rows are normal.
pub fn load_unlabeled_csv(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv_impl(file, None)
}

pub fn read_csv<R: Read>(
    reader: R,
    label_column: &str,
    anomaly_value: &str,
) -> Result<LabeledDataset> {
    read_csv_impl(reader, Some((label_column, anomaly_value)))
}

fn read_csv_impl<R: Read>(reader: R, label: Option<(&str, &str)>) -> Result<LabeledDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();

    let label_idx = match label {
        Some((col, _)) => Some(
            header
                .iter()
                .position(|h| h == col)
                .ok_or_else(|| Error::MissingLabelColumn(col.to_owned()))?,
        ),
        None => None,
    };
    let feature_cols: Vec<usize> = (0..header.len())
        .filter(|&i| Some(i) != label_idx)
        .collect();
    if feature_cols.is_empty() {
        return Err(Error::NoFeatures);
    }

    let mut flat = Vec::new();
    let mut labels = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let record = record?;
        let row = r + 1;
        for &c in &feature_cols {
            let cell = record.get(c).unwrap_or("");
            let v: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::ParseCell {
                    row,
                    column: header[c].clone(),
                    value: cell.to_owned(),
                })?;
            flat.push(v);
        }
        let lab = match (label_idx, label) {
            (Some(i), Some((_, anomaly))) if record.get(i) == Some(anomaly) => Label::Anomaly,
            _ => Label::Normal,
        };
        labels.push(lab);
    }

    let names = feature_cols.iter().map(|&c| header[c].clone()).collect();
    let values = Array2::from_shape_vec((labels.len(), feature_cols.len()), flat)
        .expect("row-major buffer matches shape");
    LabeledDataset::new(values, names, labels)
}

/// Writes the dataset with the label as the last column. Values use the
/// shortest decimal form that parses back to the same `f64`.
pub fn write_csv<W: Write>(
    data: &LabeledDataset,
    writer: W,
    label_column: &str,
    normal_value: &str,
    anomaly_value: &str,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = data.feature_names.iter().map(String::as_str).collect();
    header.push(label_column);
    wtr.write_record(&header)?;
    for (row, label) in data.values.rows().into_iter().zip(&data.labels) {
        let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        rec.push(match label {
            Label::Normal => normal_value.to_owned(),
            Label::Anomaly => anomaly_value.to_owned(),
        });
        wtr.write_record(&rec)?;
    }
    wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn three_row_csv() {
        let text = "a,b,cls\n1,2,n\n3,4,n\n5,6,x\n";
        let d = read_csv(text.as_bytes(), "cls", "x").unwrap();
        assert_eq!(d.n_rows(), 3);
        assert_eq!(d.n_features(), 2);
        assert_eq!(d.anomaly_count(), 1);
        assert_eq!(d.feature_names(), ["a", "b"]);
        assert_eq!(d.labels(), [Label::Normal, Label::Normal, Label::Anomaly]);
        assert_eq!(d.values(), array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]);
    }

    #[test]
    fn label_column_anywhere() {
        let text = "cls,a\nx,1.5\nn,2.5\n";
        let d = read_csv(text.as_bytes(), "cls", "x").unwrap();
        assert_eq!(d.feature_names(), ["a"]);
        assert_eq!(d.labels(), [Label::Anomaly, Label::Normal]);
    }

    #[test]
    fn bad_cell_names_row_and_column() {
        let text = "a,b,cls\n1,2,n\n3,abc,n\n";
        match read_csv(text.as_bytes(), "cls", "x") {
            Err(Error::ParseCell { row, column, value }) => {
                assert_eq!(row, 2);
                assert_eq!(column, "b");
                assert_eq!(value, "abc");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_cells_rejected() {
        for bad in ["NaN", "inf", "-inf", ""] {
            let text = format!("a,cls\n{bad},n\n");
            assert!(matches!(
                read_csv(text.as_bytes(), "cls", "x"),
                Err(Error::ParseCell { row: 1, .. })
            ));
        }
    }

    #[test]
    fn missing_label_column() {
        let text = "a,b\n1,2\n";
        assert!(matches!(
            read_csv(text.as_bytes(), "cls", "x"),
            Err(Error::MissingLabelColumn(c)) if c == "cls"
        ));
    }

    #[test]
    fn zero_feature_columns() {
        let text = "cls\nx\nn\n";
        assert!(matches!(
            read_csv(text.as_bytes(), "cls", "x"),
            Err(Error::NoFeatures)
        ));
    }

    #[test]
    fn missing_file() {
        let err = load_csv("/nonexistent/dir/data.csv", "cls", "x").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert!(err.to_string().contains("/nonexistent/dir/data.csv"));
    }

    #[test]
    fn constructor_checks_shapes_and_finiteness() {
        let v = array![[1.0, 2.0]];
        assert!(LabeledDataset::new(v.clone(), vec!["a".into()], vec![Label::Normal]).is_err());
        assert!(LabeledDataset::new(v.clone(), vec!["a".into(), "b".into()], vec![]).is_err());
        let nan = array![[1.0, f64::NAN]];
        assert!(LabeledDataset::all_normal(nan).is_err());
    }

    #[test]
    fn write_then_read() {
        let d = LabeledDataset::new(
            array![[0.1, -2.5e-7], [1e300, 3.0]],
            vec!["p".into(), "q".into()],
            vec![Label::Anomaly, Label::Normal],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&d, &mut buf, "class", "n", "a").unwrap();
        let back = read_csv(buf.as_slice(), "class", "a").unwrap();
        assert_eq!(back, d);
    }
}
