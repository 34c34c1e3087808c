use ndarray::ArrayView2;

use crate::detector::{AnomalyDetector, Orientation};
use crate::error::{Error, Result};
use crate::histogram::{default_bin_count, HistogramModel};

use super::PcaTransform;

/// Which histogram terms contribute to a SPAD+ score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScoreVariant {
    /// Input features plus every principal component.
    #[default]
    Full,
    /// Input features only; identical to SPAD.
    InputOnly,
    /// Principal components only.
    PcsOnly,
    /// Input features plus the first `m` components by descending eigenvalue.
    TopPcs(usize),
}

impl ScoreVariant {
    pub fn name(self) -> String {
        match self {
            ScoreVariant::Full => "full".into(),
            ScoreVariant::InputOnly => "input_only".into(),
            ScoreVariant::PcsOnly => "pcs_only".into(),
            ScoreVariant::TopPcs(m) => format!("top_m_pcs({m})"),
        }
    }
}

/// Histograms over the `M` input features and the `M` principal components of
/// the training data, sharing `N` and `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpadPlusModel {
    input_hist: HistogramModel,
    pc_hist: HistogramModel,
    transform: PcaTransform,
}

impl SpadPlusModel {
    pub fn fit(train: ArrayView2<'_, f64>, bins: Option<usize>) -> Result<Self> {
        let n = train.nrows();
        if n < 2 {
            return Err(Error::TooFewRows {
                required: 2,
                found: n,
            });
        }
        let bins = Some(bins.unwrap_or_else(|| default_bin_count(n)));
        let transform = PcaTransform::fit(train)?;
        let input_hist = HistogramModel::fit(train, bins)?;
        let projected = transform.transform_rows(train)?;
        let pc_hist = HistogramModel::fit(projected.view(), bins)?;
        Ok(SpadPlusModel {
            input_hist,
            pc_hist,
            transform,
        })
    }

    pub fn from_parts(
        input_hist: HistogramModel,
        pc_hist: HistogramModel,
        transform: PcaTransform,
    ) -> Result<Self> {
        let m = input_hist.n_features();
        Error::check_dims(m, pc_hist.n_features())?;
        Error::check_dims(m, transform.n_features())?;
        if input_hist.n_train() != pc_hist.n_train() || input_hist.bins() != pc_hist.bins() {
            return Err(Error::InvalidParameter(format!(
                "input histograms (N={}, b={}) and PC histograms (N={}, b={}) disagree",
                input_hist.n_train(),
                input_hist.bins(),
                pc_hist.n_train(),
                pc_hist.bins()
            )));
        }
        Ok(SpadPlusModel {
            input_hist,
            pc_hist,
            transform,
        })
    }

    pub fn input_histograms(&self) -> &HistogramModel {
        &self.input_hist
    }

    pub fn pc_histograms(&self) -> &HistogramModel {
        &self.pc_hist
    }

    pub fn transform(&self) -> &PcaTransform {
        &self.transform
    }

    /// Score under `variant`. Lower is more anomalous.
    pub fn variant_score(&self, x: &[f64], variant: ScoreVariant) -> Result<f64> {
        let m = self.input_hist.n_features();
        Error::check_dims(m, x.len())?;
        let (input_terms, pc_terms) = match variant {
            ScoreVariant::Full => (true, m),
            ScoreVariant::InputOnly => (true, 0),
            ScoreVariant::PcsOnly => (false, m),
            ScoreVariant::TopPcs(k) if (1..=m).contains(&k) => (true, k),
            ScoreVariant::TopPcs(k) => {
                return Err(Error::InvalidParameter(format!(
                    "top_m_pcs needs 1 <= m <= {m}, got {k}"
                )))
            }
        };
        let mut score = 0.0;
        if input_terms {
            score += self.input_hist.score_leading(x, m);
        }
        if pc_terms > 0 {
            let projected = self.transform.transform(x)?;
            score += self.pc_hist.score_leading(&projected, pc_terms);
        }
        Ok(score)
    }

    /// `(lowest, highest)` attainable full score, twice the per-space bounds.
    pub fn score_bounds(&self) -> (f64, f64) {
        let (lo, hi) = self.input_hist.score_bounds();
        let (plo, phi) = self.pc_hist.score_bounds();
        (lo + plo, hi + phi)
    }

    /// Pairs the model with a fixed variant for use as an [`AnomalyDetector`].
    pub fn with_variant(self, variant: ScoreVariant) -> Result<SpadPlusVariant> {
        if let ScoreVariant::TopPcs(k) = variant {
            let m = self.n_features();
            if !(1..=m).contains(&k) {
                return Err(Error::InvalidParameter(format!(
                    "top_m_pcs needs 1 <= m <= {m}, got {k}"
                )));
            }
        }
        Ok(SpadPlusVariant {
            model: self,
            variant,
        })
    }
}

impl AnomalyDetector for SpadPlusModel {
    fn orientation(&self) -> Orientation {
        Orientation::LowerIsAnomalous
    }

    fn n_features(&self) -> usize {
        self.input_hist.n_features()
    }

    fn score(&self, x: &[f64]) -> Result<f64> {
        self.variant_score(x, ScoreVariant::Full)
    }
}

#[derive(Debug, Clone)]
pub struct SpadPlusVariant {
    model: SpadPlusModel,
    variant: ScoreVariant,
}

impl SpadPlusVariant {
    pub fn model(&self) -> &SpadPlusModel {
        &self.model
    }

    pub fn variant(&self) -> ScoreVariant {
        self.variant
    }
}

impl AnomalyDetector for SpadPlusVariant {
    fn orientation(&self) -> Orientation {
        Orientation::LowerIsAnomalous
    }

    fn n_features(&self) -> usize {
        self.model.n_features()
    }

    fn score(&self, x: &[f64]) -> Result<f64> {
        self.model.variant_score(x, self.variant)
    }
}
