//! Symmetry-breaking and concentration diagnostics over paired predictions.

use crate::error::{Error, Result};

/// Guards the `0/0` case in [`chi_squared`].
pub const CHI2_EPSILON: f64 = 1e-12;

/// Predictions on `(x, -x)` partners, in that order.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedPredictions {
    pairs: Vec<(f64, f64)>,
}

impl PairedPredictions {
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Affine map of both entries from `[lo, hi]` onto `[0, 1]`.
    pub fn normalized(&self, lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::OutOfRange { value: hi, lo, hi: f64::INFINITY });
        }
        let f = |v: f64| (v - lo) / (hi - lo);
        Ok(Self {
            pairs: self.pairs.iter().map(|&(a, b)| (f(a), f(b))).collect(),
        })
    }

    /// Every prediction, originals and partners interleaved.
    pub fn values(&self) -> Vec<f64> {
        self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
}

/// Decision rule `τ(v) = 1` iff `v > t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdFn {
    pub t: f64,
}

impl ThresholdFn {
    pub fn new(t: f64) -> Self {
        Self { t }
    }

    pub fn label(&self, v: f64) -> u8 {
        u8::from(v > self.t)
    }
}

/// `(1/M) Σ (a - b)² / (a + b + ε)` on predictions already mapped to `[0, 1]`.
pub fn chi_squared(preds: &PairedPredictions) -> f64 {
    let total: f64 = preds
        .pairs
        .iter()
        .map(|&(a, b)| (a - b).powi(2) / (a + b + CHI2_EPSILON))
        .sum();
    total / preds.len() as f64
}

/// Fraction of pairs whose binary labels disagree.
pub fn label_misassignment(preds: &PairedPredictions, threshold: ThresholdFn) -> f64 {
    let flips = preds
        .pairs
        .iter()
        .filter(|&&(a, b)| threshold.label(a) != threshold.label(b))
        .count();
    flips as f64 / preds.len() as f64
}

/// Median of the training predictions.
pub fn adaptive_threshold(train_predictions: &[f64]) -> Result<ThresholdFn> {
    median(train_predictions).map(ThresholdFn::new)
}

pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Ok(if v.len() % 2 == 0 {
        (v[m - 1] + v[m]) / 2.0
    } else {
        v[m]
    })
}

/// Population variance.
pub fn prediction_variance(predictions: &[f64]) -> Result<f64> {
    if predictions.len() < 2 {
        return Err(Error::TooFewValues {
            min: 2,
            found: predictions.len(),
        });
    }
    let n = predictions.len() as f64;
    let mean = predictions.iter().sum::<f64>() / n;
    Ok(predictions.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n)
}

/// `1 - lm/2`.
pub fn accuracy_upper_bound(lm: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lm) {
        return Err(Error::OutOfRange {
            value: lm,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(1.0 - lm / 2.0)
}
