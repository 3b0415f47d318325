use serde::Serialize;

use crate::error::{GwlError, Result};

/// Observed lifetimes, with the order statistics and their logarithms cached.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LifetimeSample {
    values: Vec<f64>,
    #[serde(skip)]
    sorted: Vec<f64>,
    #[serde(skip)]
    ln_sorted: Vec<f64>,
}

impl LifetimeSample {
    /// Rejects empty input and any value that is not positive and finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(GwlError::EmptySample);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(GwlError::BadObservation { index, value });
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        let ln_sorted = sorted.iter().map(|t| t.ln()).collect();
        Ok(Self { values, sorted, ln_sorted })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values in their original order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Order statistics `t_(1) ≤ … ≤ t_(n)`.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub(crate) fn ln_sorted(&self) -> &[f64] {
        &self.ln_sorted
    }

    pub fn sum_ln(&self) -> f64 {
        self.ln_sorted.iter().sum()
    }

    /// `(1/n) Σ t_i^j`.
    pub fn raw_moment(&self, j: i32) -> f64 {
        self.sorted.iter().map(|t| t.powi(j)).sum::<f64>() / self.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.raw_moment(1)
    }

    /// Unbiased sample variance; zero for a single observation.
    pub fn variance(&self) -> f64 {
        let n = self.len();
        if n < 2 {
            return 0.0;
        }
        let m = self.mean();
        self.sorted.iter().map(|t| (t - m).powi(2)).sum::<f64>() / (n - 1) as f64
    }

    /// Every value multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|t| t * c).collect())
    }

    /// Replaces the value at `index`, e.g. to correct a transcription error.
    pub fn with_value(&self, index: usize, value: f64) -> Result<Self> {
        let mut values = self.values.clone();
        match values.get_mut(index) {
            Some(v) => *v = value,
            None => return Err(GwlError::Domain(format!("index {index} out of range for a sample of {}", self.len()))),
        }
        Self::new(values)
    }
}

impl TryFrom<Vec<f64>> for LifetimeSample {
    type Error = GwlError;
    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}
