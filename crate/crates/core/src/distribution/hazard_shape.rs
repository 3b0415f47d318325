use serde::{Deserialize, Serialize};

use super::Gwl;

/// Monotonicity pattern of the hazard rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HazardShape {
    Constant,
    Increasing,
    Decreasing,
    /// decreasing then increasing
    Bathtub,
    /// increasing then decreasing
    Unimodal,
    DecreasingIncreasingDecreasing,
    Other,
}

impl HazardShape {
    pub fn from_signs(signs: &[i8]) -> Self {
        let mut runs: Vec<i8> = Vec::new();
        for &s in signs.iter().filter(|&&s| s != 0) {
            if runs.last() != Some(&s) {
                runs.push(s);
            }
        }
        match runs.as_slice() {
            [] => Self::Constant,
            [1] => Self::Increasing,
            [-1] => Self::Decreasing,
            [-1, 1] => Self::Bathtub,
            [1, -1] => Self::Unimodal,
            [-1, 1, -1] => Self::DecreasingIncreasingDecreasing,
            _ => Self::Other,
        }
    }
}

impl std::fmt::Display for HazardShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Constant => "constant",
            Self::Increasing => "increasing",
            Self::Decreasing => "decreasing",
            Self::Bathtub => "bathtub",
            Self::Unimodal => "unimodal",
            Self::DecreasingIncreasingDecreasing => "decreasing-increasing-decreasing",
            Self::Other => "other",
        };
        f.write_str(s)
    }
}

const SHAPE_GRID_POINTS: usize = 800;
// Relative hazard changes below this are treated as flat.
const FLAT: f64 = 1e-10;

impl Gwl {
    /// Classifies the hazard from the sign pattern of its finite differences
    /// on a log-spaced grid covering `t ∈ [t_{1e-10}, t_{1-1e-10}]`.
    pub fn hazard_shape(&self) -> HazardShape {
        let lo = self.quantile(1e-10).unwrap_or(1e-12).ln();
        let hi = self.quantile(1.0 - 1e-10).unwrap_or(1e12).ln();
        let grid: Vec<f64> = (0..SHAPE_GRID_POINTS)
            .map(|i| (lo + (hi - lo) * i as f64 / (SHAPE_GRID_POINTS - 1) as f64).exp())
            .collect();
        self.hazard_shape_on(&grid)
    }

    pub fn hazard_shape_on(&self, grid: &[f64]) -> HazardShape {
        let h: Vec<f64> = grid.iter().map(|&t| self.hazard(t)).filter(|v| v.is_finite()).collect();
        let signs: Vec<i8> = h
            .windows(2)
            .map(|w| {
                let d = w[1] - w[0];
                if d.abs() <= FLAT * w[0].abs().max(w[1].abs()) {
                    0
                } else if d > 0.0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        HazardShape::from_signs(&signs)
    }
}
