//! Reference datasets.

use crate::estimation::LifetimeSample;

/// Lifetimes (hours) of 50 devices put on test (Aarset, 1987), in the order
/// printed in the source table. That table lists `15` between `72` and `79`
/// where Aarset's original data has `75`; see [`aarset_corrected`].
pub const AARSET: [f64; 50] = [
    0.1, 0.2, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 3.0, 6.0, 7.0, 11.0, 12.0, 18.0, 18.0, 18.0, 18.0, 18.0, 21.0, 32.0, 36.0,
    40.0, 45.0, 46.0, 47.0, 50.0, 55.0, 60.0, 63.0, 63.0, 67.0, 67.0, 67.0, 67.0, 72.0, 15.0, 79.0, 82.0, 82.0, 83.0,
    84.0, 84.0, 84.0, 85.0, 85.0, 85.0, 85.0, 85.0, 86.0, 86.0,
];

/// Position of the misprinted value in [`AARSET`].
pub const AARSET_MISPRINT_INDEX: usize = 35;

/// January average flows (m³/s) of the Cantareira water system, 1930–2012.
pub const CANTAREIRA: [f64; 83] = [
    82.0, 80.9, 102.5, 65.3, 65.5, 47.1, 53.0, 139.4, 82.4, 80.2, 92.5, 50.0, 50.4, 50.2, 36.2, 35.9, 100.0, 94.2, 78.1,
    54.8, 86.9, 80.1, 60.3, 26.9, 48.5, 51.0, 51.1, 84.5, 76.9, 69.4, 77.3, 109.2, 55.3, 106.3, 30.5, 94.2, 87.3, 115.0,
    70.0, 31.3, 87.1, 35.9, 67.7, 55.1, 89.9, 50.1, 52.6, 82.0, 54.1, 44.3, 69.2, 94.4, 83.4, 122.7, 88.1, 73.3, 35.9,
    82.4, 64.9, 90.8, 80.4, 55.3, 31.4, 45.7, 43.6, 45.8, 96.8, 85.8, 43.6, 122.3, 66.5, 41.0, 75.4, 79.4, 34.8, 78.8,
    52.4, 77.1, 47.0, 67.4, 132.8, 144.9, 64.1,
];

pub fn aarset() -> LifetimeSample {
    LifetimeSample::new(AARSET.to_vec()).expect("bundled data are positive")
}

/// [`AARSET`] with the misprinted `15` restored to `75`.
pub fn aarset_corrected() -> LifetimeSample {
    aarset().with_value(AARSET_MISPRINT_INDEX, 75.0).expect("bundled data are positive")
}

pub fn cantareira() -> LifetimeSample {
    LifetimeSample::new(CANTAREIRA.to_vec()).expect("bundled data are positive")
}
