pub mod competitors;
pub mod datasets;
pub mod distribution;
pub mod error;
pub mod estimation;
pub mod gof;
pub mod simstudy;
pub mod specfun;

pub use distribution::{Gwl, GwlParams, HazardShape};
pub use error::{GwlError, Result};
pub use estimation::{fit, FitResult, LifetimeSample, Method};
