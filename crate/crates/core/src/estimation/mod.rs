//! Parameter estimation: eight objective functions, a shared fit driver,
//! observed and expected information, and Wald intervals.

mod fisher;
mod fit;
mod inference;
mod objectives;
mod sample;

pub use fisher::{fisher_information, ElementCheck, FisherReport, AGREEMENT_TOL};
pub use fit::{
    default_start, default_starts, fit, fit_multistart, FitResult, Method, ESTIMATE_MAX, ESTIMATE_MIN,
    MOMENT_RESIDUAL_TOL,
};
pub use inference::{normal_cdf, normal_quantile, wald_ci};
pub use objectives::{
    ade_objective, cme_objective, delta_f, likelihood_equations, likelihood_fixed_point, log_likelihood,
    lse_objective, moment_equations, mps_objective, rade_objective, scaled_moment_residual, spacings, wlse_objective,
    wlse_weight, FixedPoint, Spacings, LOG_CEIL, LOG_FLOOR,
};
pub use sample::LifetimeSample;
