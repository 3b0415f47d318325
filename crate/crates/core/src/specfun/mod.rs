//! Special functions and the generic numerical kernels used throughout the
//! crate: log-gamma and polygamma functions, regularized incomplete gamma,
//! adaptive quadrature, bracketed root finding, Nelder–Mead minimization and
//! central-difference Hessians.

mod gamma;
mod hessian;
mod incgamma;
mod minimize;
mod quad;
mod roots;

pub use gamma::{digamma, ln_gamma, trigamma};
pub(crate) use gamma::{digamma_unchecked, ln_gamma_unchecked, trigamma_unchecked};
pub use hessian::{numeric_hessian, Matrix};

/// Default relative step for [`numeric_hessian`]: the cube root of machine epsilon.
pub const HESSIAN_STEP: f64 = 6.055_454_452_393_343e-6;
pub use incgamma::{ln_reg_upper, reg_inc_gamma, reg_inc_gamma_pair_ln, Tail};
pub use minimize::{minimize, MinimizeOptions, Minimum};
pub use quad::{integrate, Domain, Integral, QuadratureSpec};
pub use roots::{find_root, RootBracket};

/// `log(exp(a) + exp(b))` without overflow.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}
