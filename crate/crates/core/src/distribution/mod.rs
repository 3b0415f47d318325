//! The generalized weighted Lindley (GWL) distribution.
//!
//! For `t > 0` the density is
//!
//! ```text
//! f(t) = α λ^{αφ} t^{αφ-1} (λ + (λt)^α) e^{-(λt)^α} / ((λ + φ) Γ(φ))
//! ```
//!
//! which is the two-component mixture `p·GG(φ, λ, α) + (1-p)·GG(φ+1, λ, α)`
//! with `p = λ / (λ + φ)`. Writing `x = (λt)^α`, every distribution-level
//! quantity reduces to regularized incomplete gamma functions of `x`. All
//! evaluations carry `ln x` alongside `x` so that large powers `α` (hundreds)
//! neither overflow nor underflow.

mod entropy;
mod hazard_shape;
mod moments;
mod sampling;

use serde::{Deserialize, Serialize};

use crate::error::{GwlError, Result};
use crate::specfun::{find_root, ln_gamma_unchecked, ln_reg_upper, reg_inc_gamma_pair_ln, RootBracket};

pub use entropy::eta;
pub use hazard_shape::HazardShape;
pub use moments::SeriesSum;
pub use sampling::ln_standard_gamma;

/// The parameter triple `(φ, λ, α)`: shape, rate and power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct GwlParams {
    phi: f64,
    lambda: f64,
    alpha: f64,
}

#[derive(Deserialize)]
struct RawParams {
    phi: f64,
    lambda: f64,
    alpha: f64,
}

impl TryFrom<RawParams> for GwlParams {
    type Error = GwlError;
    fn try_from(raw: RawParams) -> Result<Self> {
        Self::new(raw.phi, raw.lambda, raw.alpha)
    }
}

fn check_param(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(GwlError::InvalidParameter { name, value, reason: "must be positive and finite" })
    }
}

impl GwlParams {
    pub fn new(phi: f64, lambda: f64, alpha: f64) -> Result<Self> {
        check_param("phi", phi)?;
        check_param("lambda", lambda)?;
        check_param("alpha", alpha)?;
        Ok(Self { phi, lambda, alpha })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.phi, self.lambda, self.alpha]
    }

    pub fn from_array(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }

    pub fn distribution(&self) -> Gwl {
        Gwl::from(*self)
    }
}

impl std::fmt::Display for GwlParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(phi={}, lambda={}, alpha={})", self.phi, self.lambda, self.alpha)
    }
}

/// Weight of the `GG(φ, λ, α)` component: `p = λ / (λ + φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureWeights {
    pub p: f64,
}

/// Generalized gamma with density `α λ^{αk} t^{αk-1} e^{-(λt)^α} / Γ(k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GgParams {
    pub shape: f64,
    pub rate: f64,
    pub power: f64,
}

impl GgParams {
    pub fn ln_pdf(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return f64::NEG_INFINITY;
        }
        let lt = (self.rate * t).ln();
        let x = (self.power * lt).exp();
        self.power.ln() + self.rate.ln() + (self.power * self.shape - 1.0) * lt - x - ln_gamma_unchecked(self.shape)
    }

    pub fn pdf(&self, t: f64) -> f64 {
        self.ln_pdf(t).exp()
    }
}

/// Behaviour of the density as `t → 0⁺`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitAtZero {
    Infinite,
    Finite(f64),
    Zero,
}

/// A GWL distribution with its normalizing constants precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gwl {
    params: GwlParams,
    ln_lambda: f64,
    ln_gamma_phi: f64,
    /// ln α + ln λ − ln(λ+φ) − lnΓ(φ)
    ln_norm: f64,
    weight: f64,
}

impl From<GwlParams> for Gwl {
    fn from(params: GwlParams) -> Self {
        let GwlParams { phi, lambda, alpha } = params;
        let ln_gamma_phi = ln_gamma_unchecked(phi);
        Self {
            params,
            ln_lambda: lambda.ln(),
            ln_gamma_phi,
            ln_norm: alpha.ln() + lambda.ln() - (lambda + phi).ln() - ln_gamma_phi,
            weight: lambda / (lambda + phi),
        }
    }
}

impl Gwl {
    pub fn new(phi: f64, lambda: f64, alpha: f64) -> Result<Self> {
        Ok(GwlParams::new(phi, lambda, alpha)?.into())
    }

    pub fn params(&self) -> GwlParams {
        self.params
    }

    pub fn phi(&self) -> f64 {
        self.params.phi
    }

    pub fn lambda(&self) -> f64 {
        self.params.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha
    }

    pub fn mixture_weights(&self) -> MixtureWeights {
        MixtureWeights { p: self.weight }
    }

    /// The `GG(φ, λ, α)` and `GG(φ+1, λ, α)` mixture components.
    pub fn components(&self) -> [GgParams; 2] {
        let GwlParams { phi, lambda, alpha } = self.params;
        [
            GgParams { shape: phi, rate: lambda, power: alpha },
            GgParams { shape: phi + 1.0, rate: lambda, power: alpha },
        ]
    }

    /// `(x, ln x)` with `x = (λt)^α`.
    fn power_arg(&self, t: f64) -> (f64, f64) {
        let lx = self.params.alpha * (self.ln_lambda + t.ln());
        (lx.exp(), lx)
    }

    pub fn ln_pdf(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return f64::NEG_INFINITY;
        }
        if t == f64::INFINITY {
            return f64::NEG_INFINITY;
        }
        let GwlParams { phi, alpha, .. } = self.params;
        let lt = self.ln_lambda + t.ln();
        let lx = alpha * lt;
        let x = lx.exp();
        self.ln_norm + (alpha * phi - 1.0) * lt + crate::specfun::log_add_exp(self.ln_lambda, lx) - x
    }

    pub fn pdf(&self, t: f64) -> f64 {
        self.ln_pdf(t).exp()
    }

    pub fn limit_at_zero(&self) -> LimitAtZero {
        let GwlParams { phi, lambda, alpha } = self.params;
        let k = alpha * phi;
        if (k - 1.0).abs() <= 4.0 * f64::EPSILON {
            LimitAtZero::Finite(alpha * lambda * lambda / ((lambda + phi) * self.ln_gamma_phi.exp()))
        } else if k < 1.0 {
            LimitAtZero::Infinite
        } else {
            LimitAtZero::Zero
        }
    }

    /// `(F(t), S(t))`, each computed directly so neither tail loses precision.
    ///
    /// Only one incomplete gamma function is evaluated; the other follows from
    /// `P(φ) = P(φ+1) + g` and `Q(φ+1) = Q(φ) + g` with
    /// `g = x^φ e^{-x} / Γ(φ+1)`, which only ever adds positive terms.
    pub fn cdf_and_survival(&self, t: f64) -> (f64, f64) {
        if !(t > 0.0) {
            return (0.0, 1.0);
        }
        let phi = self.params.phi;
        let (x, lx) = self.power_arg(t);
        let g = (phi * lx - x - phi.ln() - self.ln_gamma_phi).exp();
        let (p1, q1, p2, q2) = if x < phi + 1.0 {
            let (p2, q2) = reg_inc_gamma_pair_ln(phi + 1.0, x, lx);
            let p1 = (p2 + g).min(1.0);
            (p1, 1.0 - p1, p2, q2)
        } else {
            let (p1, q1) = reg_inc_gamma_pair_ln(phi, x, lx);
            let q2 = (q1 + g).min(1.0);
            (p1, q1, 1.0 - q2, q2)
        };
        let w = self.weight;
        let f = (w * p1 + (1.0 - w) * p2).clamp(0.0, 1.0);
        let s = (w * q1 + (1.0 - w) * q2).clamp(0.0, 1.0);
        (f, s)
    }

    pub fn cdf(&self, t: f64) -> f64 {
        self.cdf_and_survival(t).0
    }

    pub fn survival(&self, t: f64) -> f64 {
        self.cdf_and_survival(t).1
    }

    /// `ln S(t)`, finite even where `S(t)` underflows.
    pub fn ln_survival(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        let phi = self.params.phi;
        let (x, lx) = self.power_arg(t);
        let a = self.weight.ln() + ln_reg_upper(phi, x, lx);
        let b = (1.0 - self.weight).ln() + ln_reg_upper(phi + 1.0, x, lx);
        crate::specfun::log_add_exp(a, b)
    }

    /// Hazard rate `f(t) / S(t)`, evaluated as `exp(ln f − ln S)`.
    /// For `t ≤ 0` the limit `h(0⁺)` is returned.
    pub fn hazard(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return match self.limit_at_zero() {
                LimitAtZero::Infinite => f64::INFINITY,
                LimitAtZero::Finite(v) => v,
                LimitAtZero::Zero => 0.0,
            };
        }
        (self.ln_pdf(t) - self.ln_survival(t)).exp()
    }

    /// Quantile `t_p` with `F(t_p) = p`, found by Brent's method on `ln t`
    /// from a bracket grown geometrically out of `[μ/10, 10μ]`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(GwlError::Domain(format!("quantile level must lie in (0, 1), got {p}")));
        }
        // Solve on whichever tail keeps full relative precision.
        let g = |u: f64| {
            let (f, s) = self.cdf_and_survival(u.exp());
            if p <= 0.5 {
                f - p
            } else {
                (1.0 - p) - s
            }
        };
        let ln_mean = self.ln_raw_moment(1.0);
        let step = std::f64::consts::LN_10;
        let mut lo = ln_mean - step;
        let mut hi = ln_mean + step;
        for _ in 0..2000 {
            if g(lo) < 0.0 {
                break;
            }
            lo -= step;
        }
        for _ in 0..2000 {
            if g(hi) > 0.0 {
                break;
            }
            hi += step;
        }
        let u = find_root(g, RootBracket::new(lo, hi, 1e-14 * lo.abs().max(hi.abs()).max(1.0))?)?;
        Ok(u.exp())
    }
}

#[cfg(test)]
mod tests;
