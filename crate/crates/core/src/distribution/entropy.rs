use super::{Gwl, GwlParams};
use crate::error::{GwlError, Result};
use crate::specfun::{digamma_unchecked, integrate, ln_gamma_unchecked, reg_inc_gamma_pair_ln, Domain, Integral, QuadratureSpec};

fn quad_spec() -> QuadratureSpec {
    QuadratureSpec::new(1e-13, 1e-12, 4000)
}

fn checked(r: Integral) -> Result<f64> {
    if r.converged {
        Ok(r.value)
    } else {
        Err(GwlError::Quadrature { estimate: r.value, error: r.error })
    }
}

/// `E[g(Y)]` for `Y ~ Gamma(s, 1)`. For `s < 1` the substitution `v = y^s`
/// removes the `y^{s-1}` singularity at the origin.
fn gamma_expectation<G: Fn(f64) -> f64>(s: f64, g: G) -> Integral {
    if s >= 1.0 {
        let ln_norm = ln_gamma_unchecked(s);
        integrate(
            |y: f64| {
                let w = ((s - 1.0) * y.ln() - y - ln_norm).exp();
                if w == 0.0 {
                    0.0
                } else {
                    g(y) * w
                }
            },
            Domain::SemiInfinite(0.0),
            quad_spec(),
        )
    } else {
        let ln_norm = ln_gamma_unchecked(s + 1.0);
        integrate(
            |v: f64| {
                let y = (v.ln() / s).exp();
                let w = (-y - ln_norm).exp();
                if w == 0.0 {
                    0.0
                } else {
                    g(y) * w
                }
            },
            Domain::SemiInfinite(0.0),
            quad_spec(),
        )
    }
}

/// `η(φ, λ) = ∫₀^∞ (λ+y) log(λ+y) y^{φ-1} e^{-y} dy`, by quadrature.
pub fn eta(phi: f64, lambda: f64) -> Result<f64> {
    let g = |y: f64| (lambda + y).ln();
    let a = checked(gamma_expectation(phi, g))?;
    let b = checked(gamma_expectation(phi + 1.0, g))?;
    Ok(ln_gamma_unchecked(phi).exp() * (lambda * a + phi * b))
}

impl Gwl {
    /// Shannon entropy `−E[log f(T)]`.
    ///
    /// Closed form in terms of `ψ(φ)`, `E[(λT)^α] = φ(1+φ+λ)/(λ+φ)` and the
    /// `η` integral; `η / Γ(φ)` is evaluated as a Gamma-mixture expectation
    /// so that small `φ` does not overflow `Γ(φ)`.
    pub fn shannon_entropy(&self) -> Result<f64> {
        let GwlParams { phi, lambda, alpha } = self.params;
        let g = |y: f64| (lambda + y).ln();
        let e1 = checked(gamma_expectation(phi, g))?;
        let e2 = checked(gamma_expectation(phi + 1.0, g))?;
        let eta_term = (lambda * e1 + phi * e2) / (lambda + phi);
        let k = alpha * phi - 1.0;
        Ok((lambda + phi).ln() + self.ln_gamma_phi - alpha.ln() - self.ln_lambda
            + phi * (1.0 + phi + lambda) / (lambda + phi)
            - digamma_unchecked(phi) * k / alpha
            - k / (alpha * (lambda + phi))
            - eta_term)
    }

    /// Rényi entropy of order `ρ` (`ρ > 0`, `ρ ≠ 1`).
    ///
    /// Requires `ρ(αφ − 1) + 1 > 0`, otherwise `∫ f^ρ` diverges at the origin.
    pub fn renyi_entropy(&self, rho: f64) -> Result<f64> {
        let GwlParams { phi, lambda, alpha } = self.params;
        if !(rho > 0.0) || rho == 1.0 || !rho.is_finite() {
            return Err(GwlError::Domain(format!("Renyi order must be positive and != 1, got {rho}")));
        }
        if !(rho * (alpha * phi - 1.0) + 1.0 > 0.0) {
            return Err(GwlError::Domain(format!(
                "integral of f^rho diverges at 0 for rho = {rho} with alpha*phi = {}",
                alpha * phi
            )));
        }
        let ln_delta = self.ln_delta(rho)?;
        Ok(((rho - 1.0) * (alpha.ln() + self.ln_lambda) - rho * ((lambda + phi).ln() + self.ln_gamma_phi)
            + ln_delta)
            / (1.0 - rho))
    }

    /// `ln ∫₀^∞ y^e (λ+y)^ρ e^{-ρy} dy` with `e = (αρφ − ρ + 1 − α)/α`,
    /// integrated in `v = y^{e+1}`.
    fn ln_delta(&self, rho: f64) -> Result<f64> {
        let GwlParams { phi, lambda, alpha } = self.params;
        let e1 = (alpha * rho * phi - rho + 1.0) / alpha;
        // Normalize by the integrand's peak value to keep it O(1).
        let ln_h = |y: f64| rho * (lambda + y).ln() - rho * y;
        let y_peak = (1.0 - lambda).max(0.0);
        let shift = ln_h(y_peak);
        let r = integrate(
            |v: f64| {
                let y = (v.ln() / e1).exp();
                (ln_h(y) - shift).exp()
            },
            Domain::SemiInfinite(0.0),
            quad_spec(),
        );
        Ok(checked(r)?.ln() + shift - e1.ln())
    }

    /// Lorenz curve `L(p) = (1/μ) ∫₀^{t_p} x f(x) dx`, for `p ∈ [0, 1]`.
    pub fn lorenz(&self, p: f64) -> Result<f64> {
        if p == 0.0 || p == 1.0 {
            return Ok(p);
        }
        let GwlParams { lambda, alpha, phi } = self.params;
        let tp = self.quantile(p)?;
        let lx = alpha * (self.ln_lambda + tp.ln());
        let x = lx.exp();
        let s = phi + 1.0 / alpha;
        let (p1, _) = reg_inc_gamma_pair_ln(s, x, lx);
        let (p2, _) = reg_inc_gamma_pair_ln(s + 1.0, x, lx);
        Ok(((lambda * p1 + s * p2) / (lambda + s)).clamp(0.0, 1.0))
    }
}
