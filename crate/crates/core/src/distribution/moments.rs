use super::{Gwl, GwlParams};
use crate::specfun::{digamma_unchecked, ln_gamma_unchecked, ln_reg_upper, reg_inc_gamma_pair_ln};

/// Partial sum of a power series with a convergence verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub converged: bool,
    pub terms: usize,
}

impl Gwl {
    /// `ln E[T^r]`; `+∞` when the moment does not exist (`r/α + φ ≤ 0`).
    pub fn ln_raw_moment(&self, r: f64) -> f64 {
        let GwlParams { phi, lambda, alpha } = self.params;
        let s = r / alpha + phi;
        if !(s > 0.0) {
            return f64::INFINITY;
        }
        (s + lambda).ln() + ln_gamma_unchecked(s) - (lambda + phi).ln() - r * self.ln_lambda - self.ln_gamma_phi
    }

    /// `E[T^r]` for real `r` (non-integer orders are allowed).
    pub fn raw_moment(&self, r: f64) -> f64 {
        self.ln_raw_moment(r).exp()
    }

    pub fn mean(&self) -> f64 {
        self.raw_moment(1.0)
    }

    /// `μ₂ − μ²`, evaluated as `μ² · expm1(ln μ₂ − 2 ln μ)` to avoid
    /// cancellation.
    pub fn variance(&self) -> f64 {
        let l1 = self.ln_raw_moment(1.0);
        let l2 = self.ln_raw_moment(2.0);
        (2.0 * l1).exp() * (l2 - 2.0 * l1).exp_m1()
    }

    /// `E[(T − μ)^r]` by binomial expansion over the raw moments.
    pub fn central_moment(&self, r: u32) -> f64 {
        match r {
            0 => 1.0,
            1 => 0.0,
            2 => self.variance(),
            _ => {
                let mu = self.mean();
                let mut binom = 1.0;
                let mut total = 0.0;
                for i in 0..=r {
                    if i > 0 {
                        binom *= f64::from(r - i + 1) / f64::from(i);
                    }
                    let raw = if i == 0 { 1.0 } else { self.raw_moment(f64::from(i)) };
                    total += binom * (-mu).powi((r - i) as i32) * raw;
                }
                total
            }
        }
    }

    /// Moment generating function `Σ t^r μ_r / r!`, summed until the terms
    /// fall below machine precision relative to the sum. `converged` is
    /// false when `max_terms` is reached first (the series diverges for
    /// `α < 1`, and for `α = 1` beyond `t ≥ λ`).
    pub fn mgf(&self, t: f64, max_terms: usize) -> SeriesSum {
        if t == 0.0 {
            return SeriesSum { value: 1.0, converged: true, terms: 1 };
        }
        let ln_t = t.abs().ln();
        let mut sum = 1.0;
        let mut prev = f64::INFINITY;
        for r in 1..max_terms {
            let rf = r as f64;
            let ln_term = rf * ln_t - ln_gamma_unchecked(rf + 1.0) + self.ln_raw_moment(rf);
            let mag = ln_term.exp();
            if !mag.is_finite() {
                return SeriesSum { value: sum, converged: false, terms: r };
            }
            let term = if t < 0.0 && r % 2 == 1 { -mag } else { mag };
            sum += term;
            if mag <= 1e-17 * sum.abs() && mag < prev {
                return SeriesSum { value: sum, converged: true, terms: r + 1 };
            }
            prev = mag;
        }
        SeriesSum { value: sum, converged: false, terms: max_terms }
    }

    /// `E[log T] = (ψ(φ) + 1/(λ+φ)) / α − log λ`.
    pub fn mean_log(&self) -> f64 {
        let GwlParams { phi, lambda, alpha } = self.params;
        (digamma_unchecked(phi) + 1.0 / (lambda + phi)) / alpha - self.ln_lambda
    }

    /// Mean residual life `E[T − t | T > t]`.
    pub fn mrl(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return self.mean();
        }
        let GwlParams { phi, lambda, alpha } = self.params;
        let s = phi + 1.0 / alpha;
        let lx = alpha * (self.ln_lambda + t.ln());
        let x = lx.exp();
        if x < s + 1.0 {
            let (_, q_s) = reg_inc_gamma_pair_ln(s, x, lx);
            let (_, q_phi) = reg_inc_gamma_pair_ln(phi, x, lx);
            let gamma_ratio = (ln_gamma_unchecked(s) - self.ln_gamma_phi).exp();
            let num = (s + lambda) * gamma_ratio * q_s - lambda * t * (lambda + phi) * q_phi;
            let den = lambda * ((lambda + phi) * q_phi + (phi * lx - x - self.ln_gamma_phi).exp());
            num / den
        } else {
            // Scaled upper gammas Γ(a, x) eˣ x^{-a}; the common e^{-x} x^φ
            // factor cancels between numerator and denominator.
            let scaled = |a: f64| (ln_reg_upper(a, x, lx) + ln_gamma_unchecked(a) + x - a * lx).exp();
            let g_s = scaled(s);
            let g_phi = scaled(phi);
            t * ((s + lambda) * g_s - (lambda + phi) * g_phi) / ((lambda + phi) * g_phi + 1.0)
        }
    }
}
