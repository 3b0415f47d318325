use super::gamma::ln_gamma_unchecked;
use crate::error::{GwlError, Result};

/// Which tail of the regularized incomplete gamma function to return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// P(s, x) = γ(s, x) / Γ(s)
    Lower,
    /// Q(s, x) = Γ(s, x) / Γ(s)
    Upper,
}

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 100_000;

/// Regularized incomplete gamma function.
///
/// Uses the power series for `x < s + 1` and a Lentz continued fraction
/// otherwise; the complementary tail is `1 - other`.
pub fn reg_inc_gamma(s: f64, x: f64, tail: Tail) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(GwlError::Domain(format!("incomplete gamma shape must be positive, got {s}")));
    }
    if !(x >= 0.0) {
        return Err(GwlError::Domain(format!("incomplete gamma argument must be >= 0, got {x}")));
    }
    let (p, q) = reg_inc_gamma_pair_ln(s, x, x.ln());
    Ok(match tail {
        Tail::Lower => p,
        Tail::Upper => q,
    })
}

/// Returns `(P(s, x), Q(s, x))` given both `x` and `ln x`.
///
/// Passing `ln x` separately keeps the result accurate when `x` itself has
/// underflowed, e.g. `x = (λt)^α` with a large power `α`. Callers must keep
/// the two arguments consistent; `s > 0` is assumed.
pub fn reg_inc_gamma_pair_ln(s: f64, x: f64, ln_x: f64) -> (f64, f64) {
    if ln_x == f64::NEG_INFINITY {
        return (0.0, 1.0);
    }
    if x == f64::INFINITY {
        return (1.0, 0.0);
    }
    let ln_prefix = s * ln_x - x - ln_gamma_unchecked(s);
    if x < s + 1.0 {
        let p = (lower_series(s, x) + ln_prefix).exp().min(1.0);
        (p, 1.0 - p)
    } else {
        let q = (upper_fraction(s, x).ln() + ln_prefix).exp().min(1.0);
        (1.0 - q, q)
    }
}

/// `ln Q(s, x)`, accurate far into the upper tail where `Q` itself
/// underflows.
pub fn ln_reg_upper(s: f64, x: f64, ln_x: f64) -> f64 {
    if ln_x == f64::NEG_INFINITY {
        return 0.0;
    }
    if x == f64::INFINITY {
        return f64::NEG_INFINITY;
    }
    if x < s + 1.0 {
        reg_inc_gamma_pair_ln(s, x, ln_x).1.ln()
    } else {
        upper_fraction(s, x).ln() + s * ln_x - x - ln_gamma_unchecked(s)
    }
}

/// log of Σ x^n / (s (s+1) ... (s+n)).
fn lower_series(s: f64, x: f64) -> f64 {
    let mut ap = s;
    let mut term = 1.0 / s;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum.ln()
}

/// Continued fraction for Γ(s, x) e^x x^{-s}.
fn upper_fraction(s: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}
