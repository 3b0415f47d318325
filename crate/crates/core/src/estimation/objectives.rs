//! Objective functions for the eight estimation methods.
//!
//! Every function takes the data as a [`LifetimeSample`], so the order
//! statistics are always sorted internally and the objectives are invariant
//! under permutations of the input.

use crate::distribution::{Gwl, GwlParams};
use crate::specfun::{digamma_unchecked, ln_gamma_unchecked, log_add_exp};

use super::LifetimeSample;

/// Lower clamp applied to cdf, survival and spacing values before taking logs.
pub const LOG_FLOOR: f64 = 1e-300;
/// Upper clamp for cdf and survival values inside logs.
pub const LOG_CEIL: f64 = 1.0 - 1e-16;

/// An objective value together with the number of terms that had to be
/// clamped to keep its logarithms finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluated {
    pub value: f64,
    pub clamped: usize,
}

fn clamp_count(v: f64, clamped: &mut usize) -> f64 {
    if v < LOG_FLOOR {
        *clamped += 1;
        LOG_FLOOR
    } else if v > LOG_CEIL {
        *clamped += 1;
        LOG_CEIL
    } else {
        v
    }
}

fn cdf_pairs(d: &Gwl, data: &LifetimeSample) -> Vec<(f64, f64)> {
    data.sorted().iter().map(|&t| d.cdf_and_survival(t)).collect()
}

pub fn log_likelihood(params: &GwlParams, data: &LifetimeSample) -> f64 {
    log_likelihood_of(&params.distribution(), data)
}

/// `n ln α + nαφ ln λ − n ln(λ+φ) − n lnΓ(φ) + (αφ−1) Σ ln t
///  + Σ ln(λ + (λt)^α) − Σ (λt)^α`
pub(crate) fn log_likelihood_of(d: &Gwl, data: &LifetimeSample) -> f64 {
    let (phi, lambda, alpha) = (d.phi(), d.lambda(), d.alpha());
    let n = data.len() as f64;
    let ln_lambda = lambda.ln();
    let mut tail = 0.0;
    for &lt in data.ln_sorted() {
        let lx = alpha * (ln_lambda + lt);
        tail += log_add_exp(ln_lambda, lx) - lx.exp();
    }
    let value = n * (alpha.ln() + alpha * phi * ln_lambda - (lambda + phi).ln() - ln_gamma_unchecked(phi))
        + (alpha * phi - 1.0) * data.sum_ln()
        + tail;
    if value.is_nan() {
        f64::NEG_INFINITY
    } else {
        value
    }
}

/// Partial derivatives of the log-likelihood with respect to `(φ, λ, α)`:
/// the left-minus-right residuals of the likelihood equations, all zero at an
/// interior maximum.
pub fn likelihood_equations(params: &GwlParams, data: &LifetimeSample) -> [f64; 3] {
    let (phi, lambda, alpha) = (params.phi(), params.lambda(), params.alpha());
    let n = data.len() as f64;
    let ln_lambda = lambda.ln();
    let sum_ln_t = data.sum_ln();
    let (mut s_lam_ratio, mut s_x, mut s_xl_ratio, mut s_xl) = (0.0, 0.0, 0.0, 0.0);
    for &lt in data.ln_sorted() {
        let l = ln_lambda + lt;
        let x = (alpha * l).exp();
        // ∂/∂λ ln(λ + (λt)^α) = (1 + α x / λ) / (λ + x)
        s_lam_ratio += (1.0 + alpha * x / lambda) / (lambda + x);
        s_x += x;
        s_xl_ratio += x * l / (lambda + x);
        s_xl += x * l;
    }
    let d_phi = n * alpha * ln_lambda + alpha * sum_ln_t - n / (lambda + phi) - n * digamma_unchecked(phi);
    let d_lambda = n * alpha * phi / lambda - n / (lambda + phi) + s_lam_ratio - alpha * s_x / lambda;
    let d_alpha = n / alpha + n * phi * ln_lambda + phi * sum_ln_t + s_xl_ratio - s_xl;
    [d_phi, d_lambda, d_alpha]
}

/// Fixed-point forms of the φ- and α-equations, useful as diagnostics: at a
/// stationary point both reproduce the current `α` and `φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    /// `α* = (n/(λ+φ) + nψ(φ)) / (n ln λ + Σ ln t)`
    pub alpha: f64,
    /// `φ* = (Σ x ln(λt) − Σ x ln(λt)/(λ+x) − n/α) / (n ln λ + Σ ln t)`
    pub phi: f64,
}

pub fn likelihood_fixed_point(params: &GwlParams, data: &LifetimeSample) -> FixedPoint {
    let (phi, lambda, alpha) = (params.phi(), params.lambda(), params.alpha());
    let n = data.len() as f64;
    let ln_lambda = lambda.ln();
    let denom = n * ln_lambda + data.sum_ln();
    let (mut s_xl_ratio, mut s_xl) = (0.0, 0.0);
    for &lt in data.ln_sorted() {
        let l = ln_lambda + lt;
        let x = (alpha * l).exp();
        s_xl_ratio += x * l / (lambda + x);
        s_xl += x * l;
    }
    FixedPoint {
        alpha: (n / (lambda + phi) + n * digamma_unchecked(phi)) / denom,
        phi: (s_xl - s_xl_ratio - n / alpha) / denom,
    }
}

/// `∂F(t)/∂θ_j` (`j` = 1, 2, 3 for φ, λ, α) by a central difference with
/// relative step `ε^{1/3}`.
pub fn delta_f(j: usize, params: &GwlParams, t: f64) -> f64 {
    assert!((1..=3).contains(&j), "parameter index must be 1, 2 or 3, got {j}");
    let theta = params.to_array();
    let h = f64::EPSILON.cbrt() * theta[j - 1];
    let at = |v: f64| {
        let mut th = theta;
        th[j - 1] = v;
        Gwl::from(GwlParams::from_array(th).expect("perturbed parameters stay positive")).cdf(t)
    };
    let (up, down) = (theta[j - 1] + h, theta[j - 1] - h);
    (at(up) - at(down)) / (up - down)
}

/// `V = Σ (F(t_(i)) − i/(n+1))²`
pub fn lse_objective(params: &GwlParams, data: &LifetimeSample) -> f64 {
    lse_of(&params.distribution(), data)
}

pub(crate) fn lse_of(d: &Gwl, data: &LifetimeSample) -> f64 {
    let n1 = (data.len() + 1) as f64;
    data.sorted().iter().enumerate().map(|(k, &t)| (d.cdf(t) - (k + 1) as f64 / n1).powi(2)).sum()
}

/// Weight `(n+1)²(n+2) / (i(n−i+1))` of the `i`-th squared residual.
pub fn wlse_weight(i: usize, n: usize) -> f64 {
    let (i, n) = (i as f64, n as f64);
    (n + 1.0).powi(2) * (n + 2.0) / (i * (n - i + 1.0))
}

/// `W = Σ w_i (F(t_(i)) − i/(n+1))²`
pub fn wlse_objective(params: &GwlParams, data: &LifetimeSample) -> f64 {
    wlse_of(&params.distribution(), data)
}

pub(crate) fn wlse_of(d: &Gwl, data: &LifetimeSample) -> f64 {
    let n = data.len();
    let n1 = (n + 1) as f64;
    data.sorted()
        .iter()
        .enumerate()
        .map(|(k, &t)| wlse_weight(k + 1, n) * (d.cdf(t) - (k + 1) as f64 / n1).powi(2))
        .sum()
}

/// The `n + 1` spacings `D_i = F(t_(i)) − F(t_(i−1))` with `F(t_(0)) = 0` and
/// `F(t_(n+1)) = 1`, before any tie substitution.
#[derive(Debug, Clone, PartialEq)]
pub struct Spacings {
    pub d: Vec<f64>,
    /// `tied[i]` is true when `D_i` sits between two equal observations.
    pub tied: Vec<bool>,
}

impl Spacings {
    pub fn total(&self) -> f64 {
        self.d.iter().sum()
    }
}

pub fn spacings(params: &GwlParams, data: &LifetimeSample) -> Spacings {
    spacings_from(&cdf_pairs(&params.distribution(), data), data.sorted())
}

// Differences are taken on whichever tail is smaller, so that spacings deep
// in the upper tail are not lost to cancellation in 1 − S.
fn spacings_from(fs: &[(f64, f64)], sorted: &[f64]) -> Spacings {
    let n = fs.len();
    let mut d = Vec::with_capacity(n + 1);
    let mut tied = vec![false; n + 1];
    d.push(fs[0].0);
    for i in 1..n {
        let (f0, s0) = fs[i - 1];
        let (f1, s1) = fs[i];
        d.push(if f0 < 0.5 { f1 - f0 } else { s0 - s1 }.max(0.0));
        tied[i] = sorted[i] == sorted[i - 1];
    }
    d.push(fs[n - 1].1);
    Spacings { d, tied }
}

/// `H = (n+1)^{-1} Σ ln D_i`, the log geometric mean of the spacings; tied
/// observations contribute `ln f(t_(i))` instead of the zero spacing.
pub fn mps_objective(params: &GwlParams, data: &LifetimeSample) -> f64 {
    mps_of(&params.distribution(), data).value
}

pub(crate) fn mps_of(d: &Gwl, data: &LifetimeSample) -> Evaluated {
    let sorted = data.sorted();
    let sp = spacings_from(&cdf_pairs(d, data), sorted);
    let mut clamped = 0;
    let mut sum = 0.0;
    for (i, (&di, &tie)) in sp.d.iter().zip(&sp.tied).enumerate() {
        sum += if tie {
            d.ln_pdf(sorted[i])
        } else if di < LOG_FLOOR {
            clamped += 1;
            LOG_FLOOR.ln()
        } else {
            di.ln()
        };
    }
    Evaluated { value: sum / sp.d.len() as f64, clamped }
}

/// `C = 1/(12n) + Σ (F(t_(i)) − (2i−1)/(2n))²`
pub fn cme_objective(params: &GwlParams, data: &LifetimeSample) -> f64 {
    cme_of(&params.distribution(), data)
}

pub(crate) fn cme_of(d: &Gwl, data: &LifetimeSample) -> f64 {
    let n = data.len() as f64;
    1.0 / (12.0 * n)
        + data
            .sorted()
            .iter()
            .enumerate()
            .map(|(k, &t)| (d.cdf(t) - (2 * k + 1) as f64 / (2.0 * n)).powi(2))
            .sum::<f64>()
}

/// `A = −n − (1/n) Σ (2i−1) (ln F(t_(i)) + ln S(t_(n+1−i)))`
pub fn ade_objective(params: &GwlParams, data: &LifetimeSample) -> f64 {
    ade_of(&params.distribution(), data).value
}

pub(crate) fn ade_of(d: &Gwl, data: &LifetimeSample) -> Evaluated {
    let fs = cdf_pairs(d, data);
    let n = fs.len();
    let mut clamped = 0;
    let mut sum = 0.0;
    for i in 0..n {
        let f = clamp_count(fs[i].0, &mut clamped);
        let s = clamp_count(fs[n - 1 - i].1, &mut clamped);
        sum += (2 * i + 1) as f64 * (f.ln() + s.ln());
    }
    Evaluated { value: -(n as f64) - sum / n as f64, clamped }
}

/// `R = n/2 − 2 Σ F(t_(i)) − (1/n) Σ (2i−1) ln S(t_(n+1−i))`
pub fn rade_objective(params: &GwlParams, data: &LifetimeSample) -> f64 {
    rade_of(&params.distribution(), data).value
}

pub(crate) fn rade_of(d: &Gwl, data: &LifetimeSample) -> Evaluated {
    let fs = cdf_pairs(d, data);
    let n = fs.len();
    let mut clamped = 0;
    let mut sum_f = 0.0;
    let mut sum_s = 0.0;
    for i in 0..n {
        sum_f += fs[i].0;
        let s = clamp_count(fs[n - 1 - i].1, &mut clamped);
        sum_s += (2 * i + 1) as f64 * s.ln();
    }
    Evaluated { value: n as f64 / 2.0 - 2.0 * sum_f - sum_s / n as f64, clamped }
}

/// `μ_j − (1/n) Σ t_i^j` for `j = 1, 2, 3`.
pub fn moment_equations(params: &GwlParams, data: &LifetimeSample) -> [f64; 3] {
    let d = params.distribution();
    [1, 2, 3].map(|j| d.raw_moment(j as f64) - data.raw_moment(j))
}

/// Euclidean norm of the moment residuals, each divided by its sample moment.
pub fn scaled_moment_residual(params: &GwlParams, data: &LifetimeSample) -> f64 {
    scaled_moment_residual_of(&params.distribution(), data)
}

pub(crate) fn scaled_moment_residual_of(d: &Gwl, data: &LifetimeSample) -> f64 {
    [1, 2, 3]
        .iter()
        .map(|&j| {
            let m = data.raw_moment(j);
            ((d.raw_moment(j as f64) - m) / m).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}
