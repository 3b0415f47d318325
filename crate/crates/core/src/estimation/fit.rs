use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distribution::{Gwl, GwlParams};
use crate::error::GwlError;
use crate::specfun::{digamma_unchecked, find_root, minimize, trigamma_unchecked, numeric_hessian, Matrix, MinimizeOptions, RootBracket};

use super::objectives::{
    ade_of, cme_of, log_likelihood_of, lse_of, mps_of, rade_of, scaled_moment_residual_of, wlse_of,
};
use super::LifetimeSample;

/// A fit whose moment residual norm exceeds this is reported as not converged.
pub const MOMENT_RESIDUAL_TOL: f64 = 1e-4;

/// Estimates outside `[ESTIMATE_MIN, ESTIMATE_MAX]` count as failures.
pub const ESTIMATE_MIN: f64 = 1e-6;
pub const ESTIMATE_MAX: f64 = 1e6;

/// Step (in log-parameter space) of the numeric Hessian behind the observed
/// information. `ε^{1/4}` balances truncation and rounding for a second
/// difference.
const INFORMATION_STEP: f64 = 1.220_703_125e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    /// Maximum likelihood.
    Mle,
    /// Method of moments (first three raw moments).
    Me,
    /// Ordinary least squares on the cdf.
    Olse,
    /// Weighted least squares on the cdf.
    Wlse,
    /// Maximum product of spacings.
    Mps,
    /// Cramér–von Mises minimum distance.
    Cme,
    /// Anderson–Darling minimum distance.
    Ade,
    /// Right-tail Anderson–Darling minimum distance.
    Rade,
}

impl Method {
    pub const ALL: [Method; 8] =
        [Method::Mle, Method::Me, Method::Olse, Method::Wlse, Method::Mps, Method::Cme, Method::Ade, Method::Rade];

    pub fn tag(self) -> &'static str {
        match self {
            Method::Mle => "MLE",
            Method::Me => "ME",
            Method::Olse => "OLSE",
            Method::Wlse => "WLSE",
            Method::Mps => "MPS",
            Method::Cme => "CME",
            Method::Ade => "ADE",
            Method::Rade => "RADE",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = GwlError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "mle" => Method::Mle,
            "me" => Method::Me,
            "olse" | "lse" => Method::Olse,
            "wlse" => Method::Wlse,
            "mps" => Method::Mps,
            "cme" => Method::Cme,
            "ade" => Method::Ade,
            "rade" | "rtade" => Method::Rade,
            _ => return Err(GwlError::Config(format!("unknown estimation method {s:?}"))),
        })
    }
}

/// Outcome of [`fit`]. Numerical trouble never raises an error; it shows up
/// as `converged == false` and in `notes`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub method: Method,
    pub estimates: GwlParams,
    pub converged: bool,
    pub iterations: usize,
    /// The method's own objective at the estimates, with its natural sign:
    /// log-likelihood for MLE, mean log spacing for MPS, the statistic being
    /// minimized otherwise (scaled residual norm for ME).
    pub objective_value: f64,
    /// Inverse observed information, for MLE and MPS when positive definite.
    pub covariance: Option<Matrix>,
    pub stderr: Option<[f64; 3]>,
    pub notes: Vec<String>,
}

impl FitResult {
    /// The failure rule used for Monte-Carlo accounting: not converged, any
    /// estimate outside `[1e-6, 1e6]`, or a non-finite objective.
    pub fn failed(&self) -> bool {
        !self.converged
            || !self.objective_value.is_finite()
            || self.estimates.to_array().iter().any(|v| !(ESTIMATE_MIN..=ESTIMATE_MAX).contains(v))
    }
}

fn from_log(z: &[f64]) -> Option<Gwl> {
    GwlParams::new(z[0].exp(), z[1].exp(), z[2].exp()).ok().map(Gwl::from)
}

/// Value minimized for `method`.
fn loss(method: Method, d: &Gwl, data: &LifetimeSample) -> f64 {
    match method {
        Method::Mle => -log_likelihood_of(d, data),
        Method::Me => scaled_moment_residual_of(d, data).powi(2),
        Method::Olse => lse_of(d, data),
        Method::Wlse => wlse_of(d, data),
        Method::Mps => -mps_of(d, data).value,
        Method::Cme => cme_of(d, data),
        Method::Ade => ade_of(d, data).value,
        Method::Rade => rade_of(d, data).value,
    }
}

/// Fits `method` to `data` by Nelder–Mead in `(ln φ, ln λ, ln α)`, starting
/// from `x0` or from [`default_start`].
pub fn fit(method: Method, data: &LifetimeSample, x0: Option<GwlParams>, opts: MinimizeOptions) -> FitResult {
    let start = x0.unwrap_or_else(|| default_start(data));
    let z0 = start.to_array().map(f64::ln);
    let objective = |z: &[f64]| from_log(z).map_or(f64::INFINITY, |d| loss(method, &d, data));
    let m = minimize(objective, &z0, opts);

    let mut notes = Vec::new();
    let Some(dist) = from_log(&m.x) else {
        notes.push("optimizer left the parameter space".to_string());
        return FitResult {
            method,
            estimates: start,
            converged: false,
            iterations: m.iterations,
            objective_value: f64::NAN,
            covariance: None,
            stderr: None,
            notes,
        };
    };
    let mut converged = m.converged && m.f.is_finite();
    if !m.converged {
        notes.push(format!("optimizer stopped after {} iterations without converging", m.iterations));
    }
    let objective_value = match method {
        Method::Mle => -m.f,
        Method::Mps => -m.f,
        Method::Me => m.f.sqrt(),
        _ => m.f,
    };
    if method == Method::Me && !(objective_value <= MOMENT_RESIDUAL_TOL) {
        converged = false;
        notes.push(format!("moment residual norm {objective_value:.3e} exceeds {MOMENT_RESIDUAL_TOL:e}"));
    }
    let clamped = match method {
        Method::Mps => mps_of(&dist, data).clamped,
        Method::Ade => ade_of(&dist, data).clamped,
        Method::Rade => rade_of(&dist, data).clamped,
        _ => 0,
    };
    if clamped > 0 {
        notes.push(format!("{clamped} cdf, survival or spacing values clamped inside logarithms"));
    }

    let (covariance, stderr) = match method {
        Method::Mle | Method::Mps => match observed_covariance(method, &m.x, data) {
            Ok(cov) => {
                let d = cov.diagonal();
                (Some(cov), Some([d[0].sqrt(), d[1].sqrt(), d[2].sqrt()]))
            }
            Err(reason) => {
                notes.push(reason);
                (None, None)
            }
        },
        _ => (None, None),
    };

    FitResult {
        method,
        estimates: dist.params(),
        converged,
        iterations: m.iterations,
        objective_value,
        covariance,
        stderr,
        notes,
    }
}

/// Runs [`fit`] from each start and keeps the result with the best objective,
/// preferring converged fits.
pub fn fit_multistart(
    method: Method,
    data: &LifetimeSample,
    starts: &[GwlParams],
    opts: MinimizeOptions,
) -> Option<FitResult> {
    let rank = |r: &FitResult| {
        let l = match method {
            Method::Mle | Method::Mps => -r.objective_value,
            _ => r.objective_value,
        };
        (!r.converged, if l.is_nan() { f64::INFINITY } else { l })
    };
    starts
        .iter()
        .map(|s| fit(method, data, Some(*s), opts))
        .min_by(|a, b| {
            let (ca, la) = rank(a);
            let (cb, lb) = rank(b);
            ca.cmp(&cb).then(la.total_cmp(&lb))
        })
}

/// Start points for [`fit_multistart`]: the default start, variants with
/// the power `α` spread over two orders of magnitude each way, and
/// log-moment starts for a few shapes.
pub fn default_starts(data: &LifetimeSample) -> Vec<GwlParams> {
    let base = default_start(data);
    let rate = 1.0 / data.mean();
    let mut starts = vec![base];
    for alpha in [0.1, 0.5, 3.0, 20.0, 100.0] {
        if let Ok(p) = GwlParams::new(base.phi(), rate, alpha) {
            starts.push(p);
        }
    }
    for phi in [0.5, 2.0, 5.0] {
        starts.extend(log_moment_start(data, phi));
    }
    starts
}

/// `ln T = ln Y / α − ln λ` with `Y` roughly Gamma(φ + ½): match the mean
/// and variance of `ln T` for a given shape. Suited to data spanning many
/// orders of magnitude, where raw moments are dominated by a few values.
fn log_moment_start(data: &LifetimeSample, phi: f64) -> Option<GwlParams> {
    let logs = data.ln_sorted();
    let n = logs.len() as f64;
    if logs.len() < 2 {
        return None;
    }
    let mean = logs.iter().sum::<f64>() / n;
    let var = logs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let s = phi + 0.5;
    let alpha = (trigamma_unchecked(s) / var).sqrt();
    let lambda = (digamma_unchecked(s) / alpha - mean).exp();
    GwlParams::new(phi, lambda, alpha).ok()
}

/// Inverse of the observed information in natural coordinates.
///
/// The Hessian is taken in log coordinates `z = ln θ`, which are far better
/// scaled, and mapped back with `Cov_θ = D Cov_z D`, `D = diag(θ)`; the
/// gradient term of the change of variables vanishes at a stationary point.
/// For MPS the log-likelihood counterpart is `(n+1)·H`.
fn observed_covariance(method: Method, z: &[f64], data: &LifetimeSample) -> Result<Matrix, String> {
    let scale = match method {
        Method::Mps => (data.len() + 1) as f64,
        _ => 1.0,
    };
    let neg = |z: &[f64]| from_log(z).map_or(f64::NAN, |d| scale * loss(method, &d, data));
    let info = numeric_hessian(neg, z, INFORMATION_STEP).map_err(|e| format!("observed information unavailable: {e}"))?;
    if !info.is_positive_definite() {
        return Err("observed information is not positive definite; no standard errors".to_string());
    }
    let inv = info.inverse().ok_or_else(|| "observed information is singular".to_string())?;
    let theta: Vec<f64> = z.iter().map(|v| v.exp()).collect();
    let mut cov = Matrix::zeros(3);
    for i in 0..3 {
        for j in 0..3 {
            cov.set(i, j, theta[i] * inv.get(i, j) * theta[j]);
        }
    }
    cov.symmetrize();
    Ok(cov)
}

/// Weighted-Lindley moment start: `α₀ = 1`, and `(φ₀, λ₀)` matching the
/// sample mean and second raw moment of the `α = 1` model. Falls back to
/// `(1, 1, 1)` when no match is found.
pub fn default_start(data: &LifetimeSample) -> GwlParams {
    let fallback = GwlParams::new(1.0, 1.0, 1.0).expect("unit parameters are valid");
    let m1 = data.raw_moment(1);
    let m2 = data.raw_moment(2);
    if !(m1.is_finite() && m2.is_finite() && m2 > m1 * m1) {
        return fallback;
    }
    // For fixed φ the mean equation m λ² + φ(m−1) λ − φ(φ+1) = 0 fixes λ.
    let rate_for = |phi: f64| {
        let q = phi * (m1 - 1.0);
        let disc = (q * q + 4.0 * m1 * phi * (phi + 1.0)).sqrt();
        if q > 0.0 {
            2.0 * phi * (phi + 1.0) / (q + disc)
        } else {
            (disc - q) / (2.0 * m1)
        }
    };
    let mismatch = |u: f64| {
        let phi = u.exp();
        let lam = rate_for(phi);
        let mu2 = phi * (phi + 1.0) * (phi + 2.0 + lam) / ((lam + phi) * lam * lam);
        mu2.ln() - m2.ln()
    };
    let grid: Vec<f64> = (0..=60).map(|k| -3.0 * std::f64::consts::LN_10 + k as f64 * 0.1 * std::f64::consts::LN_10).collect();
    let values: Vec<f64> = grid.iter().map(|&u| mismatch(u)).collect();
    let root = grid.windows(2).zip(values.windows(2)).find_map(|(u, v)| {
        if v[0].is_finite() && v[1].is_finite() && v[0].signum() != v[1].signum() {
            RootBracket::new(u[0], u[1], 1e-10).ok().and_then(|b| find_root(mismatch, b).ok())
        } else {
            None
        }
    });
    let u = match root {
        Some(u) => u,
        None => match grid.iter().zip(&values).filter(|(_, v)| v.is_finite()).min_by(|a, b| a.1.abs().total_cmp(&b.1.abs())) {
            Some((&u, _)) => u,
            None => return fallback,
        },
    };
    let phi = u.exp();
    GwlParams::new(phi, rate_for(phi), 1.0).unwrap_or(fallback)
}
