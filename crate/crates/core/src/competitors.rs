//! Three-parameter lifetime models used as comparison baselines: generalized
//! gamma (GG), generalized Weibull (GW), generalized exponential-Poisson
//! (GEP) and exponentiated Weibull (EW), with maximum likelihood fitting.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GwlError, Result};
use crate::estimation::{LifetimeSample, ESTIMATE_MAX, ESTIMATE_MIN};
use crate::specfun::{ln_gamma_unchecked, minimize, reg_inc_gamma_pair_ln, MinimizeOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CompetitorTag {
    #[serde(rename = "GG")]
    Gg,
    #[serde(rename = "GW")]
    Gw,
    #[serde(rename = "GEP")]
    Gep,
    #[serde(rename = "EW")]
    Ew,
}

impl CompetitorTag {
    pub const ALL: [CompetitorTag; 4] = [CompetitorTag::Gg, CompetitorTag::Gw, CompetitorTag::Ew, CompetitorTag::Gep];

    pub fn name(self) -> &'static str {
        match self {
            CompetitorTag::Gg => "GG",
            CompetitorTag::Gw => "GW",
            CompetitorTag::Gep => "GEP",
            CompetitorTag::Ew => "EW",
        }
    }
}

impl fmt::Display for CompetitorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CompetitorTag {
    type Err = GwlError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GG" => Ok(CompetitorTag::Gg),
            "GW" => Ok(CompetitorTag::Gw),
            "GEP" => Ok(CompetitorTag::Gep),
            "EW" => Ok(CompetitorTag::Ew),
            _ => Err(GwlError::Config(format!("unknown competitor model {s:?}"))),
        }
    }
}

/// A fully specified competitor distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model")]
pub enum Competitor {
    /// `f(t) = α β^{αφ} t^{αφ−1} e^{−(βt)^α} / Γ(φ)`
    #[serde(rename = "GG")]
    Gg { beta: f64, phi: f64, alpha: f64 },
    /// `f(t) = (αφ)^{-1} (t/φ)^{1/α−1} (1 − λ(t/φ)^{1/α})^{1/λ−1}`, with
    /// `λ` real; for `λ > 0` the support ends at `t = φ λ^{-α}`.
    #[serde(rename = "GW")]
    Gw { alpha: f64, phi: f64, lambda: f64 },
    /// `f(t) = αβφ (1−e^{−φ})^{−α} e^{−φ−βt+φe^{−βt}} (1 − e^{−φ+φe^{−βt}})^{α−1}`
    #[serde(rename = "GEP")]
    Gep { alpha: f64, beta: f64, phi: f64 },
    /// `f(t) = αφ β^{-1} (t/β)^{α−1} e^{−(t/β)^α} (1 − e^{−(t/β)^α})^{φ−1}`
    #[serde(rename = "EW")]
    Ew { alpha: f64, phi: f64, beta: f64 },
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(GwlError::InvalidParameter { name, value, reason: "must be positive and finite" })
    }
}

// Below this |λ| the GW model is evaluated as its Weibull limit.
const GW_LAMBDA_ZERO: f64 = 1e-12;

/// `ln(1 − e^{−x})` given `ln x`; stays finite when `x` underflows.
fn ln_one_minus_exp_neg(ln_x: f64) -> f64 {
    let x = ln_x.exp();
    if x < 1e-10 {
        ln_x - 0.5 * x
    } else {
        (-(-x).exp_m1()).ln()
    }
}

impl Competitor {
    pub fn gg(beta: f64, phi: f64, alpha: f64) -> Result<Self> {
        positive("beta", beta)?;
        positive("phi", phi)?;
        positive("alpha", alpha)?;
        Ok(Competitor::Gg { beta, phi, alpha })
    }

    pub fn gw(alpha: f64, phi: f64, lambda: f64) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("phi", phi)?;
        if !lambda.is_finite() {
            return Err(GwlError::InvalidParameter { name: "lambda", value: lambda, reason: "must be finite" });
        }
        Ok(Competitor::Gw { alpha, phi, lambda })
    }

    pub fn gep(alpha: f64, beta: f64, phi: f64) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("beta", beta)?;
        positive("phi", phi)?;
        Ok(Competitor::Gep { alpha, beta, phi })
    }

    pub fn ew(alpha: f64, phi: f64, beta: f64) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("phi", phi)?;
        positive("beta", beta)?;
        Ok(Competitor::Ew { alpha, phi, beta })
    }

    pub fn tag(&self) -> CompetitorTag {
        match self {
            Competitor::Gg { .. } => CompetitorTag::Gg,
            Competitor::Gw { .. } => CompetitorTag::Gw,
            Competitor::Gep { .. } => CompetitorTag::Gep,
            Competitor::Ew { .. } => CompetitorTag::Ew,
        }
    }

    /// Parameters in the order of the constructor arguments.
    pub fn params(&self) -> [f64; 3] {
        match *self {
            Competitor::Gg { beta, phi, alpha } => [beta, phi, alpha],
            Competitor::Gw { alpha, phi, lambda } => [alpha, phi, lambda],
            Competitor::Gep { alpha, beta, phi } => [alpha, beta, phi],
            Competitor::Ew { alpha, phi, beta } => [alpha, phi, beta],
        }
    }

    pub fn param_names(&self) -> [&'static str; 3] {
        match self {
            Competitor::Gg { .. } => ["beta", "phi", "alpha"],
            Competitor::Gw { .. } => ["alpha", "phi", "lambda"],
            Competitor::Gep { .. } => ["alpha", "beta", "phi"],
            Competitor::Ew { .. } => ["alpha", "phi", "beta"],
        }
    }

    pub fn from_params(tag: CompetitorTag, p: [f64; 3]) -> Result<Self> {
        match tag {
            CompetitorTag::Gg => Self::gg(p[0], p[1], p[2]),
            CompetitorTag::Gw => Self::gw(p[0], p[1], p[2]),
            CompetitorTag::Gep => Self::gep(p[0], p[1], p[2]),
            CompetitorTag::Ew => Self::ew(p[0], p[1], p[2]),
        }
    }

    /// Log-density; `−∞` outside the support.
    pub fn ln_pdf(&self, t: f64) -> f64 {
        if !(t > 0.0 && t.is_finite()) {
            return f64::NEG_INFINITY;
        }
        match *self {
            Competitor::Gg { beta, phi, alpha } => {
                let lbt = (beta * t).ln();
                alpha.ln() + beta.ln() + (alpha * phi - 1.0) * lbt - (alpha * lbt).exp() - ln_gamma_unchecked(phi)
            }
            Competitor::Gw { alpha, phi, lambda } => {
                let lr = (t / phi).ln();
                let u = (lr / alpha).exp();
                let tail = if lambda.abs() < GW_LAMBDA_ZERO {
                    -u
                } else {
                    let v = -lambda * u;
                    if v <= -1.0 {
                        return f64::NEG_INFINITY;
                    }
                    (1.0 / lambda - 1.0) * v.ln_1p()
                };
                -(alpha * phi).ln() + (1.0 / alpha - 1.0) * lr + tail
            }
            Competitor::Gep { alpha, beta, phi } => {
                let e = (-beta * t).exp();
                // −φ + φ e^{−βt} = φ·expm1(−βt)
                let inner = phi * (-beta * t).exp_m1();
                alpha.ln() + beta.ln() + phi.ln() - alpha * (-(-phi).exp_m1()).ln() - phi - beta * t + phi * e
                    + (alpha - 1.0) * (-inner.exp_m1()).ln()
            }
            Competitor::Ew { alpha, phi, beta } => {
                let lr = (t / beta).ln();
                let x = (alpha * lr).exp();
                (alpha * phi / beta).ln() + (alpha - 1.0) * lr - x + (phi - 1.0) * ln_one_minus_exp_neg(alpha * lr)
            }
        }
    }

    pub fn pdf(&self, t: f64) -> f64 {
        self.ln_pdf(t).exp()
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        match *self {
            Competitor::Gg { beta, phi, alpha } => {
                let lx = alpha * (beta * t).ln();
                reg_inc_gamma_pair_ln(phi, lx.exp(), lx).0
            }
            Competitor::Gw { alpha, phi, lambda } => {
                let u = ((t / phi).ln() / alpha).exp();
                if lambda.abs() < GW_LAMBDA_ZERO {
                    -(-u).exp_m1()
                } else {
                    let v = -lambda * u;
                    if v <= -1.0 {
                        return 1.0;
                    }
                    -(v.ln_1p() / lambda).exp_m1()
                }
            }
            Competitor::Gep { alpha, beta, phi } => {
                let inner = phi * (-beta * t).exp_m1();
                ((alpha * ((-inner.exp_m1()).ln() - (-(-phi).exp_m1()).ln())).exp()).min(1.0)
            }
            Competitor::Ew { alpha, phi, beta } => {
                (phi * ln_one_minus_exp_neg(alpha * (t / beta).ln())).exp()
            }
        }
    }

    pub fn log_likelihood(&self, data: &LifetimeSample) -> f64 {
        data.sorted().iter().map(|&t| self.ln_pdf(t)).sum()
    }
}

/// Maximum likelihood fit of a competitor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompetitorFit {
    pub model: Competitor,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Same acceptance range as GWL fits: positive parameters in `[1e-6, 1e6]`,
/// GW's signed λ in `[-1e6, 1e6]`. A GW fit whose support endpoint has
/// run into the largest observation sits where the likelihood is unbounded
/// and is rejected too.
fn within_bounds(model: &Competitor, data: &LifetimeSample) -> bool {
    let p = model.params();
    let positive = match model.tag() {
        CompetitorTag::Gw => &p[..2],
        _ => &p[..],
    };
    let in_range =
        positive.iter().all(|v| (ESTIMATE_MIN..=ESTIMATE_MAX).contains(v)) && p.iter().all(|v| v.abs() <= ESTIMATE_MAX);
    let edge = match *model {
        Competitor::Gw { alpha, phi, lambda } if lambda > 0.0 => {
            let t_max = data.sorted().last().copied().unwrap_or(0.0);
            phi * lambda.powf(-alpha) / t_max - 1.0 < 1e-6
        }
        _ => false,
    };
    in_range && !edge
}

// Positive parameters are optimized on the log scale; GW's λ is left as is.
fn to_model(tag: CompetitorTag, z: &[f64]) -> Option<Competitor> {
    let p = match tag {
        CompetitorTag::Gw => [z[0].exp(), z[1].exp(), z[2]],
        _ => [z[0].exp(), z[1].exp(), z[2].exp()],
    };
    Competitor::from_params(tag, p).ok()
}

fn to_coords(model: &Competitor) -> Vec<f64> {
    let p = model.params();
    match model.tag() {
        CompetitorTag::Gw => vec![p[0].ln(), p[1].ln(), p[2]],
        _ => p.iter().map(|v| v.ln()).collect(),
    }
}

/// Deterministic start grid for [`fit_competitor`], scaled to the data.
pub fn competitor_starts(tag: CompetitorTag, data: &LifetimeSample) -> Vec<Competitor> {
    let m = data.mean();
    let mut out = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        for b in [0.5, 1.0, 2.0] {
            let model = match tag {
                CompetitorTag::Gg => Competitor::gg(1.0 / m, a, b),
                CompetitorTag::Ew => Competitor::ew(a, b, m),
                CompetitorTag::Gep => Competitor::gep(a, 1.0 / m, b),
                CompetitorTag::Gw => Competitor::gw(1.0 / a, m, b - 1.0),
            };
            out.extend(model.ok());
        }
    }
    out
}

/// Maximum likelihood over [`competitor_starts`], keeping the best
/// converged optimum.
pub fn fit_competitor(tag: CompetitorTag, data: &LifetimeSample, opts: MinimizeOptions) -> Result<CompetitorFit> {
    let objective = |z: &[f64]| match to_model(tag, z) {
        Some(m) => -m.log_likelihood(data),
        None => f64::INFINITY,
    };
    let mut best: Option<CompetitorFit> = None;
    for start in competitor_starts(tag, data) {
        let run = minimize(objective, &to_coords(&start), opts);
        let Some(model) = to_model(tag, &run.x) else { continue };
        let candidate = CompetitorFit {
            model,
            log_likelihood: -run.f,
            converged: run.converged && run.f.is_finite() && within_bounds(&model, data),
            iterations: run.iterations,
        };
        let better = match &best {
            None => true,
            Some(b) => {
                (candidate.converged, candidate.log_likelihood) > (b.converged, b.log_likelihood)
                    && candidate.log_likelihood.is_finite()
            }
        };
        if better {
            best = Some(candidate);
        }
    }
    best.ok_or_else(|| GwlError::Domain(format!("no {tag} start point is feasible for these data")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;
    use crate::specfun::{integrate, Domain, QuadratureSpec};

    fn models() -> Vec<Competitor> {
        vec![
            Competitor::gg(0.7, 1.8, 1.3).unwrap(),
            Competitor::gg(2.0, 0.4, 0.8).unwrap(),
            Competitor::gw(0.8, 2.0, -0.4).unwrap(),
            Competitor::gw(1.5, 1.0, 0.3).unwrap(),
            Competitor::gw(0.7, 1.2, 0.0).unwrap(),
            Competitor::gep(1.7, 0.9, 2.5).unwrap(),
            Competitor::gep(0.6, 2.0, 0.3).unwrap(),
            Competitor::ew(1.4, 0.6, 2.0).unwrap(),
            Competitor::ew(0.8, 3.0, 0.5).unwrap(),
        ]
    }

    fn upper_end(m: &Competitor) -> f64 {
        match *m {
            Competitor::Gw { alpha, phi, lambda } if lambda > 0.0 => phi * lambda.powf(-alpha),
            _ => f64::INFINITY,
        }
    }

    #[test]
    fn densities_integrate_to_one() {
        let spec = QuadratureSpec::new(1e-12, 1e-10, 4000);
        for m in models() {
            let end = upper_end(&m);
            let total = if end.is_finite() {
                integrate(|t| m.pdf(t), Domain::Finite(0.0, end), spec).value
            } else {
                integrate(|t| m.pdf(t), Domain::Finite(0.0, 1.0), spec).value
                    + integrate(|t| m.pdf(t), Domain::SemiInfinite(1.0), spec).value
            };
            assert!((total - 1.0).abs() < 1e-6, "{m:?}: {total}");
        }
    }

    #[test]
    fn cdfs_match_density_quadrature() {
        let spec = QuadratureSpec::new(1e-13, 1e-12, 4000);
        for m in models() {
            let end = upper_end(&m).min(6.0);
            let mut prev = 0.0;
            for k in 1..=12 {
                let t = end * k as f64 / 12.5;
                let area = integrate(|u| m.pdf(u), Domain::Finite(0.0, t), spec).value;
                let c = m.cdf(t);
                assert!((c - area).abs() < 1e-8, "{m:?} t={t}: {c} vs {area}");
                assert!(c >= prev && c <= 1.0);
                prev = c;
            }
            assert_eq!(m.cdf(0.0), 0.0);
        }
    }

    #[test]
    fn weibull_reductions() {
        // GG(β, 1, α) and EW(α, 1, 1/β) are both Weibull with rate β.
        let (alpha, beta): (f64, f64) = (1.7, 0.4);
        let gg = Competitor::gg(beta, 1.0, alpha).unwrap();
        let ew = Competitor::ew(alpha, 1.0, 1.0 / beta).unwrap();
        for k in 1..30 {
            let t = 0.3 * k as f64;
            let weibull = alpha.ln() + alpha * beta.ln() + (alpha - 1.0) * t.ln() - (beta * t).powf(alpha);
            assert!((gg.ln_pdf(t) - weibull).abs() < 1e-12);
            assert!((ew.ln_pdf(t) - weibull).abs() < 1e-12);
        }
        let data = LifetimeSample::new(vec![0.5, 1.2, 3.3, 2.1]).unwrap();
        assert!((gg.log_likelihood(&data) - ew.log_likelihood(&data)).abs() < 1e-12);
    }

    #[test]
    fn exponentiated_weibull_cdf_by_hand() {
        let ew = Competitor::ew(2.0, 3.0, 1.0).unwrap();
        let expected = (1.0 - (-1.0f64).exp()).powi(3);
        assert!((ew.cdf(1.0) - expected).abs() < 1e-15);
        assert!((expected - 0.252_580_46).abs() < 1e-8);
    }

    #[test]
    fn generalized_gamma_cdf_is_incomplete_gamma() {
        let gg = Competitor::gg(0.7, 1.8, 1.3).unwrap();
        for t in [0.1, 1.0, 3.0, 8.0] {
            let x = (0.7 * t as f64).powf(1.3);
            let p = crate::specfun::reg_inc_gamma(1.8, x, crate::specfun::Tail::Lower).unwrap();
            assert!((gg.cdf(t) - p).abs() < 1e-14);
        }
    }

    #[test]
    fn generalized_weibull_support() {
        let gw = Competitor::gw(1.5, 1.0, 0.3).unwrap();
        let end = upper_end(&gw);
        assert_eq!(gw.ln_pdf(end * 1.01), f64::NEG_INFINITY);
        assert_eq!(gw.cdf(end * 1.01), 1.0);
        let data = LifetimeSample::new(vec![0.5, end * 1.5]).unwrap();
        assert_eq!(gw.log_likelihood(&data), f64::NEG_INFINITY);
    }

    #[test]
    fn generalized_gamma_on_flow_data() {
        let fit = fit_competitor(CompetitorTag::Gg, &datasets::cantareira(), MinimizeOptions::default()).unwrap();
        let aic = -2.0 * fit.log_likelihood + 6.0;
        assert!((aic - 775.461).abs() < 1.0, "{aic}");
    }

    #[test]
    fn exponentiated_weibull_recovers_weibull_shape() {
        // Weibull(shape 1.5, scale 2) by inversion.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let values: Vec<f64> =
            (0..10_000).map(|_| 2.0 * (-(1.0 - rng.random::<f64>()).ln()).powf(1.0 / 1.5)).collect();
        let data = LifetimeSample::new(values).unwrap();
        let fit = fit_competitor(CompetitorTag::Ew, &data, MinimizeOptions::default()).unwrap();
        let [_, phi, _] = fit.model.params();
        assert!((phi - 1.0).abs() < 0.15, "{:?}", fit.model);
    }
}
