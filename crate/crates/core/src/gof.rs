//! Goodness of fit and model selection: AIC/AICc, the Kolmogorov–Smirnov
//! test, the total-time-on-test transform and comparison tables.

use serde::Serialize;

use crate::competitors::{fit_competitor, Competitor, CompetitorTag};
use crate::distribution::{Gwl, GwlParams};
use crate::error::{GwlError, Result};
use crate::estimation::{default_starts, fit_multistart, log_likelihood, LifetimeSample, Method};
use crate::specfun::MinimizeOptions;

/// `(AIC, AICc)` with `AIC = −2ℓ + 2k` and `AICc = AIC + 2k(k+1)/(n−k−1)`.
pub fn aic_aicc(loglik: f64, k: usize, n: usize) -> Result<(f64, f64)> {
    if n <= k + 1 {
        return Err(GwlError::Domain(format!("AICc needs n > k + 1, got n = {n}, k = {k}")));
    }
    let kf = k as f64;
    let aic = -2.0 * loglik + 2.0 * kf;
    Ok((aic, aic + 2.0 * kf * (kf + 1.0) / (n - k - 1) as f64))
}

/// Asymptotic Kolmogorov tail `P(K > x)` for `x = √n D`.
pub fn kolmogorov_survival(x: f64) -> f64 {
    if !(x > 0.0) {
        return 1.0;
    }
    if x < 1.18 {
        // Dual series, fast for small x:
        // 1 − (√(2π)/x) Σ exp(−(2k−1)² π² / (8x²))
        let c = std::f64::consts::PI.powi(2) / (8.0 * x * x);
        let mut sum = 0.0;
        for k in 1..100 {
            let term = (-((2 * k - 1) as f64).powi(2) * c).exp();
            sum += term;
            if term < 1e-12 * sum {
                break;
            }
        }
        (1.0 - (2.0 * std::f64::consts::PI).sqrt() / x * sum).clamp(0.0, 1.0)
    } else {
        let mut sum = 0.0;
        for k in 1..100 {
            let term = (-2.0 * (k * k) as f64 * x * x).exp();
            sum += if k % 2 == 1 { term } else { -term };
            if term < 1e-12 {
                break;
            }
        }
        (2.0 * sum).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// One-sample Kolmogorov–Smirnov test against `cdf`, with the asymptotic
/// p-value.
pub fn ks_test(data: &LifetimeSample, cdf: impl Fn(f64) -> f64) -> KsResult {
    let n = data.len() as f64;
    let statistic = data
        .sorted()
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let f = cdf(t);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max);
    KsResult { statistic, p_value: kolmogorov_survival(n.sqrt() * statistic) }
}

/// Points `(r/n, G(r/n))` of the scaled total-time-on-test transform.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TttCurve {
    pub points: Vec<(f64, f64)>,
}

/// `G(r/n) = (Σ_{i≤r} t_(i) + (n−r) t_(r)) / Σ t_i`.
pub fn ttt_transform(data: &LifetimeSample) -> TttCurve {
    let t = data.sorted();
    let n = t.len();
    let total: f64 = t.iter().sum();
    let mut partial = 0.0;
    let points = t
        .iter()
        .enumerate()
        .map(|(i, &ti)| {
            let r = i + 1;
            partial += ti;
            let g = if r == n { 1.0 } else { (partial + (n - r) as f64 * ti) / total };
            (r as f64 / n as f64, g)
        })
        .collect();
    TttCurve { points }
}

/// A fitted candidate for a comparison table.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum FittedModel {
    Gwl { params: GwlParams, method: Method },
    Competitor(Competitor),
}

impl FittedModel {
    pub fn name(&self) -> String {
        match self {
            FittedModel::Gwl { .. } => "GWL".to_string(),
            FittedModel::Competitor(c) => c.tag().to_string(),
        }
    }

    pub fn parameter_count(&self) -> usize {
        3
    }

    pub fn log_likelihood(&self, data: &LifetimeSample) -> f64 {
        match self {
            FittedModel::Gwl { params, .. } => log_likelihood(params, data),
            FittedModel::Competitor(c) => c.log_likelihood(data),
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        match self {
            FittedModel::Gwl { params, .. } => Gwl::from(*params).cdf(t),
            FittedModel::Competitor(c) => c.cdf(t),
        }
    }

    /// `(name, value)` pairs of the fitted parameters.
    pub fn named_params(&self) -> Vec<(&'static str, f64)> {
        match self {
            FittedModel::Gwl { params, .. } => {
                vec![("phi", params.phi()), ("lambda", params.lambda()), ("alpha", params.alpha())]
            }
            FittedModel::Competitor(c) => c.param_names().into_iter().zip(c.params()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub model: String,
    pub k: usize,
    pub loglik: f64,
    pub aic: f64,
    pub aicc: f64,
    pub ks_stat: f64,
    pub ks_pvalue: f64,
    /// True on the row with the smallest AIC.
    pub best: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelComparison {
    pub rows: Vec<ComparisonRow>,
    /// Models left out of the table, with the reason.
    pub excluded: Vec<(String, String)>,
}

impl ModelComparison {
    pub fn best(&self) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.best)
    }

    pub fn row(&self, model: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.model == model)
    }
}

/// Assembles AIC, AICc and KS rows for already-fitted models, in input
/// order, and flags the AIC-minimal row. Models with a non-finite
/// log-likelihood are excluded with a note.
pub fn compare_models(data: &LifetimeSample, models: &[FittedModel]) -> ModelComparison {
    let n = data.len();
    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for m in models {
        let loglik = m.log_likelihood(data);
        if !loglik.is_finite() {
            excluded.push((m.name(), "non-finite log-likelihood at the fitted parameters".to_string()));
            continue;
        }
        let k = m.parameter_count();
        let (aic, aicc) = match aic_aicc(loglik, k, n) {
            Ok(v) => v,
            Err(e) => {
                excluded.push((m.name(), e.to_string()));
                continue;
            }
        };
        let ks = ks_test(data, |t| m.cdf(t));
        rows.push(ComparisonRow {
            model: m.name(),
            k,
            loglik,
            aic,
            aicc,
            ks_stat: ks.statistic,
            ks_pvalue: ks.p_value,
            best: false,
        });
    }
    if let Some(i) = (0..rows.len()).min_by(|&a, &b| rows[a].aic.total_cmp(&rows[b].aic)) {
        rows[i].best = true;
    }
    ModelComparison { rows, excluded }
}

/// How one model of a [`ComparisonRun`] was fitted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitStatus {
    pub model: String,
    pub converged: bool,
    pub note: String,
}

/// Everything behind a five-model comparison table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRun {
    pub comparison: ModelComparison,
    pub models: Vec<FittedModel>,
    /// One entry per attempted model, fitted or not.
    pub status: Vec<FitStatus>,
    /// Log-likelihoods of the GWL fits by MLE and MPS (when they ran).
    pub gwl_candidates: Vec<(Method, f64)>,
}

impl ComparisonRun {
    pub fn status_of(&self, model: &str) -> Option<&FitStatus> {
        self.status.iter().find(|s| s.model == model)
    }
}

/// Fits GWL by MLE and by MPS (multistart each) and keeps whichever attains
/// the larger log-likelihood, fits the four competitors by maximum
/// likelihood, and tabulates all five.
pub fn fit_and_compare(data: &LifetimeSample, opts: MinimizeOptions) -> ComparisonRun {
    let starts = default_starts(data);
    let mut candidates = Vec::new();
    let mut best_gwl: Option<(GwlParams, Method, bool, f64)> = None;
    for method in [Method::Mle, Method::Mps] {
        let Some(fit) = fit_multistart(method, data, &starts, opts) else { continue };
        let ll = log_likelihood(&fit.estimates, data);
        candidates.push((method, ll));
        if best_gwl.as_ref().map_or(true, |b| ll > b.3) {
            best_gwl = Some((fit.estimates, method, !fit.failed(), ll));
        }
    }
    let mut models = Vec::new();
    let mut status = Vec::new();
    match best_gwl {
        Some((params, method, converged, _)) => {
            let mut note = format!("fitted by {method} (larger log-likelihood)");
            if !converged {
                note.push_str("; did not converge");
            }
            status.push(FitStatus { model: "GWL".into(), converged, note });
            models.push(FittedModel::Gwl { params, method });
        }
        None => status.push(FitStatus { model: "GWL".into(), converged: false, note: "no feasible start".into() }),
    }
    for tag in CompetitorTag::ALL {
        match fit_competitor(tag, data, opts) {
            Ok(fit) => {
                let note = if fit.converged { String::new() } else { "no interior optimum (boundary or iteration limit)".to_string() };
                status.push(FitStatus { model: tag.to_string(), converged: fit.converged, note });
                models.push(FittedModel::Competitor(fit.model));
            }
            Err(e) => status.push(FitStatus { model: tag.to_string(), converged: false, note: e.to_string() }),
        }
    }
    let comparison = compare_models(data, &models);
    ComparisonRun { comparison, models, status, gwl_candidates: candidates }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn information_criteria() {
        let (aic, aicc) = aic_aicc(-206.0155, 3, 50).unwrap();
        assert!((aic - 418.031).abs() < 1e-9);
        assert!((aicc - (418.031 + 24.0 / 46.0)).abs() < 1e-9);
        assert!(aicc > aic);
        let (aic0, aicc0) = aic_aicc(-10.0, 0, 5).unwrap();
        assert_eq!(aic0, aicc0);
        assert!(aic_aicc(-1.0, 3, 4).is_err());
        let gap = |n| {
            let (a, c) = aic_aicc(-1.0, 3, n).unwrap();
            c - a
        };
        assert!(gap(10) > gap(100) && gap(100) > gap(1000));
    }

    #[test]
    fn kolmogorov_series_agree_at_the_switch() {
        // Both branches evaluated on either side of the switch point.
        let x: f64 = 1.18;
        let near_below = kolmogorov_survival(x - 1e-9);
        let near_above = kolmogorov_survival(x + 1e-9);
        assert!((near_below - near_above).abs() < 1e-8);
        // Classical critical values.
        assert!((kolmogorov_survival(1.358_098_9) - 0.05).abs() < 1e-6);
        assert!((kolmogorov_survival(1.627_617_7) - 0.01).abs() < 1e-6);
        assert_eq!(kolmogorov_survival(0.0), 1.0);
    }

    #[test]
    fn perfect_fit_statistic() {
        let n = 20;
        // Uniform(0, 1) data at (i − 1/2)/n.
        let data = LifetimeSample::new((1..=n).map(|i| (i as f64 - 0.5) / n as f64).collect()).unwrap();
        let ks = ks_test(&data, |t| t.clamp(0.0, 1.0));
        assert!((ks.statistic - 0.5 / n as f64).abs() < 1e-15);
    }

    #[test]
    fn p_values_under_the_null() {
        let d = GwlParams::new(2.0, 0.5, 1.5).unwrap().distribution();
        let mut small = 0;
        for seed in 0..100 {
            let ks = ks_test(&d.sample(10_000, seed), |t| d.cdf(t));
            assert!(ks.statistic >= 0.5e-4 && ks.statistic <= 1.0);
            small += (ks.p_value <= 0.01) as usize;
        }
        assert!(small <= 5, "{small}");
    }

    #[test]
    fn ttt_curves() {
        // Equal values: every partial total-time equals the full total.
        let flat = ttt_transform(&LifetimeSample::new(vec![1.0, 1.0, 1.0]).unwrap());
        for (_, g) in flat.points {
            assert!((g - 1.0).abs() < 1e-15);
        }
        let c = ttt_transform(&LifetimeSample::new(vec![3.0, 1.0, 2.0]).unwrap());
        let g: Vec<f64> = c.points.iter().map(|p| p.1).collect();
        assert!((g[0] - 0.5).abs() < 1e-15 && (g[1] - 5.0 / 6.0).abs() < 1e-15 && g[2] == 1.0);
        let data = crate::datasets::aarset();
        let a = ttt_transform(&data);
        let b = ttt_transform(&data.scaled(7.0).unwrap());
        for (p, q) in a.points.iter().zip(&b.points) {
            assert!((p.1 - q.1).abs() < 1e-14);
        }
        // Bathtub signature: below the diagonal early, above it late.
        assert!(a.points[..5].iter().all(|&(r, g)| g < r));
        assert!(a.points[40..49].iter().all(|&(r, g)| g > r));
        assert_eq!(a.points[49], (1.0, 1.0));
    }

    #[test]
    fn single_model_is_best() {
        let data = crate::datasets::cantareira();
        let m = FittedModel::Gwl { params: GwlParams::new(7.0485, 0.1244, 0.9579).unwrap(), method: Method::Mle };
        let c = compare_models(&data, &[m]);
        assert_eq!(c.rows.len(), 1);
        assert!(c.rows[0].best);
        assert_eq!(c.rows[0].aic, -2.0 * c.rows[0].loglik + 6.0);
    }

    #[test]
    fn infeasible_model_is_excluded() {
        let data = crate::datasets::cantareira();
        let gw = Competitor::gw(1.0, 10.0, 0.5).unwrap();
        let c = compare_models(&data, &[FittedModel::Competitor(gw)]);
        assert!(c.rows.is_empty());
        assert_eq!(c.excluded.len(), 1);
    }
}
