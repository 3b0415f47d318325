use super::*;
use crate::specfun::{integrate, reg_inc_gamma, Domain, QuadratureSpec, Tail};

fn gwl(phi: f64, lambda: f64, alpha: f64) -> Gwl {
    Gwl::new(phi, lambda, alpha).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// `∫_a^b g`, with `b = ∞` allowed, split at `mid` so each piece has at most
/// one awkward endpoint.
fn quad(g: impl Fn(f64) -> f64, a: f64, mid: f64, b: f64) -> f64 {
    let spec = QuadratureSpec::new(1e-14, 1e-12, 4000);
    let first = integrate(&g, Domain::Finite(a, mid), spec);
    let second = if b.is_infinite() {
        integrate(&g, Domain::SemiInfinite(mid), spec)
    } else {
        integrate(&g, Domain::Finite(mid, b), spec)
    };
    assert!(first.converged && second.converged);
    first.value + second.value
}

fn lindley_pdf(lambda: f64, t: f64) -> f64 {
    lambda * lambda * (1.0 + t) * (-lambda * t).exp() / (lambda + 1.0)
}

fn power_lindley_pdf(alpha: f64, beta: f64, t: f64) -> f64 {
    alpha * beta * beta / (beta + 1.0) * (1.0 + t.powf(alpha)) * t.powf(alpha - 1.0) * (-beta * t.powf(alpha)).exp()
}

#[test]
fn power_lindley_only_at_unit_rate() {
    // φ = 1 gives density ∝ t^{α−1}(λ + λ^α t^α) e^{−(λt)^α}; the power
    // Lindley form with β = λ^α has (1 + t^α) instead, so the two agree
    // only when λ^{1−α} = 1.
    for alpha in [0.6, 1.7, 3.0] {
        for k in 1..30 {
            let t = 0.1 * k as f64;
            assert!(rel(gwl(1.0, 1.0, alpha).pdf(t), power_lindley_pdf(alpha, 1.0, t)) < 1e-12);
        }
        let lambda: f64 = 2.0;
        let t = 2.0;
        assert!(rel(gwl(1.0, lambda, alpha).pdf(t), power_lindley_pdf(alpha, lambda.powf(alpha), t)) > 1e-3);
    }
}

#[test]
fn reduces_to_lindley_and_weighted_lindley() {
    for lambda in [0.3, 1.0, 2.5] {
        let d = gwl(1.0, lambda, 1.0);
        for k in 1..40 {
            let t = 0.1 * k as f64;
            assert!(rel(d.pdf(t), lindley_pdf(lambda, t)) < 1e-12);
            let cdf = 1.0 - (1.0 + lambda * t / (lambda + 1.0)) * (-lambda * t).exp();
            assert!(rel(d.cdf(t), cdf) < 1e-12, "lambda {lambda} t {t}");
        }
    }
    // Weighted Lindley with φ = 2: λ³ t (1+t) e^{-λt} / (λ+2).
    let d = gwl(2.0, 0.7, 1.0);
    for k in 1..40 {
        let t = 0.25 * k as f64;
        let wl = 0.7f64.powi(3) * t * (1.0 + t) * (-0.7 * t).exp() / 2.7;
        assert!(rel(d.pdf(t), wl) < 1e-12);
    }
}

#[test]
fn pdf_matches_direct_formula() {
    let (phi, lambda, alpha): (f64, f64, f64) = (2.0, 0.5, 1.5);
    let t: f64 = 1.3;
    // Γ(2) = 1
    let direct = alpha * lambda.powf(alpha * phi) * t.powf(alpha * phi - 1.0) * (lambda + (lambda * t).powf(alpha))
        * (-(lambda * t).powf(alpha)).exp()
        / (lambda + phi);
    assert!(rel(gwl(phi, lambda, alpha).pdf(t), direct) < 1e-13);
}

#[test]
fn mixture_weights_and_components() {
    let d = gwl(3.0, 1.0, 2.0);
    assert_eq!(d.mixture_weights().p, 0.25);
    let [a, b] = d.components();
    for t in [0.2, 0.9, 1.7] {
        assert!(rel(d.pdf(t), 0.25 * a.pdf(t) + 0.75 * b.pdf(t)) < 1e-13);
    }
}

#[test]
fn density_limit_at_zero() {
    assert_eq!(gwl(0.5, 1.0, 1.0).limit_at_zero(), LimitAtZero::Infinite);
    assert_eq!(gwl(2.0, 1.0, 1.0).limit_at_zero(), LimitAtZero::Zero);
    // αφ = 1: f(0⁺) = αλ² / ((λ+φ)Γ(φ)); Lindley gives λ²/(λ+1).
    match gwl(1.0, 2.0, 1.0).limit_at_zero() {
        LimitAtZero::Finite(v) => assert!(rel(v, 4.0 / 3.0) < 1e-14),
        other => panic!("{other:?}"),
    }
    let d = gwl(0.5, 1.5, 2.0);
    match d.limit_at_zero() {
        LimitAtZero::Finite(v) => assert!(rel(v, d.pdf(1e-9)) < 1e-6),
        other => panic!("{other:?}"),
    }
}

#[test]
fn cdf_matches_pdf_quadrature() {
    for (phi, lambda, alpha) in [(2.0, 0.5, 1.5), (0.4, 1.0, 0.7), (1.0, 1.0, 1.0), (5.0, 0.2, 3.0), (0.05, 2.0, 10.0)] {
        let d = gwl(phi, lambda, alpha);
        for p in [0.01, 0.3, 0.7, 0.99] {
            let t = d.quantile(p).unwrap();
            let m = d.quantile(0.5).unwrap().min(t) * 0.5;
            let area = quad(|u| d.pdf(u), 0.0, m, t);
            assert!((d.cdf(t) - area).abs() < 1e-8, "{phi} {lambda} {alpha} p={p}: {} vs {area}", d.cdf(t));
        }
    }
}

#[test]
fn single_gamma_evaluation_matches_both_gammas() {
    for (phi, lambda, alpha) in [(2.0, 0.5, 1.5), (0.3, 1.0, 0.7), (8.0, 0.1, 2.0), (0.006, 0.012, 90.0)] {
        let d = gwl(phi, lambda, alpha);
        let w = lambda / (lambda + phi);
        for p in [1e-6, 0.05, 0.5, 0.95, 1.0 - 1e-9] {
            let t = d.quantile(p).unwrap();
            let x = (lambda * t).powf(alpha);
            if x < 1e-300 {
                // Beyond what the plain reference can represent.
                continue;
            }
            let f = w * reg_inc_gamma(phi, x, Tail::Lower).unwrap() + (1.0 - w) * reg_inc_gamma(phi + 1.0, x, Tail::Lower).unwrap();
            let s = w * reg_inc_gamma(phi, x, Tail::Upper).unwrap() + (1.0 - w) * reg_inc_gamma(phi + 1.0, x, Tail::Upper).unwrap();
            let (f2, s2) = d.cdf_and_survival(t);
            assert!(rel(f2, f) < 1e-12 && rel(s2, s) < 1e-12, "{phi} {lambda} {alpha} p={p}");
        }
    }
}

#[test]
fn quantile_round_trip() {
    for (phi, lambda, alpha) in [(2.0, 0.5, 1.5), (0.0057, 0.0118, 110.4964), (0.5, 3.0, 0.2), (1.0, 1.0, 1.0)] {
        let d = gwl(phi, lambda, alpha);
        for p in [1e-8, 0.001, 0.25, 0.5, 0.75, 0.999, 1.0 - 1e-8] {
            let t = d.quantile(p).unwrap();
            let (f, s) = d.cdf_and_survival(t);
            let err = if p <= 0.5 { rel(f, p) } else { rel(s, 1.0 - p) };
            assert!(err < 1e-9, "{phi} {lambda} {alpha} p={p}: {err}");
        }
    }
    assert!(gwl(1.0, 1.0, 1.0).quantile(1.0).is_err());
}

#[test]
fn large_power_tails_stay_finite() {
    let d = gwl(0.0057, 0.0118, 110.4964);
    for t in [0.1, 1.0, 50.0, 84.0, 86.0, 90.0] {
        let (f, s) = d.cdf_and_survival(t);
        assert!((f + s - 1.0).abs() < 1e-14);
        assert!(d.ln_pdf(t).is_finite());
    }
    // Far past the support bulk S underflows but ln S does not.
    let t = 120.0;
    assert_eq!(d.survival(t), 0.0);
    assert!(d.ln_survival(t).is_finite() && d.ln_survival(t) < -700.0);
    assert!(d.hazard(t).is_finite());
}

#[test]
fn lindley_mean_and_variance() {
    let d = gwl(1.0, 1.0, 1.0);
    assert!(rel(d.mean(), 1.5) < 1e-14);
    assert!(rel(d.variance(), 1.75) < 1e-13);
    // (λ² + 4λ + 2) / (λ²(λ+1)²) at λ = 2
    assert!(rel(gwl(1.0, 2.0, 1.0).variance(), 14.0 / 36.0) < 1e-13);
}

#[test]
fn moments_match_quadrature() {
    for (phi, lambda, alpha) in [(2.0, 0.5, 1.5), (0.4, 1.3, 0.8), (3.0, 0.1, 0.5), (0.8, 2.0, 4.0)] {
        let d = gwl(phi, lambda, alpha);
        let m = d.quantile(0.5).unwrap();
        for r in [0.5, 1.0, 2.0, 3.0] {
            let oracle = quad(|t| t.powf(r) * d.pdf(t), 0.0, m, f64::INFINITY);
            assert!(rel(d.raw_moment(r), oracle) < 1e-8, "{phi} {lambda} {alpha} r={r}");
        }
        let c3 = quad(|t| (t - d.mean()).powi(3) * d.pdf(t), 0.0, m, f64::INFINITY);
        assert!((d.central_moment(3) - c3).abs() < 1e-7 * d.variance().powf(1.5));
        let mean_log = quad(|t| t.ln() * d.pdf(t), 0.0, m, f64::INFINITY);
        assert!((d.mean_log() - mean_log).abs() < 1e-9);
    }
}

#[test]
fn moment_of_missing_order_is_infinite() {
    assert_eq!(gwl(0.5, 1.0, 1.0).raw_moment(-0.6), f64::INFINITY);
}

#[test]
fn lindley_mgf() {
    // λ²(λ − t + 1) / ((λ+1)(λ − t)²)
    let (lambda, t) = (1.0, 0.3);
    let exact = lambda * lambda * (lambda - t + 1.0) / ((lambda + 1.0) * (lambda - t) * (lambda - t));
    let s = gwl(1.0, lambda, 1.0).mgf(t, 2000);
    assert!(s.converged);
    assert!(rel(s.value, exact) < 1e-12, "{} vs {exact}", s.value);
    assert!(!gwl(1.0, 1.0, 0.5).mgf(0.3, 200).converged);
}

#[test]
fn mean_residual_life() {
    for (phi, lambda, alpha) in [(2.0, 0.5, 1.5), (0.5, 1.0, 0.8), (1.0, 1.0, 1.0), (4.0, 0.3, 3.0)] {
        let d = gwl(phi, lambda, alpha);
        assert!(rel(d.mrl(0.0), d.mean()) < 1e-14);
        for p in [0.05, 0.4, 0.9, 0.999] {
            let t = d.quantile(p).unwrap();
            let tail = quad(|u| d.survival(u), t, t * 2.0, f64::INFINITY);
            let oracle = tail / d.survival(t);
            assert!(rel(d.mrl(t), oracle) < 1e-7, "{phi} {lambda} {alpha} p={p}: {} vs {oracle}", d.mrl(t));
        }
    }
}

#[test]
fn shannon_entropy_matches_quadrature() {
    let d = gwl(2.0, 0.5, 1.5);
    let h = d.shannon_entropy().unwrap();
    assert!((h - 1.846_327_825).abs() < 1e-8, "{h}");
    for (phi, lambda, alpha) in [(0.6, 1.2, 0.9), (3.0, 0.2, 2.5), (1.0, 1.0, 1.0)] {
        let d = gwl(phi, lambda, alpha);
        let m = d.quantile(0.5).unwrap();
        let oracle = quad(|t| -d.ln_pdf(t) * d.pdf(t), 0.0, m, f64::INFINITY);
        assert!((d.shannon_entropy().unwrap() - oracle).abs() < 1e-8);
    }
}

#[test]
fn renyi_entropy_matches_quadrature() {
    let h = gwl(2.0, 0.5, 1.5).renyi_entropy(2.0).unwrap();
    assert!((h - 1.699_179_960).abs() < 1e-8, "{h}");
    for (phi, lambda, alpha, rho) in [(0.6, 1.2, 0.9, 0.5), (3.0, 0.2, 2.5, 3.0), (1.0, 1.0, 1.0, 1.5)] {
        let d = gwl(phi, lambda, alpha);
        let m = d.quantile(0.5).unwrap();
        let integral = quad(|t| (rho * d.ln_pdf(t)).exp(), 0.0, m, f64::INFINITY);
        let oracle = integral.ln() / (1.0 - rho);
        assert!((d.renyi_entropy(rho).unwrap() - oracle).abs() < 1e-8);
    }
    assert!(gwl(1.0, 1.0, 1.0).renyi_entropy(1.0).is_err());
    // ρ(αφ − 1) + 1 ≤ 0: ∫ f^ρ diverges at the origin.
    assert!(gwl(0.2, 1.0, 1.0).renyi_entropy(2.0).is_err());
}

#[test]
fn lorenz_curve_matches_quadrature() {
    for (phi, lambda, alpha) in [(2.0, 0.5, 1.5), (0.5, 1.0, 0.7), (1.0, 1.0, 1.0)] {
        let d = gwl(phi, lambda, alpha);
        for p in [0.1, 0.5, 0.9] {
            let tp = d.quantile(p).unwrap();
            let oracle = quad(|t| t * d.pdf(t), 0.0, tp / 2.0, tp) / d.mean();
            assert!((d.lorenz(p).unwrap() - oracle).abs() < 1e-9);
        }
    }
    let d = gwl(2.0, 0.5, 1.5);
    assert_eq!(d.lorenz(0.0).unwrap(), 0.0);
    assert_eq!(d.lorenz(1.0).unwrap(), 1.0);
}

#[test]
fn eta_matches_quadrature() {
    let (phi, lambda) = (2.0, 0.5);
    let oracle = quad(|y: f64| (lambda + y) * (lambda + y).ln() * y.powf(phi - 1.0) * (-y).exp(), 0.0, 2.0, f64::INFINITY);
    assert!((eta(phi, lambda).unwrap() - oracle).abs() < 1e-10);
}

#[test]
fn sampling_is_deterministic_and_unbiased() {
    let d = gwl(2.0, 0.5, 1.5);
    let a = d.sample(1000, 42);
    let b = d.sample(1000, 42);
    assert_eq!(a.values(), b.values());
    assert_ne!(a.values(), d.sample(1000, 43).values());
    let n = 40_000;
    let s = d.sample(n, 7);
    let se = (d.variance() / n as f64).sqrt();
    assert!((s.mean() - d.mean()).abs() < 4.0 * se);
}

#[test]
fn small_shape_sampler_matches_cdf() {
    // Shapes near 0.006 underflow a naive Gamma sampler.
    let d = gwl(0.0057, 0.0118, 110.4964);
    let s = d.sample(20_000, 3);
    for p in [0.1, 0.3, 0.5] {
        let t = d.quantile(p).unwrap();
        let frac = s.values().iter().filter(|&&v| v <= t).count() as f64 / s.len() as f64;
        assert!((frac - p).abs() < 0.02, "p={p}: {frac}");
    }
}

#[test]
fn hazard_shapes() {
    assert_eq!(gwl(2.0, 1.0, 1.0).hazard_shape(), HazardShape::Increasing);
    assert_eq!(gwl(0.5, 1.0, 1.0).hazard_shape(), HazardShape::Bathtub);
    assert_eq!(gwl(1.0, 1.0, 0.4).hazard_shape(), HazardShape::Decreasing);
    assert_eq!(gwl(3.0, 1.0, 0.5).hazard_shape(), HazardShape::Unimodal);
    for phi in [0.5, 0.8, 2.0] {
        assert_eq!(gwl(phi, 1.0, 2.0).hazard_shape(), HazardShape::Increasing, "phi {phi}");
    }
    for phi in [0.2, 0.45] {
        assert_eq!(gwl(phi, 1.0, 2.0).hazard_shape(), HazardShape::Bathtub, "phi {phi}");
    }
}

#[test]
fn decreasing_increasing_decreasing_hazard() {
    let lambda = 0.05f64.powf(1.0 / 0.75);
    let d = gwl(1.0, lambda, 0.75);
    let grid: Vec<f64> = (0..600).map(|i| 0.01 * 1.02f64.powi(i)).collect();
    assert_eq!(d.hazard_shape_on(&grid), HazardShape::DecreasingIncreasingDecreasing);
}

#[test]
fn hazard_at_origin_uses_limit() {
    assert_eq!(gwl(0.5, 1.0, 1.0).hazard(0.0), f64::INFINITY);
    assert_eq!(gwl(2.0, 1.0, 1.0).hazard(0.0), 0.0);
    assert!(rel(gwl(1.0, 1.0, 1.0).hazard(0.0), 0.5) < 1e-14);
}

#[test]
fn params_validate_and_serialize() {
    assert!(GwlParams::new(0.0, 1.0, 1.0).is_err());
    assert!(GwlParams::new(1.0, f64::NAN, 1.0).is_err());
    let p = GwlParams::new(2.0, 0.5, 1.5).unwrap();
    let json = serde_json::to_string(&p).unwrap();
    assert_eq!(serde_json::from_str::<GwlParams>(&json).unwrap(), p);
    assert!(serde_json::from_str::<GwlParams>(r#"{"phi":-1,"lambda":1,"alpha":1}"#).is_err());
}
