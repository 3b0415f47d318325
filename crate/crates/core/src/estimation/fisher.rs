//! Expected (per-observation) Fisher information.
//!
//! [`fisher_information`] evaluates the closed-form elements as published,
//! with their expectation terms integrated numerically, and independently
//! estimates every element as `−E[∂² ln f / ∂θ_i ∂θ_j]` by integrating a
//! finite-difference Hessian of the log-density against the density. Each
//! element is reported with its agreement status instead of being patched.

use serde::Serialize;

use crate::distribution::{Gwl, GwlParams};
use crate::specfun::{
    digamma_unchecked, integrate, ln_gamma_unchecked, numeric_hessian, trigamma_unchecked, Domain, Matrix,
    QuadratureSpec,
};

/// Agreement tolerance between the two evaluations, relative to
/// `max(1, |reference|)`.
pub const AGREEMENT_TOL: f64 = 1e-4;

/// Step of the finite-difference Hessian inside the reference integrals.
const REFERENCE_STEP: f64 = 1e-4;

// The reference integrand carries finite-difference noise of order 1e-8, so
// asking its quadrature for more than that only burns subdivisions.
fn closed_form_spec() -> QuadratureSpec {
    QuadratureSpec::new(1e-13, 1e-11, 4000)
}

fn reference_spec() -> QuadratureSpec {
    QuadratureSpec::new(1e-8, 1e-8, 400)
}

const NAMES: [&str; 3] = ["phi", "lambda", "alpha"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementCheck {
    /// e.g. `"phi,lambda"`.
    pub element: String,
    pub closed_form: f64,
    pub reference: f64,
    pub agrees: bool,
    /// False if any integral behind either value missed its tolerance.
    pub quadrature_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FisherReport {
    /// The published element formulas, evaluated.
    pub closed_form: Matrix,
    /// `−E[∇² ln f]` from quadrature of a numeric Hessian.
    pub reference: Matrix,
    /// The six distinct elements in the order φφ, φλ, φα, λλ, λα, αα.
    pub elements: Vec<ElementCheck>,
}

impl FisherReport {
    pub fn disagreements(&self) -> impl Iterator<Item = &ElementCheck> {
        self.elements.iter().filter(|e| !e.agrees)
    }

    pub fn element(&self, i: usize, j: usize) -> &ElementCheck {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let idx = match (a, b) {
            (0, 0) => 0,
            (0, 1) => 1,
            (0, 2) => 2,
            (1, 1) => 3,
            (1, 2) => 4,
            (2, 2) => 5,
            _ => panic!("element index out of range"),
        };
        &self.elements[idx]
    }
}

struct Expectation<'a> {
    dist: &'a Gwl,
    split: f64,
    spec: QuadratureSpec,
    ok: std::cell::Cell<bool>,
}

impl<'a> Expectation<'a> {
    fn new(dist: &'a Gwl, spec: QuadratureSpec) -> Self {
        let split = dist.quantile(0.5).unwrap_or_else(|_| dist.mean());
        Self { dist, split, spec, ok: std::cell::Cell::new(true) }
    }

    /// `E[g(T)]`, split at the median so each piece has a single difficult end.
    fn of(&self, g: impl Fn(f64) -> f64) -> f64 {
        let spec = self.spec;
        let h = |t: f64| {
            let w = self.dist.pdf(t);
            if w == 0.0 {
                0.0
            } else {
                g(t) * w
            }
        };
        let lower = integrate(&h, Domain::Finite(0.0, self.split), spec);
        let upper = integrate(&h, Domain::SemiInfinite(self.split), spec);
        if !(lower.converged && upper.converged) {
            self.ok.set(false);
        }
        lower.value + upper.value
    }
}

/// Evaluates the closed-form information elements and checks each against
/// the quadrature reference.
pub fn fisher_information(params: &GwlParams) -> FisherReport {
    let dist = params.distribution();
    let closed_form_check = Expectation::new(&dist, closed_form_spec());
    let closed_form = closed_form_elements(params, &closed_form_check);
    let reference_check = Expectation::new(&dist, reference_spec());
    let reference = reference_elements(params, &reference_check);
    let ok = closed_form_check.ok.get() && reference_check.ok.get();

    let mut elements = Vec::with_capacity(6);
    for (i, j) in [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)] {
        let c = closed_form.get(i, j);
        let r = reference.get(i, j);
        elements.push(ElementCheck {
            element: format!("{},{}", NAMES[i], NAMES[j]),
            closed_form: c,
            reference: r,
            agrees: (c - r).abs() <= AGREEMENT_TOL * r.abs().max(1.0),
            quadrature_ok: ok,
        });
    }
    FisherReport { closed_form, reference, elements }
}

/// The published elements, term by term. `ln(λT)^2` is read as
/// `(ln(λT))²`.
fn closed_form_elements(params: &GwlParams, e: &Expectation) -> Matrix {
    let (phi, lambda, alpha) = (params.phi(), params.lambda(), params.alpha());
    let lp = lambda + phi;
    let psi = digamma_unchecked(phi);
    let x_of = |t: f64| (lambda * t).powf(alpha);

    let i_pp = -1.0 / (lp * lp) + trigamma_unchecked(phi);
    let i_pl = -alpha / lambda + 1.0 / (lp * lp);
    let i_pa = (-alpha * lambda.ln() - psi + alpha * lambda.ln() - 1.0 / lp) / alpha;

    let i_ll = alpha * phi / (lambda * lambda)
        + (alpha - 1.0) * lambda.powf(alpha - 2.0) * (psi - alpha * lambda.ln() + 1.0 / lp)
        + e.of(|t| {
            let x = x_of(t);
            alpha * t.powf(alpha) * lambda.powf(alpha - 2.0) * ((alpha - 2.0) * lambda - x) / (lambda + x)
        })
        - 1.0 / (lp * lp);

    let i_aa = phi * (lp + 1.0) * (psi * psi + psi) / (alpha * alpha * lp)
        + 1.0 / (alpha * alpha)
        + (2.0 * (lambda + 2.0 * phi + 1.0) * psi + 2.0) / (alpha * alpha * lp)
        - e.of(|t| {
            let x = x_of(t);
            let l = (lambda * t).ln();
            lambda * x * l * l / (lambda + x)
        });

    let s = phi + 1.0 - 1.0 / alpha;
    let gamma_ratio = if s > 0.0 { (ln_gamma_unchecked(s) - ln_gamma_unchecked(phi)).exp() } else { f64::NAN };
    let i_al = -phi / lambda
        + (lambda * (1.0 + phi * psi) + phi * (1.0 + (phi + 1.0) * digamma_unchecked(phi + 1.0))) / (lambda * lp)
        - e.of(|t| {
            let x = x_of(t);
            (1.0 + alpha * lambda.powf(alpha - 1.0) * t.powf(alpha)) * x * (lambda * t).ln() / (lambda + x).powi(2)
        })
        + (phi + lambda + 1.0 - 1.0 / alpha) * gamma_ratio / lp
        - e.of(|t| {
            let x = x_of(t);
            (alpha * lambda.powf(alpha - 1.0) * t.powf(alpha) * (lambda * t).ln() + (lambda * t).powf(alpha - 1.0))
                / (lambda + x)
        });

    Matrix::from_rows(&[vec![i_pp, i_pl, i_pa], vec![i_pl, i_ll, i_al], vec![i_pa, i_al, i_aa]])
}

fn reference_elements(params: &GwlParams, e: &Expectation) -> Matrix {
    let theta = params.to_array();
    let hess_at = |t: f64| {
        let ln_f = |th: &[f64]| match GwlParams::new(th[0], th[1], th[2]) {
            Ok(p) => Gwl::from(p).ln_pdf(t),
            Err(_) => f64::NAN,
        };
        numeric_hessian(ln_f, &theta, REFERENCE_STEP).ok()
    };
    let mut m = Matrix::zeros(3);
    for i in 0..3 {
        for j in 0..=i {
            let v = -e.of(|t| hess_at(t).map_or(f64::NAN, |h| h.get(i, j)));
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}
