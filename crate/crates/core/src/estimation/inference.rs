use crate::error::{GwlError, Result};
use crate::specfun::reg_inc_gamma_pair_ln;

use super::FitResult;

/// Standard normal cdf, `Φ(z) = (1 ± P(1/2, z²/2)) / 2`.
pub fn normal_cdf(z: f64) -> f64 {
    let x = 0.5 * z * z;
    let (p, q) = reg_inc_gamma_pair_ln(0.5, x, x.ln());
    if z >= 0.0 {
        0.5 + 0.5 * p
    } else {
        0.5 * q
    }
}

/// Standard normal quantile: Acklam's rational approximation followed by
/// two Halley corrections against [`normal_cdf`].
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(GwlError::Domain(format!("normal quantile level must lie in (0, 1), got {p}")));
    }
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.383577518672690e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] =
        [-5.447609879822406e1, 1.615858368580409e2, -1.556989798598866e2, 6.680131188771972e1, -1.328068155288572e1];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [7.784695709041462e-3, 3.224671290700398e-1, 2.445134137142996, 3.754408661907416];
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| {
        let r = (-2.0 * q.ln()).sqrt();
        (((((C[0] * r + C[1]) * r + C[2]) * r + C[3]) * r + C[4]) * r + C[5])
            / ((((D[0] * r + D[1]) * r + D[2]) * r + D[3]) * r + 1.0)
    };
    let mut z = if p < P_LOW {
        tail(p)
    } else if p > 1.0 - P_LOW {
        -tail(1.0 - p)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };
    for _ in 0..2 {
        // Work on the smaller tail so the residual keeps relative precision.
        let e = if z < 0.0 { normal_cdf(z) - p } else { (1.0 - p) - normal_cdf(-z) };
        let u = e * (2.0 * std::f64::consts::PI).sqrt() * (0.5 * z * z).exp();
        z -= u / (1.0 + 0.5 * z * u);
    }
    Ok(z)
}

/// Two-sided Wald intervals `θ̂ ± z_{(1+level)/2} · se`, with lower ends
/// floored at zero because all three parameters are positive.
pub fn wald_ci(fit: &FitResult, level: f64) -> Result<[(f64, f64); 3]> {
    if !(level > 0.0 && level < 1.0) {
        return Err(GwlError::Domain(format!("confidence level must lie in (0, 1), got {level}")));
    }
    let se = fit.stderr.ok_or(GwlError::NoCovariance)?;
    let z = normal_quantile(0.5 + 0.5 * level)?;
    let est = fit.estimates.to_array();
    Ok([0, 1, 2].map(|i| ((est[i] - z * se[i]).max(0.0), est[i] + z * se[i])))
}
