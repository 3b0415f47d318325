/// Controls for [`minimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    pub max_iterations: usize,
    /// Convergence requires the simplex diameter (max-norm distance of every
    /// vertex to the best one) to fall below this.
    pub x_tol: f64,
    /// ... and the spread of objective values across the simplex below this.
    pub f_tol: f64,
    /// Number of times the search is restarted from a fresh simplex around
    /// the current optimum after converging.
    pub restarts: usize,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self { max_iterations: 5000, x_tol: 1e-8, f_tol: 1e-10, restarts: 2, initial_step: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub converged: bool,
    pub iterations: usize,
    pub evaluations: usize,
}

/// Derivative-free Nelder–Mead minimization with dimension-adaptive
/// coefficients. Non-finite objective values are treated as `+∞`, so the
/// objective may signal infeasible points that way.
///
/// Never fails: running out of iterations is reported via `converged`.
pub fn minimize<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], opts: MinimizeOptions) -> Minimum {
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut best = x0.to_vec();
    let mut total_iter = 0;
    let mut evaluations = 0;
    let mut converged = false;
    let mut f_best = eval(&best);
    evaluations += 1;
    for round in 0..=opts.restarts {
        let budget = opts.max_iterations.saturating_sub(total_iter);
        if budget == 0 {
            break;
        }
        let step = if round == 0 { opts.initial_step } else { opts.initial_step * 0.5 };
        let run = nelder_mead(&eval, &best, step, budget, opts.x_tol, opts.f_tol);
        total_iter += run.iterations;
        evaluations += run.evaluations;
        let improved = f_best - run.f;
        if run.f <= f_best {
            best = run.x;
            f_best = run.f;
        }
        converged = run.converged;
        if round > 0 && converged && improved.abs() < opts.f_tol {
            break;
        }
    }
    Minimum { x: best, f: f_best, converged: converged && f_best.is_finite(), iterations: total_iter, evaluations }
}

fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], step: f64, max_iter: usize, x_tol: f64, f_tol: f64) -> Minimum {
    let k = x0.len();
    let kf = k as f64;
    let (alpha, gamma) = (1.0, 1.0 + 2.0 / kf);
    let (rho, sigma) = (0.75 - 0.5 / kf, 1.0 - 1.0 / kf);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
    simplex.push(x0.to_vec());
    for i in 0..k {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evaluations = k + 1;
    let mut order: Vec<usize> = (0..=k).collect();
    let mut centroid = vec![0.0; k];
    let mut trial = vec![0.0; k];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (ib, iw, isw) = (order[0], order[k], order[k - 1]);

        let spread = values[iw] - values[ib];
        let diameter = simplex
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[ib]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if diameter < x_tol && spread.abs() < f_tol {
            converged = true;
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &i in &order[..k] {
            for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x / kf;
            }
        }
        let along = |coef: f64, out: &mut Vec<f64>, worst: &[f64]| {
            for j in 0..k {
                out[j] = centroid[j] + coef * (centroid[j] - worst[j]);
            }
        };

        along(alpha, &mut trial, &simplex[iw]);
        let fr = f(&trial);
        evaluations += 1;
        if fr < values[ib] {
            let reflected = trial.clone();
            along(alpha * gamma, &mut trial, &simplex[iw]);
            let fe = f(&trial);
            evaluations += 1;
            if fe < fr {
                simplex[iw].copy_from_slice(&trial);
                values[iw] = fe;
            } else {
                simplex[iw] = reflected;
                values[iw] = fr;
            }
            continue;
        }
        if fr < values[isw] {
            simplex[iw].copy_from_slice(&trial);
            values[iw] = fr;
            continue;
        }
        // contraction: outside if the reflection beat the worst point
        let outside = fr < values[iw];
        along(if outside { alpha * rho } else { -rho }, &mut trial, &simplex[iw]);
        let fc = f(&trial);
        evaluations += 1;
        if (outside && fc <= fr) || (!outside && fc < values[iw]) {
            simplex[iw].copy_from_slice(&trial);
            values[iw] = fc;
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[ib].clone();
        for i in 0..=k {
            if i == ib {
                continue;
            }
            for j in 0..k {
                simplex[i][j] = best[j] + sigma * (simplex[i][j] - best[j]);
            }
            values[i] = f(&simplex[i]);
            evaluations += 1;
        }
    }
    let ib = (0..=k).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    Minimum { x: simplex[ib].clone(), f: values[ib], converged, iterations, evaluations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + (x[1] + 2.0).powi(2);
        let m = minimize(f, &[0.0, 0.0], MinimizeOptions::default());
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] + 2.0).abs() < 1e-6);
        assert!(m.f < 1e-10);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let m = minimize(f, &[-1.2, 1.0], MinimizeOptions::default());
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4, "{:?}", m.x);
    }

    #[test]
    fn non_convergence_is_reported() {
        let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let opts = MinimizeOptions { max_iterations: 5, ..Default::default() };
        let m = minimize(f, &[-1.2, 1.0], opts);
        assert!(!m.converged);
        assert!(m.iterations <= 5);
    }

    #[test]
    fn infeasible_region_is_avoided() {
        let f = |x: &[f64]| if x[0] < 0.5 { f64::NAN } else { (x[0] - 2.0).powi(2) };
        let m = minimize(f, &[1.0], MinimizeOptions::default());
        assert!((m.x[0] - 2.0).abs() < 1e-6);
    }
}
