//! Monte Carlo comparison of estimators: draw samples from a known GWL,
//! fit every method on the same sample, and aggregate mean relative
//! estimates, mean squared errors and failure rates per sample size.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::GwlParams;
use crate::error::{GwlError, Result};
use crate::estimation::{fit, Method};
use crate::specfun::MinimizeOptions;

pub const PARAM_NAMES: [&str; 3] = ["phi", "lambda", "alpha"];
pub const CSV_HEADER: &str = "method,n,param,mre,mse,failure_proportion";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub truth: GwlParams,
    pub n_grid: Vec<usize>,
    pub replicates: usize,
    pub methods: Vec<Method>,
    pub master_seed: u64,
}

/// Named configurations. Both truths that the original study mentions are
/// shipped since its text and figure disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `(φ, λ, α) = (2, 0.5, 0.1)`
    PaperA,
    /// `(φ, λ, α) = (0.5, 0.7, 1.5)`
    PaperB,
}

impl std::str::FromStr for Preset {
    type Err = GwlError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-a" => Ok(Preset::PaperA),
            "paper-b" => Ok(Preset::PaperB),
            _ => Err(GwlError::Config(format!("unknown preset '{s}' (expected paper-a or paper-b)"))),
        }
    }
}

impl StudyConfig {
    pub const DEFAULT_REPLICATES: usize = 500;
    pub const DEFAULT_SEED: u64 = 2015;

    /// Sample sizes 50, 60, ..., 250, all eight methods, 500 replicates.
    pub fn preset(preset: Preset) -> Self {
        let (phi, lambda, alpha) = match preset {
            Preset::PaperA => (2.0, 0.5, 0.1),
            Preset::PaperB => (0.5, 0.7, 1.5),
        };
        StudyConfig {
            truth: GwlParams::new(phi, lambda, alpha).expect("preset parameters are valid"),
            n_grid: (50..=250).step_by(10).collect(),
            replicates: Self::DEFAULT_REPLICATES,
            methods: Method::ALL.to_vec(),
            master_seed: Self::DEFAULT_SEED,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(GwlError::Config("replicates: must be at least 1".into()));
        }
        if self.n_grid.is_empty() {
            return Err(GwlError::Config("n_grid: must list at least one sample size".into()));
        }
        if let Some(n) = self.n_grid.iter().find(|&&n| n < 4) {
            return Err(GwlError::Config(format!("n_grid: sample sizes must be at least 4, got {n}")));
        }
        if self.methods.is_empty() {
            return Err(GwlError::Config("methods: must list at least one method".into()));
        }
        Ok(())
    }
}

/// Aggregates for one `(method, n)` pair. `mre` and `mse` are over the
/// successful replicates only and are NaN when there are none.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyCell {
    pub method: Method,
    pub n: usize,
    pub mre: [f64; 3],
    pub mse: [f64; 3],
    pub failure_proportion: f64,
    pub successful_replicates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyReport {
    pub config: StudyConfig,
    /// Ordered by `n` (as in the grid), then method (as configured).
    pub cells: Vec<StudyCell>,
}

impl StudyReport {
    pub fn cell(&self, method: Method, n: usize) -> Option<&StudyCell> {
        self.cells.iter().find(|c| c.method == method && c.n == n)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `j` at sample size `n`; any replicate can be recomputed
/// on its own.
pub fn replicate_seed(master_seed: u64, n: usize, j: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master_seed) ^ n as u64) ^ j as u64)
}

/// Estimates of every configured method on replicate `j` at size `n`, `None`
/// where the fit failed.
pub fn run_replicate(config: &StudyConfig, n: usize, j: usize) -> Vec<Option<[f64; 3]>> {
    let data = config.truth.distribution().sample(n, replicate_seed(config.master_seed, n, j));
    config
        .methods
        .iter()
        .map(|&m| {
            let r = fit(m, &data, None, MinimizeOptions::default());
            (!r.failed()).then(|| r.estimates.to_array())
        })
        .collect()
}

pub fn run_study(config: &StudyConfig) -> Result<StudyReport> {
    run_study_with_progress(config, |_, _| {})
}

/// As [`run_study`], calling `progress(done, total)` after each sample size.
///
/// Replicates run in parallel; results are collected in replicate order and
/// summed sequentially, so the report does not depend on thread count.
pub fn run_study_with_progress(config: &StudyConfig, mut progress: impl FnMut(usize, usize)) -> Result<StudyReport> {
    config.validate()?;
    let truth = config.truth.to_array();
    let mut cells = Vec::with_capacity(config.n_grid.len() * config.methods.len());
    for (done, &n) in config.n_grid.iter().enumerate() {
        let per_replicate: Vec<Vec<Option<[f64; 3]>>> =
            (0..config.replicates).into_par_iter().map(|j| run_replicate(config, n, j)).collect();
        for (k, &method) in config.methods.iter().enumerate() {
            let mut rel = [0.0; 3];
            let mut sq = [0.0; 3];
            let mut ok = 0usize;
            for est in per_replicate.iter().filter_map(|r| r[k]) {
                ok += 1;
                for i in 0..3 {
                    rel[i] += est[i] / truth[i];
                    sq[i] += (est[i] - truth[i]).powi(2);
                }
            }
            let denom = ok as f64;
            cells.push(StudyCell {
                method,
                n,
                mre: rel.map(|s| if ok == 0 { f64::NAN } else { s / denom }),
                mse: sq.map(|s| if ok == 0 { f64::NAN } else { s / denom }),
                failure_proportion: 1.0 - denom / config.replicates as f64,
                successful_replicates: ok,
            });
        }
        progress(done + 1, config.n_grid.len());
    }
    Ok(StudyReport { config: config.clone(), cells })
}

/// Long-format CSV, one row per `(method, n, param)`, with header
/// `method,n,param,mre,mse,failure_proportion`.
pub fn export_report<W: Write>(report: &StudyReport, out: W) -> Result<()> {
    let io = |e: csv::Error| GwlError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER.split(',')).map_err(io)?;
    for c in &report.cells {
        for (i, name) in PARAM_NAMES.iter().enumerate() {
            w.serialize((c.method.tag(), c.n, name, c.mre[i], c.mse[i], c.failure_proportion)).map_err(io)?;
        }
    }
    w.flush().map_err(|e| GwlError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(methods: Vec<Method>, n_grid: Vec<usize>, replicates: usize) -> StudyConfig {
        StudyConfig {
            truth: GwlParams::new(2.0, 0.5, 1.5).unwrap(),
            n_grid,
            replicates,
            methods,
            master_seed: 7,
        }
    }

    #[test]
    fn validation_names_the_field() {
        let mut c = small(vec![Method::Mps], vec![50], 10);
        assert!(c.validate().is_ok());
        c.replicates = 0;
        assert!(c.validate().unwrap_err().to_string().contains("replicates"));
        let c = small(vec![Method::Mps], vec![3], 10);
        assert!(c.validate().unwrap_err().to_string().contains("n_grid"));
        let c = small(vec![], vec![50], 10);
        assert!(c.validate().unwrap_err().to_string().contains("methods"));
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        let mut seen = std::collections::HashSet::new();
        for n in [50, 60] {
            for j in 0..1000 {
                assert!(seen.insert(replicate_seed(1, n, j)));
            }
        }
        assert_eq!(replicate_seed(1, 50, 3), replicate_seed(1, 50, 3));
        assert_ne!(replicate_seed(1, 50, 3), replicate_seed(2, 50, 3));
    }

    #[test]
    fn aggregation_matches_a_hand_loop() {
        let c = small(vec![Method::Mle, Method::Mps], vec![40], 6);
        let report = run_study(&c).unwrap();
        let truth = c.truth.to_array();
        for (k, &m) in c.methods.iter().enumerate() {
            let ests: Vec<[f64; 3]> = (0..6).filter_map(|j| run_replicate(&c, 40, j)[k]).collect();
            let cell = report.cell(m, 40).unwrap();
            assert_eq!(cell.successful_replicates, ests.len());
            assert_eq!(cell.failure_proportion, 1.0 - ests.len() as f64 / 6.0);
            for i in 0..3 {
                let mre = ests.iter().map(|e| e[i] / truth[i]).sum::<f64>() / ests.len() as f64;
                let mse = ests.iter().map(|e| (e[i] - truth[i]).powi(2)).sum::<f64>() / ests.len() as f64;
                assert!((cell.mre[i] - mre).abs() <= 1e-12 * mre.abs());
                assert!((cell.mse[i] - mse).abs() <= 1e-12 * mse.abs());
            }
        }
    }

    #[test]
    fn deterministic_across_runs_and_thread_counts() {
        let c = small(vec![Method::Mps, Method::Ade], vec![30, 60], 8);
        let a = run_study(&c).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| run_study(&c).unwrap());
        let mut x = Vec::new();
        let mut y = Vec::new();
        export_report(&a, &mut x).unwrap();
        export_report(&b, &mut y).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn csv_shape_and_round_trip() {
        let c = small(vec![Method::Mps], vec![40], 3);
        let report = run_study(&c).unwrap();
        let mut buf = Vec::new();
        export_report(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some(CSV_HEADER));
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let rows: Vec<(String, usize, String, f64, f64, f64)> = r.deserialize().map(|x| x.unwrap()).collect();
        assert_eq!(rows.len(), 3);
        let cell = &report.cells[0];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!((row.0.as_str(), row.1, row.2.as_str()), ("MPS", 40, PARAM_NAMES[i]));
            assert_eq!((row.3, row.4, row.5), (cell.mre[i], cell.mse[i], cell.failure_proportion));
        }
    }

    #[test]
    fn mps_error_shrinks_with_n() {
        let c = small(vec![Method::Mps], vec![50, 250], 200);
        let report = run_study(&c).unwrap();
        let (a, b) = (report.cell(Method::Mps, 50).unwrap(), report.cell(Method::Mps, 250).unwrap());
        for i in 0..3 {
            assert!(b.mse[i] < a.mse[i], "{i}: {} vs {}", b.mse[i], a.mse[i]);
        }
    }
}
