//! The `gwl` command-line tool.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a requested
//! fit did not converge.

pub mod config;
pub mod dataset;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use gwl::estimation::{default_starts, fit_multistart, log_likelihood, wald_ci};
use gwl::gof::{aic_aicc, fit_and_compare, ks_test, ttt_transform};
use gwl::simstudy::{export_report, run_study_with_progress, Preset, StudyConfig, StudyReport, PARAM_NAMES};
use gwl::specfun::MinimizeOptions;
use gwl::{Gwl, GwlParams, Method};

use dataset::{load_dataset, Dataset};
use output::{json, num, opt_num, Format, Table};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_NOT_CONVERGED: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "gwl", version, about = "Generalized weighted Lindley lifetime distribution toolkit")]
pub struct Cli {
    /// Output format (default: csv for simulate and ttt, table otherwise)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Random seed (sample) or master seed (simulate)
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Data file path, or one of the bundled sets: aarset, cantareira
    #[arg(long, global = true)]
    pub data: Option<String>,

    /// Use 75 instead of the tabulated 15 for entry 36 of the aarset data
    #[arg(long, global = true)]
    pub corrected_aarset: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the GWL distribution to a dataset
    Fit {
        /// mle, me, olse, wlse, mps, cme, ade or rade
        #[arg(long, default_value = "mle")]
        method: String,
        /// Confidence level of the Wald intervals
        #[arg(long, default_value_t = 0.95)]
        level: f64,
    },
    /// Compare GWL with the GG, GW, EW and GEP models
    Compare,
    /// Run a Monte Carlo estimator comparison
    Simulate {
        /// paper-a: truth (2, 0.5, 0.1); paper-b: truth (0.5, 0.7, 1.5)
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Config file (TOML / key = value lines)
        #[arg(long)]
        config: Option<String>,
        /// Override the number of replicates
        #[arg(long)]
        replicates: Option<usize>,
        /// Write the report here instead of standard output
        #[arg(long)]
        out: Option<String>,
    },
    /// Draw a seeded sample
    Sample {
        #[command(flatten)]
        params: ParamArgs,
        /// Number of draws
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Scaled total-time-on-test curve of a dataset
    Ttt,
    /// Distributional properties at given parameters
    Props {
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 1.0)]
    pub phi: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<GwlParams, String> {
        GwlParams::new(self.phi, self.lambda, self.alpha).map_err(|e| e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, err) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
            code
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn dispatch(cli: &Cli, err: &mut dyn Write) -> Result<(String, u8), String> {
    let format = |default| cli.format.unwrap_or(default);
    let data = || -> Result<Dataset, String> {
        let source = cli.data.as_deref().ok_or("--data is required for this command")?;
        load_dataset(source, cli.corrected_aarset)
    };
    match &cli.command {
        Command::Fit { method, level } => cmd_fit(&data()?, method, *level, format(Format::Table)),
        Command::Compare => cmd_compare(&data()?, format(Format::Table)),
        Command::Simulate { preset, config, replicates, out } => {
            let cfg = simulation_config(preset.as_deref(), config.as_deref(), *replicates, cli.seed)?;
            let text = cmd_simulate(&cfg, format(Format::Csv), err)?;
            match out {
                Some(path) => {
                    std::fs::write(path, text).map_err(|e| format!("cannot write {path}: {e}"))?;
                    Ok((String::new(), EXIT_OK))
                }
                None => Ok((text, EXIT_OK)),
            }
        }
        Command::Sample { params, n } => Ok((cmd_sample(params.params()?, *n, cli.seed.unwrap_or(1), format(Format::Table))?, EXIT_OK)),
        Command::Ttt => Ok((cmd_ttt(&data()?, format(Format::Csv))?, EXIT_OK)),
        Command::Props { params } => Ok((cmd_props(params.params()?, format(Format::Table))?, EXIT_OK)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub dataset: String,
    pub n: usize,
    pub method: String,
    pub estimates: [f64; 3],
    pub std_errors: Option<[f64; 3]>,
    pub ci_level: f64,
    pub ci: Option<[(f64, f64); 3]>,
    pub loglik: f64,
    pub aic: f64,
    pub aicc: f64,
    pub ks_stat: f64,
    pub ks_pvalue: f64,
    /// False when the optimizer stalled or an estimate ran off to the
    /// boundary, even if the optimizer itself reported convergence.
    pub converged: bool,
    pub iterations: usize,
    pub objective_value: f64,
    pub notes: Vec<String>,
}

pub fn cmd_fit(data: &Dataset, method: &str, level: f64, format: Format) -> Result<(String, u8), String> {
    let method: Method = method.parse().map_err(|e: gwl::GwlError| e.to_string())?;
    if !(level > 0.0 && level < 1.0) {
        return Err(format!("--level must be in (0, 1), got {level}"));
    }
    let sample = &data.values;
    let fit = fit_multistart(method, sample, &default_starts(sample), MinimizeOptions::default())
        .ok_or("no feasible start point for these data")?;
    let loglik = log_likelihood(&fit.estimates, sample);
    let (aic, aicc) = aic_aicc(loglik, 3, sample.len()).map_err(|e| e.to_string())?;
    let d = Gwl::from(fit.estimates);
    let ks = ks_test(sample, |t| d.cdf(t));
    let report = FitReport {
        dataset: data.name.clone(),
        n: sample.len(),
        method: method.tag().to_string(),
        estimates: fit.estimates.to_array(),
        std_errors: fit.stderr,
        ci_level: level,
        ci: wald_ci(&fit, level).ok(),
        loglik,
        aic,
        aicc,
        ks_stat: ks.statistic,
        ks_pvalue: ks.p_value,
        converged: !fit.failed(),
        iterations: fit.iterations,
        objective_value: fit.objective_value,
        notes: fit.notes.clone(),
    };
    let code = if fit.failed() { EXIT_NOT_CONVERGED } else { EXIT_OK };
    let text = match format {
        Format::Json => json(&report)?,
        Format::Csv => fit_table(&report).to_csv()?,
        Format::Table => {
            let mut s = format!("GWL fit by {} to {} (n = {})\n\n", report.method, report.dataset, report.n);
            s += &fit_table(&report).render();
            s += &format!("\nconverged: {} ({} iterations)\n", if report.converged { "yes" } else { "no" }, report.iterations);
            for note in &report.notes {
                s += &format!("note: {note}\n");
            }
            s
        }
    };
    Ok((text, code))
}

fn fit_table(r: &FitReport) -> Table {
    let pct = format!("{}", r.ci_level * 100.0);
    let mut t = Table::new(&["quantity", "value", "std_error", &format!("ci{pct}_lower"), &format!("ci{pct}_upper")]);
    for (i, name) in PARAM_NAMES.iter().enumerate() {
        let se = r.std_errors.map(|s| s[i]);
        let ci = r.ci.map(|c| c[i]);
        t.push(vec![name.to_string(), num(r.estimates[i]), opt_num(se), opt_num(ci.map(|c| c.0)), opt_num(ci.map(|c| c.1))]);
    }
    for (name, v) in [
        ("loglik", r.loglik),
        ("aic", r.aic),
        ("aicc", r.aicc),
        ("ks_stat", r.ks_stat),
        ("ks_pvalue", r.ks_pvalue),
    ] {
        t.push(vec![name.to_string(), num(v), String::new(), String::new(), String::new()]);
    }
    t
}

pub fn cmd_compare(data: &Dataset, format: Format) -> Result<(String, u8), String> {
    let run = fit_and_compare(&data.values, MinimizeOptions::default());
    let code = match run.status_of("GWL") {
        Some(s) if s.converged => EXIT_OK,
        _ => EXIT_NOT_CONVERGED,
    };
    if format == Format::Json {
        return Ok((json(&run)?, code));
    }
    let mut t = Table::new(&["model", "k", "loglik", "aic", "aicc", "ks_stat", "ks_pvalue", "best", "converged", "note"]);
    for s in &run.status {
        match run.comparison.row(&s.model) {
            Some(r) => t.push(vec![
                r.model.clone(),
                r.k.to_string(),
                num(r.loglik),
                num(r.aic),
                num(r.aicc),
                num(r.ks_stat),
                num(r.ks_pvalue),
                r.best.to_string(),
                s.converged.to_string(),
                s.note.clone(),
            ]),
            None => {
                let reason = run
                    .comparison
                    .excluded
                    .iter()
                    .find(|(m, _)| *m == s.model)
                    .map_or(s.note.clone(), |(_, why)| why.clone());
                let mut row = vec![s.model.clone()];
                row.extend(std::iter::repeat(String::new()).take(6));
                row.extend(["false".to_string(), s.converged.to_string(), format!("excluded: {reason}")]);
                t.push(row);
            }
        }
    }
    let text = match format {
        Format::Csv => t.to_csv()?,
        _ => format!("Model comparison on {} (n = {})\n\n{}", data.name, data.values.len(), t.render()),
    };
    Ok((text, code))
}

pub fn simulation_config(
    preset: Option<&str>,
    config: Option<&str>,
    replicates: Option<usize>,
    seed: Option<u64>,
) -> Result<StudyConfig, String> {
    let mut cfg = match (preset, config) {
        (Some(p), _) => StudyConfig::preset(p.parse::<Preset>().map_err(|e| e.to_string())?),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
            config::parse_config(&text)?
        }
        (None, None) => return Err("simulate needs --preset or --config".into()),
    };
    if let Some(r) = replicates {
        cfg.replicates = r;
    }
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

pub fn cmd_simulate(cfg: &StudyConfig, format: Format, err: &mut dyn Write) -> Result<String, String> {
    let report = run_study_with_progress(cfg, |done, total| {
        let _ = writeln!(err, "simulate: n = {} done ({done}/{total})", cfg.n_grid[done - 1]);
    })
    .map_err(|e| e.to_string())?;
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            export_report(&report, &mut buf).map_err(|e| e.to_string())?;
            String::from_utf8(buf).map_err(|e| e.to_string())
        }
        Format::Json => json(&report),
        Format::Table => Ok(study_table(&report).render()),
    }
}

fn study_table(report: &StudyReport) -> Table {
    let mut t = Table::new(&["method", "n", "param", "mre", "mse", "failure_proportion"]);
    for c in &report.cells {
        for (i, p) in PARAM_NAMES.iter().enumerate() {
            t.push(vec![c.method.tag().into(), c.n.to_string(), p.to_string(), num(c.mre[i]), num(c.mse[i]), num(c.failure_proportion)]);
        }
    }
    t
}

pub fn cmd_sample(params: GwlParams, n: usize, seed: u64, format: Format) -> Result<String, String> {
    if n == 0 {
        return Err("--n must be at least 1".into());
    }
    let draws = params.distribution().sample(n, seed);
    let values = draws.values();
    match format {
        Format::Json => json(&values),
        Format::Csv => Ok(std::iter::once("t".to_string()).chain(values.iter().map(|v| v.to_string())).collect::<Vec<_>>().join("\n") + "\n"),
        Format::Table => Ok(values.iter().map(|v| format!("{v}\n")).collect()),
    }
}

pub fn cmd_ttt(data: &Dataset, format: Format) -> Result<String, String> {
    let curve = ttt_transform(&data.values);
    if format == Format::Json {
        return json(&curve);
    }
    let mut t = Table::new(&["r_over_n", "g"]);
    for (r, g) in &curve.points {
        t.push(vec![r.to_string(), g.to_string()]);
    }
    match format {
        Format::Csv => t.to_csv(),
        _ => Ok(t.render()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Properties {
    pub phi: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub mean: f64,
    pub variance: f64,
    pub quantiles: Vec<(f64, f64)>,
    pub shannon_entropy: Option<f64>,
    pub renyi_entropy_2: Option<f64>,
    /// `(t, MRL(t))` at the listed quantiles and zero.
    pub mrl: Vec<(f64, f64)>,
    pub hazard_shape: String,
}

const PROBS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

pub fn properties(params: GwlParams) -> Result<Properties, String> {
    let d = params.distribution();
    let quantiles = PROBS
        .iter()
        .map(|&p| d.quantile(p).map(|q| (p, q)).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let mrl = std::iter::once(0.0).chain(quantiles.iter().map(|q| q.1)).map(|t| (t, d.mrl(t))).collect();
    Ok(Properties {
        phi: params.phi(),
        lambda: params.lambda(),
        alpha: params.alpha(),
        mean: d.mean(),
        variance: d.variance(),
        quantiles,
        shannon_entropy: d.shannon_entropy().ok(),
        renyi_entropy_2: d.renyi_entropy(2.0).ok(),
        mrl,
        hazard_shape: d.hazard_shape().to_string(),
    })
}

pub fn cmd_props(params: GwlParams, format: Format) -> Result<String, String> {
    let p = properties(params)?;
    if format == Format::Json {
        return json(&p);
    }
    let mut t = Table::new(&["quantity", "value"]);
    t.push(vec!["mean".into(), num(p.mean)]);
    t.push(vec!["variance".into(), num(p.variance)]);
    for (prob, q) in &p.quantiles {
        t.push(vec![format!("quantile({prob})"), num(*q)]);
    }
    t.push(vec!["shannon_entropy".into(), opt_num(p.shannon_entropy)]);
    t.push(vec!["renyi_entropy(2)".into(), opt_num(p.renyi_entropy_2)]);
    for (at, m) in &p.mrl {
        t.push(vec![format!("mrl({})", num(*at)), num(*m)]);
    }
    t.push(vec!["hazard_shape".into(), p.hazard_shape.clone()]);
    match format {
        Format::Csv => t.to_csv(),
        _ => Ok(t.render()),
    }
}
