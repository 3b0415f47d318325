use serde::Deserialize;

use gwl::simstudy::{Preset, StudyConfig};
use gwl::{GwlParams, Method};

/// Simulation config file. It is TOML, so plain `key = value` lines work:
///
/// ```text
/// truth.phi = 2
/// truth.lambda = 0.5
/// truth.alpha = 0.1
/// n_grid = [50, 150, 250]
/// replicates = 500
/// methods = ["mps", "ade", "rade", "mle"]
/// master_seed = 2015
/// ```
///
/// Everything except `truth` is optional and defaults to the `paper-a`
/// preset's value.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    truth: Truth,
    n_grid: Option<Vec<usize>>,
    replicates: Option<usize>,
    methods: Option<Vec<String>>,
    master_seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Truth {
    phi: f64,
    lambda: f64,
    alpha: f64,
}

pub fn parse_config(text: &str) -> Result<StudyConfig, String> {
    let raw: ConfigFile = toml::from_str(text).map_err(|e| describe(&e, text))?;
    let truth = GwlParams::new(raw.truth.phi, raw.truth.lambda, raw.truth.alpha).map_err(|e| format!("truth: {e}"))?;
    let defaults = StudyConfig::preset(Preset::PaperA);
    let methods = match raw.methods {
        Some(names) => names
            .iter()
            .map(|s| s.parse::<Method>().map_err(|e| format!("methods: {e}")))
            .collect::<Result<Vec<_>, _>>()?,
        None => defaults.methods,
    };
    let config = StudyConfig {
        truth,
        n_grid: raw.n_grid.unwrap_or(defaults.n_grid),
        replicates: raw.replicates.unwrap_or(defaults.replicates),
        methods,
        master_seed: raw.master_seed.unwrap_or(defaults.master_seed),
    };
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

/// Prefixes the parser message with the line and key it points at.
fn describe(e: &toml::de::Error, text: &str) -> String {
    let Some(span) = e.span() else { return format!("config: {}", e.message()) };
    let line_no = text[..span.start].matches('\n').count() + 1;
    let line = text.lines().nth(line_no - 1).unwrap_or("");
    match line.split_once('=') {
        Some((key, _)) => format!("config line {line_no}, field {}: {}", key.trim(), e.message()),
        None => format!("config line {line_no}: {}", e.message()),
    }
}
