use std::path::Path;

use gwl::{datasets, LifetimeSample};

#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub values: LifetimeSample,
    pub provenance: String,
}

/// Resolves `aarset`, `cantareira`, or a path to a text file of positive
/// numbers separated by whitespace, commas or newlines. Lines starting with
/// `#` are ignored.
pub fn load_dataset(source: &str, corrected_aarset: bool) -> Result<Dataset, String> {
    match source {
        "aarset" => Ok(Dataset {
            name: "aarset".into(),
            values: if corrected_aarset { datasets::aarset_corrected() } else { datasets::aarset() },
            provenance: if corrected_aarset {
                "device lifetimes in hours (Aarset 1987), entry 36 corrected from 15 to 75".into()
            } else {
                "device lifetimes in hours (Aarset 1987), as tabulated with entry 36 = 15".into()
            },
        }),
        "cantareira" => Ok(Dataset {
            name: "cantareira".into(),
            values: datasets::cantareira(),
            provenance: "January average flows (m³/s), Cantareira water system".into(),
        }),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
            let values = parse_values(&text)?;
            let name = Path::new(path).file_stem().map_or(path.to_string(), |s| s.to_string_lossy().into_owned());
            Ok(Dataset { name, values, provenance: format!("file {path}") })
        }
    }
}

pub fn parse_values(text: &str) -> Result<LifetimeSample, String> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for token in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let v: f64 = token.parse().map_err(|_| format!("line {}: cannot parse {token:?} as a number", i + 1))?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("line {}: observations must be positive and finite, got {token}", i + 1));
            }
            values.push(v);
        }
    }
    LifetimeSample::new(values).map_err(|e| e.to_string())
}
