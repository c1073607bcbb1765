//! Mixture weights file:
//! `{"mode": "per_sector" | "full", "entries": [{"twice_j", "a"?, "b"?, "w"}]}`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use spinnet::{MixtureWeights, SectorIndex, TwiceSpin, Weights};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Mode {
    Uniform,
    PerSector,
    Full,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    twice_j: u32,
    a: Option<usize>,
    b: Option<usize>,
    w: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsFile {
    mode: Mode,
    #[serde(default)]
    entries: Vec<Entry>,
}

pub fn load(path: Option<&Path>) -> Result<Weights, CliError> {
    let Some(path) = path else {
        return Ok(MixtureWeights::Uniform);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read weights {}: {e}", path.display())))?;
    parse(&text).map_err(|e| CliError::Usage(format!("malformed weights {}: {e}", path.display())))
}

pub fn parse(text: &str) -> Result<Weights, String> {
    let file: WeightsFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    match file.mode {
        Mode::Uniform => {
            if !file.entries.is_empty() {
                return Err("uniform mode takes no entries".into());
            }
            Ok(MixtureWeights::Uniform)
        }
        Mode::PerSector => {
            let mut out = BTreeMap::new();
            for e in file.entries {
                if e.a.is_some() || e.b.is_some() {
                    return Err(format!(
                        "per_sector entry for 2j={} carries a or b",
                        e.twice_j
                    ));
                }
                if out.insert(TwiceSpin(e.twice_j), e.w).is_some() {
                    return Err(format!("duplicate entry for 2j={}", e.twice_j));
                }
            }
            Ok(MixtureWeights::PerSector(out))
        }
        Mode::Full => {
            let mut out = BTreeMap::new();
            for e in file.entries {
                let (Some(a), Some(b)) = (e.a, e.b) else {
                    return Err(format!("full entry for 2j={} needs a and b", e.twice_j));
                };
                let key = SectorIndex {
                    twice_j: TwiceSpin(e.twice_j),
                    a,
                    b,
                };
                if out.insert(key, e.w).is_some() {
                    return Err(format!("duplicate entry ({}, {a}, {b})", e.twice_j));
                }
            }
            Ok(MixtureWeights::Full(out))
        }
    }
}
