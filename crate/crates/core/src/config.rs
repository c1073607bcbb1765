use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::multiplicity::DEFAULT_EXACT_THRESHOLD;
use crate::scalar::Real;

/// Default oracle dimension cap, `2^14`.
pub const DEFAULT_DIMENSION_CAP: u64 = 1 << 14;

/// Logarithm base for entropy-like outputs. Internals always use natural log.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "e")]
    E,
}

impl LogBase {
    /// Converts a natural-log quantity into this base.
    pub fn from_nats<T: Real>(self, nats: T) -> T {
        match self {
            LogBase::Two => nats / T::of(std::f64::consts::LN_2),
            LogBase::E => nats,
        }
    }

    pub fn to_nats<T: Real>(self, value: T) -> T {
        match self {
            LogBase::Two => value * T::of(std::f64::consts::LN_2),
            LogBase::E => value,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            LogBase::Two => "bits",
            LogBase::E => "nats",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Two => "2",
            LogBase::E => "e",
        })
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            other => Err(Error::InvalidArgument(format!(
                "log base must be 2 or e, got {other:?}"
            ))),
        }
    }
}

/// Random generator behind every seeded sampler.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RngAlgorithm {
    /// ChaCha with 8 rounds; shard `k` uses stream `k` of the master seed.
    #[default]
    ChaCha8,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Library-wide knobs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub log_base: LogBase,
    /// Largest `2j_max` handled with exact integers.
    pub exact_threshold: u32,
    /// Largest Hilbert-space dimension the brute-force oracle will build.
    pub dimension_cap: u64,
    pub output_format: OutputFormat,
    pub seed: u64,
    /// Fixed shard count for the distillation sampler.
    pub shards: u32,
    pub rng: RngAlgorithm,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            log_base: LogBase::Two,
            exact_threshold: DEFAULT_EXACT_THRESHOLD,
            dimension_cap: DEFAULT_DIMENSION_CAP,
            output_format: OutputFormat::Json,
            seed: 0,
            shards: 64,
            rng: RngAlgorithm::ChaCha8,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = Config::default();
        assert_eq!(c.log_base, LogBase::Two);
        assert_eq!(c.exact_threshold, 4096);
        assert_eq!(c.dimension_cap, 16384);
        assert_eq!(c.output_format, OutputFormat::Json);
        assert_eq!(c.seed, 0);
    }

    #[test]
    fn base_conversion() {
        let nats = 2f64.ln();
        assert!((LogBase::Two.from_nats(nats) - 1.0).abs() < 1e-15);
        assert_eq!(LogBase::E.from_nats(nats), nats);
        assert_eq!("e".parse::<LogBase>().unwrap(), LogBase::E);
        assert!("10".parse::<LogBase>().is_err());
    }

    #[test]
    fn partial_config_fills_defaults() {
        let c: Config = serde_json::from_str(r#"{"log_base": "e", "seed": 7}"#).unwrap();
        assert_eq!(c.log_base, LogBase::E);
        assert_eq!(c.seed, 7);
        assert_eq!(c.dimension_cap, DEFAULT_DIMENSION_CAP);
    }
}
