//! Run configuration: where `B` comes from, the potential, output format,
//! seed and search budget. A JSON file with this shape may be passed with
//! `--config`; flags given on the command line take precedence.

use std::path::{Path, PathBuf};

use bfree_core::thermo::Potential2;
use bfree_core::{BSet, Budget};
use serde::{Deserialize, Serialize};

use crate::formats::BSetJson;
use crate::generators::{generate, Generator};

pub const DEFAULT_GENERATOR: Generator = Generator::TwoPlusOddPrimeSquares;
pub const DEFAULT_CUTOFF: u64 = 1000;
pub const DEFAULT_MAX_N: usize = 128;
pub const DEFAULT_MAX_NODES: u64 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BSetSource {
    Inline(BSetJson),
    File(PathBuf),
    Generator { name: String, cutoff: u64 },
}

impl Default for BSetSource {
    fn default() -> Self {
        BSetSource::Generator {
            name: DEFAULT_GENERATOR.name().to_string(),
            cutoff: DEFAULT_CUTOFF,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialSpec {
    Family { a00: f64, a01: f64, a1: f64 },
    Table([[f64; 2]; 2]),
}

impl PotentialSpec {
    pub fn potential(&self) -> Potential2 {
        match *self {
            PotentialSpec::Family { a00, a01, a1 } => Potential2::family(a00, a01, a1),
            PotentialSpec::Table(v) => Potential2::new(v),
        }
    }

    pub fn family(&self) -> Option<(f64, f64, f64)> {
        self.potential().as_family()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetSpec {
    pub max_n: usize,
    pub max_nodes: u64,
}

impl Default for BudgetSpec {
    fn default() -> Self {
        BudgetSpec {
            max_n: DEFAULT_MAX_N,
            max_nodes: DEFAULT_MAX_NODES,
        }
    }
}

impl BudgetSpec {
    pub fn budget(&self) -> Budget {
        Budget::nodes(self.max_nodes)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct RunConfig {
    pub bset: BSetSource,
    pub potential: Option<PotentialSpec>,
    pub format: Option<Format>,
    pub seed: u64,
    pub budget: BudgetSpec,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("invalid budget: {0}")]
    Budget(&'static str),
    #[error(transparent)]
    Generator(#[from] crate::generators::GeneratorError),
    #[error("invalid B: {0:?}: {0}")]
    BSet(#[from] bfree_core::BSetError),
    #[error("{0}")]
    Other(String),
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        read_json(path)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.budget.max_n == 0 {
            return Err(ConfigError::Budget("max_n must be positive"));
        }
        if self.budget.max_nodes == 0 {
            return Err(ConfigError::Budget("max_nodes must be positive"));
        }
        Ok(())
    }

    pub fn resolve_bset(&self) -> Result<BSet, ConfigError> {
        match &self.bset {
            BSetSource::Inline(j) => Ok(j.clone().into_bset()?),
            BSetSource::File(path) => Ok(read_json::<BSetJson>(path)?.into_bset()?),
            BSetSource::Generator { name, cutoff } => {
                let gen: Generator = name.parse().map_err(ConfigError::Other)?;
                Ok(generate(gen, *cutoff)?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_full_config() {
        let text = r#"{
            "bset": {"inline": {"elements": [2, 3], "tail_bound": 0, "complete_below": null}},
            "potential": {"family": {"a00": 0, "a01": 0, "a1": 1}},
            "format": "csv",
            "seed": 7,
            "budget": {"max_n": 40, "max_nodes": 1000}
        }"#;
        let c: RunConfig = serde_json::from_str(text).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.format, Some(Format::Csv));
        assert_eq!(c.resolve_bset().unwrap().elements(), &[2, 3]);
        assert_eq!(c.potential.unwrap().family(), Some((0.0, 0.0, 1.0)));
    }

    #[test]
    fn defaults() {
        let c: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c, RunConfig::default());
        let b = c.resolve_bset().unwrap();
        assert_eq!(b.elements()[0], 2);
        assert_eq!(b.complete_below(), Some(DEFAULT_CUTOFF));
        let gen: RunConfig = serde_json::from_str(r#"{"bset": {"generator": {"name": "prime-squares", "cutoff": 50}}}"#).unwrap();
        assert_eq!(gen.resolve_bset().unwrap().elements(), &[4, 9, 25, 49]);
        let bad = RunConfig {
            budget: BudgetSpec { max_n: 0, max_nodes: 1 },
            ..RunConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
