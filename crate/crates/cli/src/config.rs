use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

/// Experiment parameters read from a TOML file. Command-line flags take
/// precedence over the file, which takes precedence over these defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub rank: usize,
    /// Random samples for sampled checks.
    pub samples: usize,
    /// Exact BFS norm cutoff.
    pub cutoff: usize,
    pub pool_depth: usize,
    pub elem_len: usize,
    pub k_max: usize,
    /// Largest power tried by stable norm estimates.
    pub n_max: u32,
    /// Length cap for commutator searches.
    pub len_cap: usize,
    /// Length cap for defect enumeration.
    pub max_len: usize,
    /// Largest Whitehead orbit level explored.
    pub level_limit: usize,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: autqm::verify::DEFAULT_SEED,
            rank: 2,
            samples: 200,
            cutoff: 8,
            pool_depth: 1,
            elem_len: 2,
            k_max: 2,
            n_max: 16,
            len_cap: 2,
            max_len: 4,
            level_limit: autqm::whitehead::DEFAULT_LEVEL_LIMIT,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}
