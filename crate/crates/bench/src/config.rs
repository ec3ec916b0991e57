//! Experiment configuration: a TOML file with unknown keys rejected.
//!
//! ```toml
//! metrics = ["cut_value"]          # add "wall_time" for a timing column
//!
//! [instances]
//! family = "random_regular"        # random_regular | grid | torus | torus_plus_random
//! sizes = [8, 10, 12]              # vertex counts, or lattice side lengths
//! degree = 3                       # random_regular and the torus_plus_random overlay
//! girth = 5                        # optional lift target (random_regular only)
//! copies = 1                       # optional disjoint copies of each instance
//! count = 30
//! seed = 1
//!
//! [algorithms.alr]                 # every algorithm table is optional
//! [algorithms.qaoa]
//! p = [1, 2, 3]
//! [algorithms.klocal]
//! k = [1, 2]
//! [algorithms.tpower]
//! k = [10]
//!
//! [output]
//! csv = "records.csv"              # relative to the config file
//! svg = "chart.svg"
//! [output.compare]
//! a = "alr"
//! b = "qaoa"
//! path = "summary.json"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use girthcut_core::qaoa::{DEFAULT_BUDGET, DEFAULT_QUBIT_LIMIT};
use girthcut_core::spectral::{DEFAULT_MAX_ITER, DEFAULT_TOL};

/// Upper bound on `instances x trials` accepted before any work starts.
pub const MAX_TRIALS: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parsing config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    RandomRegular,
    Grid,
    Torus,
    TorusPlusRandom,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::RandomRegular => "random_regular",
            Family::Grid => "grid",
            Family::Torus => "torus",
            Family::TorusPlusRandom => "torus_plus_random",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub family: Family,
    pub sizes: Vec<usize>,
    #[serde(default = "default_degree")]
    pub degree: usize,
    pub girth: Option<usize>,
    #[serde(default = "one")]
    pub copies: usize,
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_degree() -> usize {
    3
}

fn one() -> usize {
    1
}

impl InstanceSpec {
    /// Vertex count of an instance built from `size`.
    pub fn vertices(&self, size: usize) -> usize {
        let base = match self.family {
            Family::RandomRegular => size,
            _ => size * size,
        };
        base * self.copies
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlrSettings {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "one")]
    pub seeds: usize,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_max_iter() -> usize {
    DEFAULT_MAX_ITER
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QaoaSettings {
    pub p: Vec<usize>,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "one")]
    pub seeds: usize,
    /// When positive, also record the best cut among this many shots.
    #[serde(default)]
    pub shots: usize,
}

fn default_budget() -> usize {
    DEFAULT_BUDGET
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalSettings {
    pub k: Vec<usize>,
    #[serde(default = "one")]
    pub seeds: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Algorithms {
    pub alr: Option<AlrSettings>,
    pub qaoa: Option<QaoaSettings>,
    pub klocal: Option<LocalSettings>,
    pub tpower: Option<LocalSettings>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    CutValue,
    WallTime,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareSettings {
    pub a: String,
    pub b: String,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    pub path: PathBuf,
}

pub fn default_epsilon() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    pub csv: PathBuf,
    pub svg: Option<PathBuf>,
    pub compare: Option<CompareSettings>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instances: InstanceSpec,
    #[serde(default)]
    pub algorithms: Algorithms,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<Metric>,
    pub output: OutputSettings,
}

fn default_metrics() -> Vec<Metric> {
    vec![Metric::CutValue]
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: ExperimentConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Reads, validates, and resolves output paths against the file's directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut config = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.output.csv = base.join(&config.output.csv);
        if let Some(svg) = &mut config.output.svg {
            *svg = base.join(&*svg);
        }
        if let Some(cmp) = &mut config.output.compare {
            cmp.path = base.join(&cmp.path);
        }
        Ok(config)
    }

    pub fn wall_time(&self) -> bool {
        self.metrics.contains(&Metric::WallTime)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let inst = &self.instances;
        if inst.count == 0 {
            return Err(invalid("instances.count must be at least 1"));
        }
        if inst.sizes.is_empty() {
            return Err(invalid("instances.sizes is empty"));
        }
        if inst.copies == 0 {
            return Err(invalid("instances.copies must be at least 1"));
        }
        if inst.girth.is_some() && inst.family != Family::RandomRegular {
            return Err(invalid("instances.girth applies to random_regular only"));
        }
        if !self.metrics.contains(&Metric::CutValue) {
            return Err(invalid("metrics must include cut_value"));
        }
        let algos = &self.algorithms;
        if algos.alr.is_none()
            && algos.qaoa.is_none()
            && algos.klocal.is_none()
            && algos.tpower.is_none()
        {
            return Err(invalid("no algorithms configured"));
        }
        let mut trials_per_instance = 0;
        if let Some(a) = &algos.alr {
            if a.tol.is_nan() || a.tol <= 0.0 || a.max_iter == 0 || a.seeds == 0 {
                return Err(invalid(
                    "algorithms.alr needs tol > 0, max_iter >= 1 and seeds >= 1",
                ));
            }
            trials_per_instance += a.seeds;
        }
        if let Some(q) = &algos.qaoa {
            if q.p.is_empty() || q.p.contains(&0) || q.budget == 0 || q.seeds == 0 {
                return Err(invalid(
                    "algorithms.qaoa needs depths p >= 1, budget >= 1 and seeds >= 1",
                ));
            }
            let largest = inst
                .sizes
                .iter()
                .map(|&s| inst.vertices(s))
                .max()
                .unwrap_or(0);
            if largest > DEFAULT_QUBIT_LIMIT {
                return Err(invalid(format!(
                    "qaoa on {largest} vertices exceeds the {DEFAULT_QUBIT_LIMIT}-qubit limit"
                )));
            }
            trials_per_instance += q.p.len() * q.seeds * if q.shots > 0 { 2 } else { 1 };
        }
        for (name, local) in [("klocal", &algos.klocal), ("tpower", &algos.tpower)] {
            if let Some(l) = local {
                if l.k.is_empty() || l.seeds == 0 {
                    return Err(invalid(format!(
                        "algorithms.{name} needs a non-empty k list and seeds >= 1"
                    )));
                }
                trials_per_instance += l.k.len() * l.seeds;
            }
        }
        let total = inst.sizes.len() * inst.count * trials_per_instance;
        if total > MAX_TRIALS {
            return Err(invalid(format!(
                "{total} trials exceeds the limit of {MAX_TRIALS}"
            )));
        }
        if let Some(cmp) = &self.output.compare {
            if cmp.epsilon.is_nan() || cmp.epsilon < 0.0 {
                return Err(invalid("output.compare.epsilon must be non-negative"));
            }
        }
        Ok(())
    }
}
