//! Experiment harness for the girthcut algorithms: TOML-configured runs,
//! paired comparisons, and CSV/JSON/SVG output.

pub mod compare;
pub mod config;
pub mod constants;
pub mod emit;
pub mod experiment;

use std::path::Path;

use anyhow::Context;

pub use compare::{compare, CompareCell, CompareError, CompareSummary, Selector};
pub use config::{ConfigError, ExperimentConfig};
pub use constants::{constants, ConstantRow};
pub use experiment::{run_experiment, TrialRecord};

/// Outcome of [`run_bench`].
#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutcome {
    pub records: Vec<TrialRecord>,
    pub failures: usize,
    pub summary: Option<CompareSummary>,
}

/// Runs a validated config and writes every configured output.
pub fn run_bench(config: &ExperimentConfig) -> anyhow::Result<BenchOutcome> {
    let records = run_experiment(config);
    let failures = records.iter().filter(|r| !r.is_ok()).count();
    let out = &config.output;
    ensure_parent(&out.csv)?;
    emit::write_csv_file(&records, config.wall_time(), &out.csv)
        .with_context(|| format!("writing {}", out.csv.display()))?;
    if let Some(svg) = &out.svg {
        ensure_parent(svg)?;
        emit::write_svg(&records, svg).with_context(|| format!("writing {}", svg.display()))?;
    }
    let mut summary = None;
    if let Some(cmp) = &out.compare {
        let s = compare(&records, &cmp.a, &cmp.b, cmp.epsilon)?;
        ensure_parent(&cmp.path)?;
        emit::write_json(&s, &cmp.path)
            .with_context(|| format!("writing {}", cmp.path.display()))?;
        summary = Some(s);
    }
    Ok(BenchOutcome {
        records,
        failures,
        summary,
    })
}

fn ensure_parent(path: &Path) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(())
}
