//! Paired comparison of two algorithms over shared instances.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::experiment::TrialRecord;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompareError {
    #[error("bad selector {0:?}: expected `name` or `name:param`")]
    BadSelector(String),
    #[error("no successful records match {0}")]
    NoRecords(String),
    #[error("{0} and {1} share no instances")]
    DisjointInstances(String, String),
    #[error("epsilon must be non-negative, got {0}")]
    BadEpsilon(f64),
}

/// `name` or `name:param`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selector {
    pub algorithm: String,
    pub param: Option<usize>,
}

impl FromStr for Selector {
    type Err = CompareError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CompareError::BadSelector(s.to_string());
        let (name, param) = match s.split_once(':') {
            Some((name, p)) => (name, Some(p.parse().map_err(|_| bad())?)),
            None => (s, None),
        };
        if name.is_empty() {
            return Err(bad());
        }
        Ok(Selector {
            algorithm: name.to_string(),
            param,
        })
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param {
            Some(p) => write!(f, "{}:{}", self.algorithm, p),
            None => write!(f, "{}", self.algorithm),
        }
    }
}

impl Selector {
    fn matches(&self, r: &TrialRecord) -> bool {
        r.is_ok()
            && r.algorithm == self.algorithm
            && (self.param.is_none() || self.param == r.param)
    }
}

/// Statistics of `B - A` over the instances of one vertex count and one
/// parameter of `B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareCell {
    pub n: usize,
    pub param: Option<usize>,
    pub instances: usize,
    pub mean_diff: f64,
    /// Percentage of instances with `B > A`.
    pub pct_better: f64,
    /// Percentage of instances with `B > A` and `B >= A + epsilon`.
    pub pct_better_eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareSummary {
    pub a: String,
    pub b: String,
    pub epsilon: f64,
    pub cells: Vec<CompareCell>,
}

/// Mean cut value over seeds, keyed by (instance, param).
fn seed_means(
    records: &[TrialRecord],
    sel: &Selector,
) -> BTreeMap<(String, Option<usize>), (usize, f64)> {
    let mut acc: BTreeMap<(String, Option<usize>), (usize, f64, usize)> = BTreeMap::new();
    for r in records.iter().filter(|r| sel.matches(r)) {
        let e = acc
            .entry((r.instance.clone(), r.param))
            .or_insert((r.n, 0.0, 0));
        e.1 += r.cut_value.expect("ok records carry a value");
        e.2 += 1;
    }
    acc.into_iter()
        .map(|(k, (n, sum, count))| (k, (n, sum / count as f64)))
        .collect()
}

/// Compares `b` against the baseline `a` instance by instance. Error records
/// are ignored; instances missing from either side are skipped.
pub fn compare(
    records: &[TrialRecord],
    a: &str,
    b: &str,
    epsilon: f64,
) -> Result<CompareSummary, CompareError> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(CompareError::BadEpsilon(epsilon));
    }
    let sel_a: Selector = a.parse()?;
    let sel_b: Selector = b.parse()?;
    let base = seed_means(records, &sel_a);
    if base.is_empty() {
        return Err(CompareError::NoRecords(sel_a.to_string()));
    }
    let mut params: Vec<Option<usize>> = base.keys().map(|k| k.1).collect();
    params.sort();
    params.dedup();
    // A single-param baseline is compared against every param of `b`;
    // otherwise params are paired one to one.
    let single = (params.len() == 1).then(|| params[0]);
    let other = seed_means(records, &sel_b);
    if other.is_empty() {
        return Err(CompareError::NoRecords(sel_b.to_string()));
    }
    let mut cells: BTreeMap<(usize, Option<usize>), Vec<f64>> = BTreeMap::new();
    for ((inst, param), (n, vb)) in &other {
        if let Some((_, va)) = base.get(&(inst.clone(), single.unwrap_or(*param))) {
            cells.entry((*n, *param)).or_default().push(vb - va);
        }
    }
    if cells.is_empty() {
        return Err(CompareError::DisjointInstances(
            sel_a.to_string(),
            sel_b.to_string(),
        ));
    }
    let cells = cells
        .into_iter()
        .map(|((n, param), diffs)| {
            let count = diffs.len() as f64;
            let pct = |f: &dyn Fn(f64) -> bool| {
                100.0 * diffs.iter().filter(|&&d| f(d)).count() as f64 / count
            };
            CompareCell {
                n,
                param,
                instances: diffs.len(),
                mean_diff: diffs.iter().sum::<f64>() / count,
                pct_better: pct(&|d| d > 0.0),
                pct_better_eps: pct(&|d| d > 0.0 && d >= epsilon),
            }
        })
        .collect();
    Ok(CompareSummary {
        a: sel_a.to_string(),
        b: sel_b.to_string(),
        epsilon,
        cells,
    })
}
