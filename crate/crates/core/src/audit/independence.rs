//! Pairwise independence at distance and per-vertex centeredness.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{AuditError, SampleBatch, DEFAULT_TOL_SIGMAS};
use crate::graph::Graph;
use crate::stats::{bonferroni_z, Moments};

/// Smallest batch accepted by [`independence_test`].
pub const MIN_BATCH: usize = 1000;

/// One family of tests sharing a Bonferroni threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFamily {
    pub tests: usize,
    /// In standard errors; for the chi-square family this is the square root
    /// of the one-degree-of-freedom statistic.
    pub threshold: f64,
    pub max_abs_z: f64,
    /// Vertex pair (or `(v, v)` for centeredness) with the largest statistic.
    pub worst: (usize, usize),
    pub pass: bool,
}

impl TestFamily {
    fn from_scores(
        scores: impl IntoIterator<Item = ((usize, usize), f64)>,
        tol_sigmas: f64,
    ) -> Self {
        let mut tests = 0;
        let mut worst = ((0, 0), 0.0f64);
        for (at, z) in scores {
            tests += 1;
            if z > worst.1 || tests == 1 {
                worst = (at, z);
            }
        }
        let threshold = bonferroni_z(tol_sigmas, tests.max(1));
        TestFamily {
            tests,
            threshold,
            max_abs_z: worst.1,
            worst: worst.0,
            pass: worst.1 <= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceReport {
    pub r: usize,
    pub runs: usize,
    pub pairs: Vec<(usize, usize)>,
    /// `E[x_j x_k] = 0` for pairs with disjoint `r`-balls.
    pub correlation: TestFamily,
    /// 2x2 contingency independence for the same pairs.
    pub contingency: TestFamily,
    /// `E[x_v] = 0` for every vertex.
    pub centered: TestFamily,
    pub pass: bool,
}

fn z_score(value: f64, stderr: f64) -> f64 {
    if stderr > 0.0 {
        value.abs() / stderr
    } else if value.abs() <= 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Pairs at distance greater than `2r`, all of them if there are at most
/// `pair_budget` candidates and a seeded sample otherwise.
fn qualifying_pairs(
    g: &Graph,
    r: usize,
    pair_budget: usize,
    seed: u64,
) -> Result<Vec<(usize, usize)>, AuditError> {
    let n = g.n();
    let far = |j: usize| -> Result<Vec<usize>, AuditError> {
        let ball = g.ball(&[j], 2 * r)?;
        Ok((0..n).filter(|v| ball.binary_search(v).is_err()).collect())
    };
    if n * n.saturating_sub(1) / 2 <= pair_budget {
        let mut pairs = Vec::new();
        for j in 0..n {
            pairs.extend(far(j)?.into_iter().filter(|&k| k > j).map(|k| (j, k)));
        }
        return Ok(pairs);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = BTreeSet::new();
    let mut order = Vec::new();
    for _ in 0..pair_budget.saturating_mul(20) {
        if order.len() == pair_budget {
            break;
        }
        let j = rng.random_range(0..n);
        let options = far(j)?;
        if options.is_empty() {
            continue;
        }
        let k = options[rng.random_range(0..options.len())];
        let pair = (j.min(k), j.max(k));
        if chosen.insert(pair) {
            order.push(pair);
        }
    }
    Ok(order)
}

/// Checks that vertices whose radius-`r` balls are disjoint look independent,
/// and that every vertex is centered, at 4 standard errors with Bonferroni
/// correction inside each family.
pub fn independence_test(
    batch: &SampleBatch,
    g: &Graph,
    r: usize,
    pair_budget: usize,
    seed: u64,
) -> Result<IndependenceReport, AuditError> {
    batch.check_graph(g)?;
    let runs = batch.runs();
    if runs < MIN_BATCH {
        return Err(AuditError::BatchTooSmall {
            runs,
            min: MIN_BATCH,
        });
    }
    let pairs = qualifying_pairs(g, r, pair_budget, seed)?;
    if pairs.is_empty() {
        return Err(AuditError::NoQualifyingPairs { r });
    }
    let rows = &batch.assignments;
    let correlation = TestFamily::from_scores(
        pairs.iter().map(|&(j, k)| {
            let m: Moments = rows.iter().map(|x| f64::from(x[j] * x[k])).collect();
            ((j, k), z_score(m.mean(), m.stderr()))
        }),
        DEFAULT_TOL_SIGMAS,
    );
    let contingency = TestFamily::from_scores(
        pairs.iter().map(|&(j, k)| {
            let mut table = [[0.0f64; 2]; 2];
            for x in rows {
                table[usize::from(x[j] < 0)][usize::from(x[k] < 0)] += 1.0;
            }
            ((j, k), chi_square(&table).sqrt())
        }),
        DEFAULT_TOL_SIGMAS,
    );
    let total = runs as f64;
    let centered = TestFamily::from_scores(
        (0..g.n()).map(|v| {
            let mean = rows.iter().map(|x| f64::from(x[v])).sum::<f64>() / total;
            // Null standard error of a mean of fair signs.
            ((v, v), mean.abs() * total.sqrt())
        }),
        DEFAULT_TOL_SIGMAS,
    );
    let pass = correlation.pass && contingency.pass && centered.pass;
    Ok(IndependenceReport {
        r,
        runs,
        pairs,
        correlation,
        contingency,
        centered,
        pass,
    })
}

/// Pearson statistic of a 2x2 table; zero when a margin is empty.
fn chi_square(t: &[[f64; 2]; 2]) -> f64 {
    let rows = [t[0][0] + t[0][1], t[1][0] + t[1][1]];
    let cols = [t[0][0] + t[1][0], t[0][1] + t[1][1]];
    let n = rows[0] + rows[1];
    if rows.contains(&0.0) || cols.contains(&0.0) {
        return 0.0;
    }
    let mut stat = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let e = rows[i] * cols[j] / n;
            stat += (t[i][j] - e).powi(2) / e;
        }
    }
    stat
}
