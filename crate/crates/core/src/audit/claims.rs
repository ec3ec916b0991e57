//! Walk correlations conditioned on a vertex's sign, and the identities and
//! bounds built on them.
//!
//! For a run `x` and vertex `u` let `m1 = E_{a ~ u}[x_a]` and
//! `m3 = E_{u ~ b ~ c ~ d}[x_d]` over uniform (backtracking) walks. Then per
//! run `mu = sigma m1`, `mu2 = m1^2`, `mu3 = sigma m3` and `mu4 = m1 m3`, and
//! each `(u, sigma)` estimate averages these over the runs with `x_u = sigma`.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{AuditError, SampleBatch, DEFAULT_TOL_SIGMAS};
use crate::graph::{Girth, Graph, GraphError};
use crate::rng::stream_rng;
use crate::stats::{bonferroni_z, Moments};

/// Default three-step walks per vertex when walks are sampled.
pub const DEFAULT_WALK_SAMPLES: usize = 1000;

/// How three-step walk endpoints were weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WalkMode {
    /// All `D^3` walks enumerated.
    Exact,
    /// Uniform with-replacement sample of walks per vertex.
    Sampled { walks_per_vertex: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    pub stderr: f64,
}

impl Residual {
    fn z(&self) -> f64 {
        if self.stderr > 0.0 {
            self.value.abs() / self.stderr
        } else if self.value.abs() <= 1e-12 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Estimates for one `(vertex, sigma)` sub-batch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignStats {
    pub vertex: usize,
    pub sigma: i8,
    pub count: usize,
    pub mu: f64,
    pub mu_se: f64,
    pub mu2: f64,
    pub mu2_se: f64,
    pub mu3: f64,
    pub mu3_se: f64,
    pub mu4: f64,
    pub mu4_se: f64,
    /// `mu3 - c mu` with `c = (2 - 1/D) / D`.
    pub claim1: Residual,
    /// `mu4 - mu mu3`.
    pub claim2: Residual,
    /// `mu4 - c mu^2`.
    pub claim3: Residual,
    /// `mu2 - mu^2`.
    pub claim4: Residual,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditStats {
    pub graph_id: String,
    pub degree: usize,
    pub girth: Girth,
    pub runs: usize,
    pub walk_mode: WalkMode,
    pub entries: Vec<SignStats>,
    /// `(vertex, sigma)` pairs seen fewer than twice, left out of every average.
    pub excluded: Vec<(usize, i8)>,
    /// Mean over runs of `E_{(i,j) in E}[x_i x_j]`.
    pub edge_corr: f64,
    pub edge_corr_se: f64,
    /// `E_{u,sigma}[mu]` over included pairs.
    pub mean_mu: f64,
    /// Upper bound on the standard error of `mean_mu` (errors added linearly).
    pub mean_mu_se: f64,
    pub mean_mu_sq: f64,
    pub mean_mu_sq_se: f64,
    pub mean_mu2: f64,
    pub mean_mu4: f64,
}

/// Sample means and covariance of the four per-run quantities.
#[derive(Default, Clone)]
struct Acc {
    n: usize,
    shift: [f64; 4],
    sum: [f64; 4],
    cross: [[f64; 4]; 4],
}

impl Acc {
    fn push(&mut self, p: [f64; 4]) {
        if self.n == 0 {
            self.shift = p;
        }
        self.n += 1;
        let d: [f64; 4] = std::array::from_fn(|i| p[i] - self.shift[i]);
        for i in 0..4 {
            self.sum[i] += d[i];
            for j in 0..4 {
                self.cross[i][j] += d[i] * d[j];
            }
        }
    }

    fn mean(&self) -> [f64; 4] {
        std::array::from_fn(|i| self.shift[i] + self.sum[i] / self.n as f64)
    }

    fn cov(&self) -> [[f64; 4]; 4] {
        let n = self.n as f64;
        std::array::from_fn(|i| {
            std::array::from_fn(|j| (self.cross[i][j] - self.sum[i] * self.sum[j] / n) / (n - 1.0))
        })
    }

    fn se(&self, w: [f64; 4]) -> f64 {
        let cov = self.cov();
        let mut v = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                v += w[i] * w[j] * cov[i][j];
            }
        }
        (v.max(0.0) / self.n as f64).sqrt()
    }
}

type Row = Vec<(u32, f64)>;

/// Exact three-step transition rows.
fn exact_rows(g: &Graph, degree: usize) -> Vec<Row> {
    let weight = 1.0 / (degree as f64).powi(3);
    (0..g.n())
        .into_par_iter()
        .map(|u| {
            let mut row: BTreeMap<u32, f64> = BTreeMap::new();
            for &b in g.neighbors(u) {
                for &c in g.neighbors(b) {
                    for &d in g.neighbors(c) {
                        *row.entry(d as u32).or_default() += weight;
                    }
                }
            }
            row.into_iter().collect()
        })
        .collect()
}

fn sampled_rows(g: &Graph, walks: usize, seed: u64) -> Vec<Row> {
    let weight = 1.0 / walks as f64;
    (0..g.n())
        .into_par_iter()
        .map(|u| {
            let mut rng = stream_rng(seed, u as u64);
            let mut row: BTreeMap<u32, f64> = BTreeMap::new();
            for _ in 0..walks {
                let mut at = u;
                for _ in 0..3 {
                    let nb = g.neighbors(at);
                    at = nb[rng.random_range(0..nb.len())];
                }
                *row.entry(at as u32).or_default() += weight;
            }
            row.into_iter().collect()
        })
        .collect()
}

fn neighbour_mean(g: &Graph, x: &[i8], u: usize) -> f64 {
    let nb = g.neighbors(u);
    nb.iter().map(|&a| f64::from(x[a])).sum::<f64>() / nb.len() as f64
}

fn row_mean(row: &Row, x: &[i8]) -> f64 {
    row.iter().map(|&(d, w)| w * f64::from(x[d as usize])).sum()
}

/// Per-`(u, sigma)` estimates of `mu`, `mu2`, `mu3`, `mu4` and the claim
/// residuals.
///
/// Three-step walks are enumerated exactly when `D^3 <= walk_samples`, and
/// otherwise `walk_samples` walks per vertex are drawn (seeded by `seed`).
pub fn mu_statistics(
    batch: &SampleBatch,
    g: &Graph,
    walk_samples: usize,
    seed: u64,
) -> Result<AuditStats, AuditError> {
    let degree = g.require_regular()?;
    batch.check_graph(g)?;
    if degree == 0 {
        return Err(GraphError::NoEdges.into());
    }
    let (rows, walk_mode) = if degree.pow(3) <= walk_samples.max(1) {
        (exact_rows(g, degree), WalkMode::Exact)
    } else {
        (
            sampled_rows(g, walk_samples, seed),
            WalkMode::Sampled {
                walks_per_vertex: walk_samples,
            },
        )
    };
    let c = (2.0 - 1.0 / degree as f64) / degree as f64;

    let per_vertex: Vec<[Acc; 2]> = (0..g.n())
        .into_par_iter()
        .map(|u| {
            let mut acc: [Acc; 2] = Default::default();
            for x in &batch.assignments {
                let sigma = f64::from(x[u]);
                let m1 = neighbour_mean(g, x, u);
                let m3 = row_mean(&rows[u], x);
                acc[usize::from(x[u] < 0)].push([sigma * m1, m1 * m1, sigma * m3, m1 * m3]);
            }
            acc
        })
        .collect();

    let mut entries = Vec::new();
    let mut excluded = Vec::new();
    for (u, accs) in per_vertex.iter().enumerate() {
        for (slot, sigma) in [(0, 1i8), (1, -1i8)] {
            let a = &accs[slot];
            if a.n < 2 {
                excluded.push((u, sigma));
                continue;
            }
            let m = a.mean();
            let unit =
                |i: usize| -> [f64; 4] { std::array::from_fn(|j| f64::from(u8::from(i == j))) };
            entries.push(SignStats {
                vertex: u,
                sigma,
                count: a.n,
                mu: m[0],
                mu_se: a.se(unit(0)),
                mu2: m[1],
                mu2_se: a.se(unit(1)),
                mu3: m[2],
                mu3_se: a.se(unit(2)),
                mu4: m[3],
                mu4_se: a.se(unit(3)),
                claim1: Residual {
                    value: m[2] - c * m[0],
                    stderr: a.se([-c, 0.0, 1.0, 0.0]),
                },
                claim2: Residual {
                    value: m[3] - m[0] * m[2],
                    stderr: a.se([-m[2], 0.0, -m[0], 1.0]),
                },
                claim3: Residual {
                    value: m[3] - c * m[0] * m[0],
                    stderr: a.se([-2.0 * c * m[0], 0.0, 0.0, 1.0]),
                },
                claim4: Residual {
                    value: m[1] - m[0] * m[0],
                    stderr: a.se([-2.0 * m[0], 1.0, 0.0, 0.0]),
                },
            });
        }
    }

    let edge: Moments = batch
        .assignments
        .iter()
        .map(|x| {
            g.edges()
                .iter()
                .map(|&(i, j)| f64::from(x[i] * x[j]))
                .sum::<f64>()
                / g.num_edges() as f64
        })
        .collect();
    let k = entries.len().max(1) as f64;
    let mean = |f: &dyn Fn(&SignStats) -> f64| entries.iter().map(f).sum::<f64>() / k;
    Ok(AuditStats {
        graph_id: batch.graph_id.clone(),
        degree,
        girth: g.girth(),
        runs: batch.runs(),
        walk_mode,
        edge_corr: edge.mean(),
        edge_corr_se: edge.stderr(),
        mean_mu: mean(&|e| e.mu),
        mean_mu_se: mean(&|e| e.mu_se),
        mean_mu_sq: mean(&|e| e.mu * e.mu),
        mean_mu_sq_se: mean(&|e| 2.0 * e.mu.abs() * e.mu_se),
        mean_mu2: mean(&|e| e.mu2),
        mean_mu4: mean(&|e| e.mu4),
        entries,
        excluded,
    })
}

/// Verdict on one identity across every included `(u, sigma)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub name: String,
    pub statement: String,
    pub tests: usize,
    /// Bonferroni-corrected two-sided threshold in standard errors.
    pub threshold: f64,
    pub max_abs_z: f64,
    pub worst_vertex: usize,
    pub worst_sigma: i8,
    pub worst_residual: f64,
    pub pass: bool,
}

/// `estimate <= threshold + tol * stderr`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub estimate: f64,
    pub stderr: f64,
    pub threshold: f64,
    pub margin: f64,
    pub pass: bool,
}

impl BoundCheck {
    fn new(estimate: f64, stderr: f64, threshold: f64, tol: f64) -> Self {
        BoundCheck {
            estimate,
            stderr,
            threshold,
            margin: threshold - estimate,
            pass: estimate <= threshold + tol * stderr,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimsReport {
    pub degree: usize,
    pub girth: Girth,
    /// Girth at least 6; outside it the claims are not expected to hold.
    pub in_regime: bool,
    pub tol_sigmas: f64,
    pub constant: f64,
    pub claims: Vec<ClaimCheck>,
    /// `E_{u,sigma}[mu^2] <= (2 - 1/D) / D`.
    pub mu_sq_bound: BoundCheck,
    /// `|E_{u,sigma}[mu]| <= sqrt((2 - 1/D) / D)`.
    pub mu_bound: BoundCheck,
    /// `C = -(sqrt(D) / 2) edge_corr <= sqrt(2 - 1/D) / 2`.
    pub c_bound: BoundCheck,
    /// `E_{u,sigma}[mu]` against the direct edge correlation.
    pub mean_mu_vs_edge_corr: Residual,
    pub mean_mu_consistent: bool,
    pub pass: bool,
}

pub fn check_claims(
    stats: &AuditStats,
    degree: usize,
    tol_sigmas: f64,
) -> Result<ClaimsReport, AuditError> {
    if stats.degree != degree {
        return Err(AuditError::DegreeMismatch {
            stats: stats.degree,
            asked: degree,
        });
    }
    if stats.entries.is_empty() {
        return Err(AuditError::NothingToAudit);
    }
    let d = degree as f64;
    let c = (2.0 - 1.0 / d) / d;
    let tests = stats.entries.len();
    let threshold = bonferroni_z(tol_sigmas, tests);
    type Pick = fn(&SignStats) -> Residual;
    let specs: [(&str, &str, Pick); 4] = [
        ("claim1", "mu3 = c * mu", |e| e.claim1),
        ("claim2", "mu4 = mu * mu3", |e| e.claim2),
        ("claim3", "mu4 = c * mu^2", |e| e.claim3),
        ("claim4", "mu2 = mu^2", |e| e.claim4),
    ];
    let claims = specs
        .iter()
        .map(|&(name, statement, pick)| {
            let worst = stats
                .entries
                .iter()
                .max_by(|a, b| pick(a).z().total_cmp(&pick(b).z()))
                .expect("non-empty");
            let max_abs_z = pick(worst).z();
            ClaimCheck {
                name: name.to_string(),
                statement: statement.to_string(),
                tests,
                threshold,
                max_abs_z,
                worst_vertex: worst.vertex,
                worst_sigma: worst.sigma,
                worst_residual: pick(worst).value,
                pass: max_abs_z <= threshold,
            }
        })
        .collect::<Vec<_>>();

    let mu_sq_bound = BoundCheck::new(stats.mean_mu_sq, stats.mean_mu_sq_se, c, tol_sigmas);
    let mu_bound = BoundCheck::new(stats.mean_mu.abs(), stats.mean_mu_se, c.sqrt(), tol_sigmas);
    let half_root = d.sqrt() / 2.0;
    let c_bound = BoundCheck::new(
        -half_root * stats.edge_corr,
        half_root * stats.edge_corr_se,
        0.5 * (2.0 - 1.0 / d).sqrt(),
        tol_sigmas,
    );
    let mean_mu_vs_edge_corr = Residual {
        value: stats.mean_mu - stats.edge_corr,
        stderr: stats.mean_mu_se.hypot(stats.edge_corr_se),
    };
    let mean_mu_consistent = mean_mu_vs_edge_corr.z() <= tol_sigmas;
    let in_regime = stats.girth.at_least(6);
    let pass = claims.iter().all(|c| c.pass)
        && mu_sq_bound.pass
        && mu_bound.pass
        && c_bound.pass
        && mean_mu_consistent;
    Ok(ClaimsReport {
        degree,
        girth: stats.girth,
        in_regime,
        tol_sigmas,
        constant: c,
        claims,
        mu_sq_bound,
        mu_bound,
        c_bound,
        mean_mu_vs_edge_corr,
        mean_mu_consistent,
        pass,
    })
}

/// `(x / sqrt n)^T (A / D)^(2k) (x / sqrt n)` for `k` in `{1, 2}`, computed as
/// `|(A / D)^k x|^2 / n`.
pub fn quadratic_form(g: &Graph, x: &[i8], k: usize) -> Result<f64, AuditError> {
    let degree = g.require_regular()?;
    if !(1..=2).contains(&k) {
        return Err(AuditError::BadHalfSteps(k));
    }
    crate::graph::cut_value(g, x)?;
    let mut v: Vec<f64> = x.iter().map(|&s| f64::from(s)).collect();
    let mut w = vec![0.0; v.len()];
    for _ in 0..k {
        g.adjacency_matvec(&v, &mut w);
        for (a, b) in v.iter_mut().zip(&w) {
            *a = b / degree as f64;
        }
    }
    Ok(v.iter().map(|a| a * a).sum::<f64>() / g.n() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim5Report {
    pub k: usize,
    /// `E_{u,sigma}[mu^(2k)]` from conditioned walk estimates.
    pub walk_side: f64,
    pub walk_se: f64,
    /// Batch mean of the quadratic form.
    pub form_side: f64,
    pub form_se: f64,
    pub difference: Residual,
    pub pass: bool,
    /// Batch mean of the `k = 2` form against the squared `k = 1` mean.
    pub convexity: BoundCheck,
}

/// Compares both sides of `E_{u,sigma}[mu^(2k)] = E[x^T A^(2k) x]` on a batch,
/// with exact walk enumeration.
pub fn claim5_crosscheck(
    batch: &SampleBatch,
    g: &Graph,
    k: usize,
) -> Result<Claim5Report, AuditError> {
    let degree = g.require_regular()?;
    batch.check_graph(g)?;
    if !(1..=2).contains(&k) {
        return Err(AuditError::BadHalfSteps(k));
    }
    let n = g.n();
    let rows = if k == 2 {
        exact_rows(g, degree)
    } else {
        Vec::new()
    };
    let walk = |x: &[i8], u: usize| -> f64 {
        let m1 = neighbour_mean(g, x, u);
        if k == 1 {
            m1 * m1
        } else {
            m1 * row_mean(&rows[u], x)
        }
    };

    let mut counts = vec![[0usize; 2]; n];
    for x in &batch.assignments {
        for (u, &s) in x.iter().enumerate() {
            counts[u][usize::from(s < 0)] += 1;
        }
    }
    let included = counts.iter().flatten().filter(|&&c| c > 0).count() as f64;
    let runs = batch.runs() as f64;

    let mut lhs = Moments::default();
    let mut rhs = Moments::default();
    let mut diff = Moments::default();
    let mut q1 = Vec::with_capacity(batch.runs());
    let mut q2 = Vec::with_capacity(batch.runs());
    for x in &batch.assignments {
        // Scaled so that the walk side is the mean of these over runs.
        let w: f64 = (0..n)
            .map(|u| walk(x, u) / counts[u][usize::from(x[u] < 0)] as f64)
            .sum::<f64>()
            * runs
            / included;
        let form = quadratic_form(g, x, k)?;
        lhs.push(w);
        rhs.push(form);
        diff.push(w - form);
        q1.push(quadratic_form(g, x, 1)?);
        q2.push(quadratic_form(g, x, 2)?);
    }
    let difference = Residual {
        value: lhs.mean() - rhs.mean(),
        stderr: diff.stderr(),
    };
    let pass = difference.value.abs() <= DEFAULT_TOL_SIGMAS * difference.stderr + 1e-10;

    let mean1 = q1.iter().sum::<f64>() / runs;
    let mean2 = q2.iter().sum::<f64>() / runs;
    let influence: Moments = q1
        .iter()
        .zip(&q2)
        .map(|(a, b)| b - 2.0 * mean1 * a)
        .collect();
    let se = influence.stderr();
    // Lower bound check written as `-mean2 <= -mean1^2 + tol * se`.
    let convexity = BoundCheck {
        estimate: mean2,
        stderr: se,
        threshold: mean1 * mean1,
        margin: mean2 - mean1 * mean1,
        pass: mean2 >= mean1 * mean1 - DEFAULT_TOL_SIGMAS * se - 1e-12,
    };
    Ok(Claim5Report {
        k,
        walk_side: lhs.mean(),
        walk_se: lhs.stderr(),
        form_side: rhs.mean(),
        form_se: rhs.stderr(),
        difference,
        pass,
        convexity,
    })
}
