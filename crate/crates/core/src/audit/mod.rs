//! Empirical checks of the one-local limitation argument and of locality.
//!
//! Every verdict here is "consistent / inconsistent at the given number of
//! standard errors", never a proof.

mod claims;
mod independence;

pub use claims::{
    check_claims, claim5_crosscheck, mu_statistics, quadratic_form, AuditStats, BoundCheck,
    Claim5Report, ClaimCheck, ClaimsReport, Residual, SignStats, WalkMode, DEFAULT_WALK_SAMPLES,
};
pub use independence::{independence_test, IndependenceReport, TestFamily, MIN_BATCH};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::local_gaussian::{KLocal, LocalError};
use crate::qaoa::{QaoaError, QaoaParams, QaoaSimulator};
use crate::rng::derive_seed;
use crate::spectral::{self, SpectralError};

/// Default tolerance, in standard errors.
pub const DEFAULT_TOL_SIGMAS: f64 = 4.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AuditError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Qaoa(#[from] QaoaError),
    #[error("need at least one run")]
    ZeroRuns,
    #[error("batch has {runs} runs, need at least {min}")]
    BatchTooSmall { runs: usize, min: usize },
    #[error("row {row} has length {got}, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("half-steps must be 1 or 2, got {0}")]
    BadHalfSteps(usize),
    #[error("no vertex pairs with disjoint radius-{r} balls")]
    NoQualifyingPairs { r: usize },
    #[error("every (vertex, sign) pair was excluded")]
    NothingToAudit,
    #[error("stats are for degree {stats}, asked for {asked}")]
    DegreeMismatch { stats: usize, asked: usize },
}

/// Independent runs of one algorithm on one graph; row `i` used `seeds[i]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBatch {
    pub graph_id: String,
    pub n: usize,
    pub assignments: Vec<Vec<i8>>,
    pub seeds: Vec<u64>,
}

impl SampleBatch {
    /// Validates row lengths and sign values.
    pub fn new(
        graph_id: impl Into<String>,
        n: usize,
        assignments: Vec<Vec<i8>>,
        seeds: Vec<u64>,
    ) -> Result<Self, AuditError> {
        if assignments.is_empty() {
            return Err(AuditError::ZeroRuns);
        }
        for (row, a) in assignments.iter().enumerate() {
            if a.len() != n {
                return Err(AuditError::RowLength {
                    row,
                    expected: n,
                    got: a.len(),
                });
            }
            if let Some((vertex, &value)) = a.iter().enumerate().find(|(_, &s)| s != 1 && s != -1) {
                return Err(GraphError::NotASign { vertex, value }.into());
            }
        }
        Ok(SampleBatch {
            graph_id: graph_id.into(),
            n,
            assignments,
            seeds,
        })
    }

    pub fn runs(&self) -> usize {
        self.assignments.len()
    }

    pub(crate) fn check_graph(&self, g: &Graph) -> Result<(), AuditError> {
        if g.n() != self.n {
            return Err(GraphError::LengthMismatch {
                expected: g.n(),
                got: self.n,
            }
            .into());
        }
        Ok(())
    }
}

/// Something that produces one ±1 assignment per seed.
pub trait CutSampler: Sync {
    fn sample(&self, seed: u64) -> Result<Vec<i8>, AuditError>;
}

pub struct KLocalSampler(pub KLocal);

impl CutSampler for KLocalSampler {
    fn sample(&self, seed: u64) -> Result<Vec<i8>, AuditError> {
        Ok(self.0.assignment(seed))
    }
}

pub struct AlrSampler<'a> {
    pub graph: &'a Graph,
    pub tol: f64,
    pub max_iter: usize,
}

impl CutSampler for AlrSampler<'_> {
    fn sample(&self, seed: u64) -> Result<Vec<i8>, AuditError> {
        Ok(spectral::alr_cut(self.graph, self.tol, self.max_iter, seed)?.assignment)
    }
}

pub struct TPowerSampler<'a> {
    pub graph: &'a Graph,
    pub degree: usize,
    pub k: usize,
}

impl CutSampler for TPowerSampler<'_> {
    fn sample(&self, seed: u64) -> Result<Vec<i8>, AuditError> {
        Ok(
            spectral::truncated_power_cut_with_degree(self.graph, self.degree, self.k, seed)?
                .assignment,
        )
    }
}

/// One computational-basis measurement per seed.
pub struct QaoaSampler {
    n: usize,
    cdf: Vec<f64>,
}

impl QaoaSampler {
    pub fn new(g: &Graph, params: &QaoaParams) -> Result<Self, AuditError> {
        let probs = QaoaSimulator::new(g)?.probabilities(params);
        let mut acc = 0.0;
        let cdf = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(QaoaSampler { n: g.n(), cdf })
    }
}

impl CutSampler for QaoaSampler {
    fn sample(&self, seed: u64) -> Result<Vec<i8>, AuditError> {
        let total = *self.cdf.last().expect("non-empty");
        let r = ChaCha8Rng::seed_from_u64(seed).random::<f64>() * total;
        let x = self
            .cdf
            .partition_point(|&c| c <= r)
            .min(self.cdf.len() - 1);
        Ok((0..self.n)
            .map(|v| if x >> v & 1 == 0 { 1 } else { -1 })
            .collect())
    }
}

/// Independent uniform signs.
pub struct ProductSampler {
    pub n: usize,
}

impl CutSampler for ProductSampler {
    fn sample(&self, seed: u64) -> Result<Vec<i8>, AuditError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..self.n)
            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
            .collect())
    }
}

/// The same assignment every run.
pub struct FixedCut(pub Vec<i8>);

impl CutSampler for FixedCut {
    fn sample(&self, _seed: u64) -> Result<Vec<i8>, AuditError> {
        Ok(self.0.clone())
    }
}

/// `runs` executions with seeds `derive_seed(master_seed, i)`, in seed order.
pub fn collect_samples(
    algorithm: &dyn CutSampler,
    g: &Graph,
    graph_id: &str,
    runs: usize,
    master_seed: u64,
) -> Result<SampleBatch, AuditError> {
    if runs == 0 {
        return Err(AuditError::ZeroRuns);
    }
    let seeds: Vec<u64> = (0..runs as u64)
        .map(|i| derive_seed(master_seed, i))
        .collect();
    let assignments = seeds
        .par_iter()
        .map(|&s| algorithm.sample(s))
        .collect::<Result<Vec<_>, _>>()?;
    SampleBatch::new(graph_id, g.n(), assignments, seeds)
}
