//! Exact statevector simulation of QAOA_p for max-cut.
//!
//! Convention: cost `C(x) = sum_{(i,j) in E} (1 - Z_i Z_j) / 2`, basis bit
//! `v` equal to 0 reads as `+1`. Layer `t` applies `exp(-i gamma_t C)` and
//! then `exp(-i beta_t sum_v X_v)`.

mod optimize;

pub use optimize::{optimize_params, optimize_schedule, OptimizeResult, DEFAULT_BUDGET};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Cut, Graph, GraphError};
use crate::stats::blocked_sum;

pub const DEFAULT_QUBIT_LIMIT: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QaoaError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{n} qubits exceeds the limit of {limit}")]
    TooManyQubits { n: usize, limit: usize },
    #[error("{gammas} gammas but {betas} betas")]
    LengthMismatch { gammas: usize, betas: usize },
    #[error("need at least one shot")]
    ZeroShots,
    #[error("evaluation budget must be at least 1")]
    ZeroBudget,
}

/// Cost and mixer angles of a depth-`p` circuit, stored unreduced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self, QaoaError> {
        if gammas.len() != betas.len() {
            return Err(QaoaError::LengthMismatch {
                gammas: gammas.len(),
                betas: betas.len(),
            });
        }
        Ok(QaoaParams { gammas, betas })
    }

    pub fn zeros(p: usize) -> Self {
        QaoaParams {
            gammas: vec![0.0; p],
            betas: vec![0.0; p],
        }
    }

    pub fn p(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub(crate) fn from_slice(x: &[f64]) -> Self {
        let p = x.len() / 2;
        QaoaParams {
            gammas: x[..p].to_vec(),
            betas: x[p..].to_vec(),
        }
    }
}

/// Normalised amplitudes over `2^n` basis states; basis index bit `v` is qubit `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    pub n_qubits: usize,
    pub amplitudes: Vec<Complex64>,
}

impl Statevector {
    pub fn norm_sqr(&self) -> f64 {
        blocked_sum(self.amplitudes.iter().map(|a| a.norm_sqr()))
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Per-graph precomputation shared across parameter evaluations.
///
/// Amplitudes are evolved unnormalised, starting from all ones, so that
/// `|a_x|^2 / 2^n` is the probability of `x`; this keeps the identity
/// circuit exact in floating point.
#[derive(Debug, Clone)]
pub struct QaoaSimulator {
    n: usize,
    edges: Vec<(usize, usize)>,
    cut_counts: Vec<u32>,
}

impl QaoaSimulator {
    pub fn new(g: &Graph) -> Result<Self, QaoaError> {
        Self::with_limit(g, DEFAULT_QUBIT_LIMIT)
    }

    pub fn with_limit(g: &Graph, limit: usize) -> Result<Self, QaoaError> {
        let n = g.n();
        if n > limit {
            return Err(QaoaError::TooManyQubits { n, limit });
        }
        if g.num_edges() == 0 {
            return Err(GraphError::NoEdges.into());
        }
        let cut_counts = (0..1usize << n)
            .map(|x| {
                g.edges()
                    .iter()
                    .filter(|&&(u, v)| (x >> u ^ x >> v) & 1 == 1)
                    .count() as u32
            })
            .collect();
        Ok(QaoaSimulator {
            n,
            edges: g.edges().to_vec(),
            cut_counts,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Cut edge count of every basis state.
    pub fn cut_counts(&self) -> &[u32] {
        &self.cut_counts
    }

    fn apply_cost(&self, amps: &mut [Complex64], gamma: f64) {
        let table: Vec<Complex64> = (0..=self.edges.len())
            .map(|m| Complex64::from_polar(1.0, -gamma * m as f64))
            .collect();
        for (a, &m) in amps.iter_mut().zip(&self.cut_counts) {
            *a *= table[m as usize];
        }
    }

    fn apply_mixer(&self, amps: &mut [Complex64], beta: f64) {
        let (s, c) = beta.sin_cos();
        let mis = Complex64::new(0.0, -s);
        for q in 0..self.n {
            let stride = 1usize << q;
            for block in amps.chunks_exact_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x0, x1) = (*a0, *a1);
                    *a0 = x0 * c + x1 * mis;
                    *a1 = x1 * c + x0 * mis;
                }
            }
        }
    }

    /// Unnormalised amplitudes (initial value 1 per basis state), calling
    /// `after_layer` once per completed layer.
    fn evolve_with(
        &self,
        params: &QaoaParams,
        mut after_layer: impl FnMut(&[Complex64]),
    ) -> Vec<Complex64> {
        let mut amps = vec![Complex64::new(1.0, 0.0); 1 << self.n];
        for (&gamma, &beta) in params.gammas.iter().zip(&params.betas) {
            self.apply_cost(&mut amps, gamma);
            self.apply_mixer(&mut amps, beta);
            after_layer(&amps);
        }
        amps
    }

    fn scale(&self) -> f64 {
        (-(self.n as f64)).exp2()
    }

    pub fn state(&self, params: &QaoaParams) -> Statevector {
        let norm = self.scale().sqrt();
        let amplitudes = self
            .evolve_with(params, |_| ())
            .into_iter()
            .map(|a| a * norm)
            .collect();
        Statevector {
            n_qubits: self.n,
            amplitudes,
        }
    }

    /// `sum |a|^2` after each layer, normalised so that 1 is unitary.
    pub fn layer_norms(&self, params: &QaoaParams) -> Vec<f64> {
        let scale = self.scale();
        let mut norms = Vec::with_capacity(params.p());
        self.evolve_with(params, |amps| {
            norms.push(blocked_sum(amps.iter().map(|a| a.norm_sqr())) * scale)
        });
        norms
    }

    /// Exact expected cut fraction.
    pub fn expected_cut(&self, params: &QaoaParams) -> f64 {
        let amps = self.evolve_with(params, |_| ());
        let total = blocked_sum(
            amps.iter()
                .zip(&self.cut_counts)
                .map(|(a, &m)| a.norm_sqr() * m as f64),
        );
        total * self.scale() / self.edges.len() as f64
    }

    /// `Pr[x_u != x_v]` for every edge, in edge order.
    pub fn edge_cut_probabilities(&self, params: &QaoaParams) -> Vec<f64> {
        let probs = self.probabilities(params);
        self.edges
            .iter()
            .map(|&(u, v)| {
                blocked_sum(
                    probs
                        .iter()
                        .enumerate()
                        .filter(|(x, _)| (x >> u ^ x >> v) & 1 == 1)
                        .map(|(_, &p)| p),
                )
            })
            .collect()
    }

    /// Basis-state probabilities.
    pub fn probabilities(&self, params: &QaoaParams) -> Vec<f64> {
        let scale = self.scale();
        self.evolve_with(params, |_| ())
            .iter()
            .map(|a| a.norm_sqr() * scale)
            .collect()
    }

    /// Joint law of `(x_j, x_k)` as `[[++, +-], [-+, --]]`.
    pub fn pair_marginal(&self, params: &QaoaParams, j: usize, k: usize) -> [[f64; 2]; 2] {
        let probs = self.probabilities(params);
        let mut out = [[0.0; 2]; 2];
        for (x, p) in probs.iter().enumerate() {
            out[x >> j & 1][x >> k & 1] += p;
        }
        out
    }

    /// Single-qubit law `[Pr(+1), Pr(-1)]`.
    pub fn marginal(&self, params: &QaoaParams, j: usize) -> [f64; 2] {
        let probs = self.probabilities(params);
        let mut out = [0.0; 2];
        for (x, p) in probs.iter().enumerate() {
            out[x >> j & 1] += p;
        }
        out
    }

    /// `shots` measurements in the computational basis.
    pub fn sample(
        &self,
        params: &QaoaParams,
        shots: usize,
        seed: u64,
    ) -> Result<Vec<Vec<i8>>, QaoaError> {
        if shots == 0 {
            return Err(QaoaError::ZeroShots);
        }
        let probs = self.probabilities(params);
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in &probs {
            acc += p;
            cdf.push(acc);
        }
        let total = acc;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..shots)
            .map(|_| {
                let r = rng.random::<f64>() * total;
                let x = cdf.partition_point(|&c| c <= r).min(cdf.len() - 1);
                (0..self.n)
                    .map(|v| if x >> v & 1 == 0 { 1 } else { -1 })
                    .collect()
            })
            .collect())
    }
}

pub fn qaoa_state(g: &Graph, params: &QaoaParams) -> Result<Statevector, QaoaError> {
    Ok(QaoaSimulator::new(g)?.state(params))
}

pub fn expected_cut(g: &Graph, params: &QaoaParams) -> Result<f64, QaoaError> {
    Ok(QaoaSimulator::new(g)?.expected_cut(params))
}

pub fn sample_cuts(
    g: &Graph,
    params: &QaoaParams,
    shots: usize,
    seed: u64,
) -> Result<Vec<Cut>, QaoaError> {
    QaoaSimulator::new(g)?
        .sample(params, shots, seed)?
        .into_iter()
        .map(|x| Cut::new(g, x).map_err(QaoaError::from))
        .collect()
}

/// Exhaustive maximum cut fraction, for small graphs.
pub fn max_cut_brute_force(g: &Graph) -> Result<f64, QaoaError> {
    let sim = QaoaSimulator::new(g)?;
    let best = sim.cut_counts.iter().copied().max().unwrap_or(0);
    Ok(best as f64 / sim.num_edges() as f64)
}
