//! The k-local Gaussian wave cut.
//!
//! Every vertex `w` draws `Y_w ~ N(0, 1)`. Vertex `u` outputs the sign of
//! `sum_{d(w,u) <= k} (-1)^d (D-1)^(-d/2) Y_w`. On a `D`-regular graph of
//! girth `> 2k + 1` the two radius-`k` balls around an edge form two trees,
//! and the probability that the edge is cut is a function of `(D, k)` only;
//! [`tree_edge_cut_prob`] estimates it directly on that tree model, and
//! [`limit_cut_fraction`] is its `k -> infinity` limit.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{sign, Cut, Graph, GraphError};
use crate::rng::{stream_rng, GaussianField};
use crate::stats::Proportion;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocalError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("need at least one trial")]
    ZeroTrials,
}

/// `(-1)^d (D-1)^(-d/2)`.
pub fn wave_coefficient(distance: usize, degree: usize) -> Result<f64, LocalError> {
    if degree < 2 {
        return Err(LocalError::DegreeTooSmall(degree));
    }
    let magnitude = ((degree - 1) as f64).powf(-(distance as f64) / 2.0);
    Ok(if distance.is_multiple_of(2) {
        magnitude
    } else {
        -magnitude
    })
}

/// `arccos(-2 sqrt(D-1) / D) / pi`, the large-`k` edge cut probability.
///
/// Also evaluates the equivalent `1/2 + (2/pi) atan(1/sqrt(D-1))` and
/// panics if the two disagree beyond `1e-12`.
pub fn limit_cut_fraction(degree: usize) -> Result<f64, LocalError> {
    if degree < 2 {
        return Err(LocalError::DegreeTooSmall(degree));
    }
    let d = degree as f64;
    let root = (d - 1.0).sqrt();
    let by_arccos = (-2.0 * root / d).clamp(-1.0, 1.0).acos() / PI;
    let by_arctan = 0.5 + 2.0 / PI * (1.0 / root).atan();
    assert!(
        (by_arccos - by_arctan).abs() <= 1e-12,
        "closed forms disagree at D={degree}: {by_arccos} vs {by_arctan}"
    );
    Ok(by_arccos)
}

/// Precomputed radius-`k` balls with their wave weights.
///
/// Building the plan once lets many seeds reuse the BFS work.
#[derive(Debug, Clone)]
pub struct KLocal {
    n: usize,
    k: usize,
    degree: usize,
    offsets: Vec<usize>,
    members: Vec<u32>,
    weights: Vec<f64>,
}

impl KLocal {
    pub fn new(g: &Graph, k: usize) -> Result<Self, LocalError> {
        let degree = g.require_regular()?;
        let coeffs = (0..=k)
            .map(|d| wave_coefficient(d, degree))
            .collect::<Result<Vec<_>, _>>()?;
        let n = g.n();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut members = Vec::new();
        let mut weights = Vec::new();
        let mut stamp = vec![usize::MAX; n];
        let mut frontier = Vec::new();
        let mut next = Vec::new();
        offsets.push(0);
        for u in 0..n {
            stamp[u] = u;
            frontier.clear();
            frontier.push(u);
            members.push(u as u32);
            weights.push(coeffs[0]);
            for &c in &coeffs[1..] {
                next.clear();
                for &x in &frontier {
                    for &w in g.neighbors(x) {
                        if stamp[w] != u {
                            stamp[w] = u;
                            next.push(w);
                            members.push(w as u32);
                            weights.push(c);
                        }
                    }
                }
                std::mem::swap(&mut frontier, &mut next);
                if frontier.is_empty() {
                    break;
                }
            }
            offsets.push(members.len());
        }
        Ok(KLocal {
            n,
            k,
            degree,
            offsets,
            members,
            weights,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Weighted ball sums for a given field.
    pub fn wave_sums(&self, field: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|u| {
                let range = self.offsets[u]..self.offsets[u + 1];
                self.members[range.clone()]
                    .iter()
                    .zip(&self.weights[range])
                    .map(|(&w, &c)| c * field[w as usize])
                    .sum()
            })
            .collect()
    }

    pub fn assignment(&self, seed: u64) -> Vec<i8> {
        let field = GaussianField::new(self.n, seed);
        self.wave_sums(&field.values)
            .into_iter()
            .map(sign)
            .collect()
    }

    pub fn cut(&self, g: &Graph, seed: u64) -> Result<Cut, LocalError> {
        Ok(Cut::new(g, self.assignment(seed))?)
    }
}

/// One draw of the k-local algorithm on `g`.
pub fn run_klocal(g: &Graph, k: usize, seed: u64) -> Result<Cut, LocalError> {
    KLocal::new(g, k)?.cut(g, seed)
}

/// The aggregate sums seen by the two endpoints of an edge on the tree.
///
/// `a[l]` aggregates the weighted values at distance `l` from `u` on `u`'s
/// side (`(D-1)^l` vertices of variance `(D-1)^-l`, so a standard normal),
/// and `b[l]` the same on `v`'s side.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeSample {
    pub depth: usize,
    pub degree: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub u: f64,
    pub v: f64,
    pub cut: bool,
}

impl TreeSample {
    /// Draws `a[0..=k]` then `b[0..=k]` from `rng`.
    pub fn draw<R: Rng + ?Sized>(degree: usize, depth: usize, rng: &mut R) -> Self {
        let a: Vec<f64> = (0..=depth).map(|_| StandardNormal.sample(rng)).collect();
        let b: Vec<f64> = (0..=depth).map(|_| StandardNormal.sample(rng)).collect();
        let (u, v) = endpoint_sums(&a, &b, degree);
        TreeSample {
            depth,
            degree,
            u,
            v,
            cut: sign(u) != sign(v),
            a,
            b,
        }
    }
}

fn endpoint_sums(a: &[f64], b: &[f64], degree: usize) -> (f64, f64) {
    let k = a.len() - 1;
    let scale = 1.0 / ((degree - 1) as f64).sqrt();
    let inner_a: f64 = a[..k].iter().sum();
    let inner_b: f64 = b[..k].iter().sum();
    (
        a[k] + inner_a - inner_b * scale,
        b[k] + inner_b - inner_a * scale,
    )
}

/// Monte Carlo estimate of `Pr[sgn U != sgn V]` on the depth-`k` tree model,
/// with a 99% Wilson interval. Trial `t` reads ChaCha stream `t` of `seed`.
pub fn tree_edge_cut_prob(
    degree: usize,
    k: usize,
    trials: u64,
    seed: u64,
) -> Result<Proportion, LocalError> {
    if degree < 2 {
        return Err(LocalError::DegreeTooSmall(degree));
    }
    if trials == 0 {
        return Err(LocalError::ZeroTrials);
    }
    const CHUNK: u64 = 4096;
    let chunks = trials.div_ceil(CHUNK);
    let cuts: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut a = vec![0.0; k + 1];
            let mut b = vec![0.0; k + 1];
            let mut count = 0u64;
            for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                let mut rng = stream_rng(seed, t);
                for x in a.iter_mut().chain(b.iter_mut()) {
                    *x = StandardNormal.sample(&mut rng);
                }
                let (u, v) = endpoint_sums(&a, &b, degree);
                count += u64::from(sign(u) != sign(v));
            }
            count
        })
        .sum();
    Ok(Proportion::new(cuts, trials))
}
