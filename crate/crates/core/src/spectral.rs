//! Minimum-eigenvector (ALR) cuts and the truncated power method.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Cut, Graph, GraphError};
use crate::rng::GaussianField;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("no convergence after {iterations} iterations (best residual {best_residual:e})")]
    NoConvergence {
        iterations: usize,
        best_residual: f64,
    },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),
}

/// Approximate minimum eigenpair of the adjacency matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    pub eigenvalue: f64,
    /// Unit 2-norm.
    pub eigenvector: Vec<f64>,
    /// `||A v - lambda v||_2`.
    pub residual: f64,
    pub iterations: usize,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Power iteration on `c I - A` with `c` the maximum degree, started from
/// a seeded Gaussian vector, until `||A v - lambda v|| <= tol`.
///
/// With a repeated minimum eigenvalue the limit is a seed-dependent vector
/// of the eigenspace.
pub fn min_eigenpair(
    g: &Graph,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<EigenResult, SpectralError> {
    if g.n() == 0 {
        return Err(GraphError::Empty.into());
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(SpectralError::BadTolerance(tol));
    }
    let n = g.n();
    let shift = g.max_degree() as f64;
    let mut v = GaussianField::new(n, seed).values;
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let mut av = vec![0.0; n];
    let mut best_residual = f64::INFINITY;
    for it in 0..=max_iter {
        g.adjacency_matvec(&v, &mut av);
        let lambda = dot(&v, &av);
        let residual = av
            .iter()
            .zip(&v)
            .map(|(a, x)| (a - lambda * x).powi(2))
            .sum::<f64>()
            .sqrt();
        best_residual = best_residual.min(residual);
        if residual <= tol {
            return Ok(EigenResult {
                eigenvalue: lambda,
                eigenvector: v,
                residual,
                iterations: it,
            });
        }
        if it == max_iter {
            break;
        }
        for (x, a) in v.iter_mut().zip(&av) {
            *x = shift * *x - a;
        }
        let s = norm(&v);
        if s == 0.0 {
            break;
        }
        v.iter_mut().for_each(|x| *x /= s);
    }
    Err(SpectralError::NoConvergence {
        iterations: max_iter,
        best_residual,
    })
}

/// Per-component eigen data behind an [`alr_cut`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentReport {
    pub vertices: usize,
    pub eigenvalue: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Sign of the minimum eigenvector, computed per connected component.
///
/// Every component is solved as its own relabelled graph with the same
/// `seed`, so isomorphic components in the same vertex order get identical
/// signs.
pub fn alr_cut_with_report(
    g: &Graph,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<(Cut, Vec<ComponentReport>), SpectralError> {
    let mut assignment = vec![1i8; g.n()];
    let mut reports = Vec::new();
    for comp in g.components() {
        let sub = g.induced(&comp);
        let eig = min_eigenpair(&sub, tol, max_iter, seed)?;
        for (&v, &x) in comp.iter().zip(&eig.eigenvector) {
            assignment[v] = crate::graph::sign(x);
        }
        reports.push(ComponentReport {
            vertices: comp.len(),
            eigenvalue: eig.eigenvalue,
            residual: eig.residual,
            iterations: eig.iterations,
        });
    }
    Ok((Cut::new(g, assignment)?, reports))
}

pub fn alr_cut(g: &Graph, tol: f64, max_iter: usize, seed: u64) -> Result<Cut, SpectralError> {
    alr_cut_with_report(g, tol, max_iter, seed).map(|(cut, _)| cut)
}

/// `sgn((I - A / sqrt(D - 1))^k y)` for a seeded Gaussian `y`, `D` the
/// regular degree.
pub fn truncated_power_cut(g: &Graph, k: usize, seed: u64) -> Result<Cut, SpectralError> {
    let degree = g.require_regular()?;
    truncated_power_cut_with_degree(g, degree, k, seed)
}

/// As [`truncated_power_cut`] with an explicit `degree` in the scale, for
/// graphs that are not regular (e.g. grids, using the maximum degree).
///
/// After every product the vector is divided by the power of two just
/// below its sup norm; power-of-two scaling is exact in floating point, so
/// every entry's sign is exactly that of the unscaled recursion.
pub fn truncated_power_cut_with_degree(
    g: &Graph,
    degree: usize,
    k: usize,
    seed: u64,
) -> Result<Cut, SpectralError> {
    if degree < 2 {
        return Err(SpectralError::DegreeTooSmall(degree));
    }
    let scale = 1.0 / ((degree - 1) as f64).sqrt();
    let mut x = GaussianField::new(g.n(), seed).values;
    let mut ax = vec![0.0; g.n()];
    for _ in 0..k {
        g.adjacency_matvec(&x, &mut ax);
        for (xi, a) in x.iter_mut().zip(&ax) {
            *xi -= scale * a;
        }
        let sup = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if sup > 0.0 && sup.is_finite() {
            let exp = sup.log2().floor();
            let factor = (-exp).exp2();
            x.iter_mut().for_each(|v| *v *= factor);
        }
    }
    Ok(Cut::from_signs(g, &x)?)
}
