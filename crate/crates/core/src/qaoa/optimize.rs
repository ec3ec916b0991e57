//! Reproducible angle search.
//!
//! Depth 1 scans `gamma in [0, 2pi)` and `beta in [0, pi)` on a `0.01` grid,
//! then refines coordinate-wise down to a `1e-5` step. Deeper circuits start
//! from the interpolated and the zero-padded previous optimum, run a simplex
//! search from each, and then from five seeded perturbations of the best.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use super::{QaoaError, QaoaParams, QaoaSimulator};
use crate::graph::Graph;
use crate::rng::derive_seed;

/// Default evaluations per depth.
pub const DEFAULT_BUDGET: usize = 20_000;

const GRID_STEP: f64 = 0.01;
const REFINE_START: f64 = 0.005;
const REFINE_END: f64 = 1e-5;
const PERTURBATIONS: usize = 5;
const PERTURB_SCALE: f64 = 0.1;
const SIMPLEX_STEP: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeResult {
    pub params: QaoaParams,
    pub value: f64,
    pub evaluations: usize,
    /// The per-depth budget ran out before the search finished.
    pub budget_exhausted: bool,
}

struct Evaluator<'a> {
    sim: &'a QaoaSimulator,
    used: usize,
    budget: usize,
    best: Option<(f64, Vec<f64>)>,
}

impl<'a> Evaluator<'a> {
    fn new(sim: &'a QaoaSimulator, budget: usize) -> Self {
        Evaluator {
            sim,
            used: 0,
            budget,
            best: None,
        }
    }

    fn exhausted(&self) -> bool {
        self.used >= self.budget
    }

    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.exhausted() {
            return None;
        }
        self.used += 1;
        let v = self.sim.expected_cut(&QaoaParams::from_slice(x));
        if self.best.as_ref().is_none_or(|(b, _)| v > *b) {
            self.best = Some((v, x.to_vec()));
        }
        Some(v)
    }

    fn finish(self) -> OptimizeResult {
        let budget_exhausted = self.exhausted();
        let (value, x) = self.best.expect("at least one evaluation");
        OptimizeResult {
            params: QaoaParams::from_slice(&x),
            value,
            evaluations: self.used,
            budget_exhausted,
        }
    }
}

/// Optimised depth-`p` angles; depths `1..p` are solved first as warm starts.
pub fn optimize_params(
    g: &Graph,
    p: usize,
    seed: u64,
    budget: usize,
) -> Result<OptimizeResult, QaoaError> {
    let mut all = optimize_schedule(g, p, seed, budget)?;
    Ok(all.pop().expect("p >= 1"))
}

/// Optimum at every depth `1..=p`, each with its own `budget`.
pub fn optimize_schedule(
    g: &Graph,
    p: usize,
    seed: u64,
    budget: usize,
) -> Result<Vec<OptimizeResult>, QaoaError> {
    if budget == 0 {
        return Err(QaoaError::ZeroBudget);
    }
    let sim = QaoaSimulator::new(g)?;
    if p == 0 {
        let params = QaoaParams::zeros(0);
        let value = sim.expected_cut(&params);
        return Ok(vec![OptimizeResult {
            params,
            value,
            evaluations: 1,
            budget_exhausted: false,
        }]);
    }
    let mut out: Vec<OptimizeResult> = Vec::with_capacity(p);
    out.push(depth_one(&sim, budget));
    for depth in 2..=p {
        let prev = &out[depth - 2].params;
        out.push(deeper(&sim, prev, derive_seed(seed, depth as u64), budget));
    }
    Ok(out)
}

fn depth_one(sim: &QaoaSimulator, budget: usize) -> OptimizeResult {
    let mut ev = Evaluator::new(sim, budget);
    let gammas = (2.0 * PI / GRID_STEP).ceil() as usize;
    let betas = (PI / GRID_STEP).ceil() as usize;
    let mut best: Option<(f64, f64, f64)> = None;
    // For fixed gamma the last layer gives F(beta) = a0 + a1 cos 4beta + a2 sin 4beta,
    // so three evaluations pin every grid value in the beta column.
    'scan: for i in 0..gammas {
        let gamma = i as f64 * GRID_STEP;
        let mut f = [0.0; 3];
        for (slot, beta) in f.iter_mut().zip([0.0, PI / 8.0, PI / 4.0]) {
            match ev.eval(&[gamma, beta]) {
                Some(v) => *slot = v,
                None => break 'scan,
            }
        }
        let a0 = (f[0] + f[2]) / 2.0;
        let a1 = (f[0] - f[2]) / 2.0;
        let a2 = f[1] - a0;
        for j in 0..betas {
            let beta = j as f64 * GRID_STEP;
            let v = a0 + a1 * (4.0 * beta).cos() + a2 * (4.0 * beta).sin();
            if best.is_none_or(|(b, _, _)| v > b) {
                best = Some((v, gamma, beta));
            }
        }
    }
    if let Some((_, gamma, beta)) = best {
        let mut x = [gamma, beta];
        if let Some(mut fx) = ev.eval(&x) {
            let mut step = REFINE_START;
            'refine: while step >= REFINE_END {
                let mut improved = false;
                for c in 0..2 {
                    for dir in [1.0, -1.0] {
                        let mut y = x;
                        y[c] += dir * step;
                        let Some(fy) = ev.eval(&y) else { break 'refine };
                        if fy > fx {
                            (x, fx, improved) = (y, fy, true);
                            break;
                        }
                    }
                }
                if !improved {
                    step /= 2.0;
                }
            }
        }
    }
    ev.finish()
}

/// Linear interpolation of a depth-`p` schedule onto `p + 1` layers.
fn interpolate(xs: &[f64]) -> Vec<f64> {
    let p = xs.len();
    (0..=p)
        .map(|i| {
            let left = if i == 0 { 0.0 } else { xs[i - 1] };
            let right = if i == p { 0.0 } else { xs[i] };
            (i as f64 * left + (p - i) as f64 * right) / p as f64
        })
        .collect()
}

fn deeper(sim: &QaoaSimulator, prev: &QaoaParams, seed: u64, budget: usize) -> OptimizeResult {
    let mut ev = Evaluator::new(sim, budget);
    let interp: Vec<f64> = interpolate(prev.gammas())
        .into_iter()
        .chain(interpolate(prev.betas()))
        .collect();
    let padded: Vec<f64> = prev
        .gammas()
        .iter()
        .copied()
        .chain([0.0])
        .chain(prev.betas().iter().copied().chain([0.0]))
        .collect();
    for start in [interp, padded] {
        if nelder_mead(&mut ev, &start).is_none() {
            return ev.finish();
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, PERTURB_SCALE).expect("finite scale");
    for _ in 0..PERTURBATIONS {
        let centre = ev.best.as_ref().expect("evaluated").1.clone();
        let start: Vec<f64> = centre.iter().map(|x| x + noise.sample(&mut rng)).collect();
        if nelder_mead(&mut ev, &start).is_none() {
            break;
        }
    }
    ev.finish()
}

/// Adaptive-coefficient simplex maximisation. `None` once the budget runs out.
fn nelder_mead(ev: &mut Evaluator, start: &[f64]) -> Option<()> {
    let dim = start.len();
    let d = dim as f64;
    let (alpha, gamma, rho, shrink) = (1.0, 1.0 + 2.0 / d, 0.75 - 1.0 / (2.0 * d), 1.0 - 1.0 / d);
    let max_iter = 500 * dim;

    // Minimise the negated expectation.
    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(dim + 1);
    simplex.push((-ev.eval(start)?, start.to_vec()));
    for i in 0..dim {
        let mut x = start.to_vec();
        x[i] += SIMPLEX_STEP;
        simplex.push((-ev.eval(&x)?, x));
    }
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
        let spread = simplex[dim].0 - simplex[0].0;
        let size = simplex[1..]
            .iter()
            .flat_map(|(_, x)| x.iter().zip(&simplex[0].1).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread < 1e-12 && size < 1e-6 {
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|(_, x)| x[j]).sum::<f64>() / d)
            .collect();
        let worst = simplex[dim].1.clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(alpha);
        let fr = -ev.eval(&xr)?;
        if fr < simplex[0].0 {
            let xe = along(alpha * gamma);
            let fe = -ev.eval(&xe)?;
            simplex[dim] = if fe < fr { (fe, xe) } else { (fr, xr) };
        } else if fr < simplex[dim - 1].0 {
            simplex[dim] = (fr, xr);
        } else {
            let (xc, fc) = if fr < simplex[dim].0 {
                let xc = along(alpha * rho);
                let fc = -ev.eval(&xc)?;
                (xc, fc)
            } else {
                let xc = along(-rho);
                let fc = -ev.eval(&xc)?;
                (xc, fc)
            };
            if fc < simplex[dim].0.min(fr) {
                simplex[dim] = (fc, xc);
            } else {
                let best = simplex[0].1.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = best
                        .iter()
                        .zip(&entry.1)
                        .map(|(b, v)| b + shrink * (v - b))
                        .collect();
                    *entry = (-ev.eval(&x)?, x);
                }
            }
        }
    }
    Some(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph, random_regular};

    #[test]
    fn interpolation_endpoints() {
        assert_eq!(interpolate(&[1.0]), vec![1.0, 1.0]);
        let x = interpolate(&[1.0, 2.0]);
        assert_eq!(x, vec![1.0, 1.5, 2.0]);
    }

    #[test]
    fn depth_one_grid_cost() {
        let g = complete_graph(3).unwrap();
        let r = optimize_params(&g, 1, 0, DEFAULT_BUDGET).unwrap();
        assert!(!r.budget_exhausted);
        assert!(r.evaluations > 3 * 629);
    }

    #[test]
    fn tiny_budget_is_flagged() {
        let g = cycle_graph(5).unwrap();
        let r = optimize_params(&g, 1, 0, 10).unwrap();
        assert!(r.budget_exhausted);
        assert_eq!(r.evaluations, 10);
        assert_eq!(optimize_params(&g, 1, 0, 0), Err(QaoaError::ZeroBudget));
    }

    #[test]
    fn schedule_is_monotone_and_deterministic() {
        let g = random_regular(8, 3, 5).unwrap();
        let a = optimize_schedule(&g, 3, 11, 4000).unwrap();
        assert!(a.windows(2).all(|w| w[1].value >= w[0].value));
        assert_eq!(a, optimize_schedule(&g, 3, 11, 4000).unwrap());
        assert_eq!(a[2], optimize_params(&g, 3, 11, 4000).unwrap());
    }
}
