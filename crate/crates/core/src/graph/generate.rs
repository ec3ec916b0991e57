use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cycles::{shortest_cycle_in, shortest_cycle_through_edge};
use super::{Girth, Graph, GraphError};

/// Restarts allowed per vertex in the configuration model.
const RESTARTS_PER_VERTEX: usize = 1000;

/// Uniform simple `degree`-regular graph by the configuration model with
/// full restart on any self-loop or repeated edge.
pub fn random_regular(n: usize, degree: usize, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::Empty);
    }
    if n * degree % 2 == 1 {
        return Err(GraphError::OddDegreeSum { n, degree });
    }
    if degree >= n {
        return Err(GraphError::DegreeTooLarge { n, degree });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n)
        .flat_map(|v| std::iter::repeat_n(v, degree))
        .collect();
    let budget = RESTARTS_PER_VERTEX * n;
    'attempt: for _ in 0..budget {
        stubs.shuffle(&mut rng);
        let mut list = Vec::with_capacity(stubs.len() / 2);
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v {
                continue 'attempt;
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if list.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Ok(Graph::from_canonical(n, list));
    }
    Err(GraphError::RejectionBudgetExhausted { attempts: budget })
}

/// Default swap budget for [`lift_girth`]: `10^4 * n`.
pub fn default_swap_budget(n: usize) -> usize {
    10_000 * n
}

/// Degree-preserving girth repair by double-edge swaps.
///
/// While some cycle is shorter than `target`, an edge `{a, b}` on a shortest
/// cycle is swapped with a random edge `{c, d}` into `{a, c}, {b, d}`. A swap
/// is kept only if no cycle through the new edges is as short as the current
/// girth, so the number of shortest cycles strictly drops with every
/// accepted swap. `max_swaps` bounds the number of attempted swaps.
pub fn lift_girth(
    g: &Graph,
    target: usize,
    seed: u64,
    max_swaps: usize,
) -> Result<Graph, GraphError> {
    g.require_regular()?;
    if target < 3 {
        return Err(GraphError::InvalidGirthTarget(target));
    }
    let mut adj: Vec<Vec<usize>> = g.adjacency().to_vec();
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    let mut present: HashSet<(usize, usize)> = edges.iter().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0usize;

    while let Some(cycle) = shortest_cycle_in(&adj, target) {
        let current = cycle.len();
        loop {
            if attempts >= max_swaps {
                return Err(GraphError::SwapBudgetExhausted {
                    swaps: attempts,
                    girth: Girth::Finite(current),
                });
            }
            attempts += 1;
            let i = rng.random_range(0..current);
            let (mut a, mut b) = (cycle[i], cycle[(i + 1) % current]);
            if rng.random_bool(0.5) {
                std::mem::swap(&mut a, &mut b);
            }
            let j = rng.random_range(0..edges.len());
            let (mut c, mut d) = edges[j];
            if rng.random_bool(0.5) {
                std::mem::swap(&mut c, &mut d);
            }
            if a == c || a == d || b == c || b == d {
                continue;
            }
            let (ac, bd) = (key(a, c), key(b, d));
            if present.contains(&ac) || present.contains(&bd) {
                continue;
            }
            let i_ab = edges
                .iter()
                .position(|&e| e == key(a, b))
                .expect("cycle edge present");
            replace(&mut adj, a, b, c);
            replace(&mut adj, c, d, a);
            replace(&mut adj, b, a, d);
            replace(&mut adj, d, c, b);
            let short = shortest_cycle_through_edge(&adj, a, c, current).is_some()
                || shortest_cycle_through_edge(&adj, b, d, current).is_some();
            if short {
                replace(&mut adj, a, c, b);
                replace(&mut adj, c, a, d);
                replace(&mut adj, b, d, a);
                replace(&mut adj, d, b, c);
                continue;
            }
            present.remove(&key(a, b));
            present.remove(&key(c, d));
            present.insert(ac);
            present.insert(bd);
            edges[i_ab] = ac;
            edges[j] = bd;
            break;
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_canonical(g.n(), edges))
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

fn replace(adj: &mut [Vec<usize>], v: usize, old: usize, new: usize) {
    let slot = adj[v]
        .iter_mut()
        .find(|w| **w == old)
        .expect("neighbour present");
    *slot = new;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    Grid,
    Torus,
}

/// `width x height` grid or torus; vertex `(x, y)` is `y * width + x`.
pub fn lattice(kind: LatticeKind, width: usize, height: usize) -> Result<Graph, GraphError> {
    let min = match kind {
        LatticeKind::Grid => 2,
        // A side of 2 would wrap onto an existing edge.
        LatticeKind::Torus => 3,
    };
    if width < min || height < min {
        return Err(GraphError::LatticeTooSmall { width, height, min });
    }
    let id = |x: usize, y: usize| y * width + x;
    let mut list = Vec::new();
    for y in 0..height {
        for x in 0..width {
            match kind {
                LatticeKind::Grid => {
                    if x + 1 < width {
                        list.push((id(x, y), id(x + 1, y)));
                    }
                    if y + 1 < height {
                        list.push((id(x, y), id(x, y + 1)));
                    }
                }
                LatticeKind::Torus => {
                    list.push((id(x, y), id((x + 1) % width, y)));
                    list.push((id(x, y), id(x, (y + 1) % height)));
                }
            }
        }
    }
    Graph::from_edges(width * height, list)
}

/// `copies` vertex-disjoint copies of `g`; copy `i` occupies `i*n..(i+1)*n`.
pub fn disjoint_union(g: &Graph, copies: usize) -> Result<Graph, GraphError> {
    if copies == 0 {
        return Err(GraphError::ZeroCopies);
    }
    let n = g.n();
    let list = (0..copies)
        .flat_map(|i| g.edges().iter().map(move |&(u, v)| (u + i * n, v + i * n)))
        .collect();
    Ok(Graph::from_canonical(n * copies, list))
}

/// Edge-set union on a shared vertex set, parallel edges collapsed.
pub fn superimpose(g1: &Graph, g2: &Graph) -> Result<Graph, GraphError> {
    if g1.n() != g2.n() {
        return Err(GraphError::VertexCountMismatch(g1.n(), g2.n()));
    }
    Graph::from_edges_dedup(g1.n(), g1.edges().iter().chain(g2.edges()).copied())
}

pub fn cycle_graph(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::LatticeTooSmall {
            width: n,
            height: 1,
            min: 3,
        });
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn path_graph(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::Empty);
    }
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
}

pub fn complete_graph(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::Empty);
    }
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}
