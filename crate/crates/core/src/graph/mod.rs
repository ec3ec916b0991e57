//! Simple undirected graphs with 0-based vertex labels.

mod cycles;
mod generate;
mod io;

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use cycles::{girth, shortest_cycle, Girth};
pub use generate::{
    complete_graph, cycle_graph, default_swap_budget, disjoint_union, lattice, lift_girth,
    path_graph, random_regular, superimpose, LatticeKind,
};
pub use io::{read_graph, write_graph, FormatError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("assignment has length {got}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("assignment entry {value} at vertex {vertex} is not +1 or -1")]
    NotASign { vertex: usize, value: i8 },
    #[error("graph has no edges")]
    NoEdges,
    #[error("graph is not regular (degrees range {min}..={max})")]
    NotRegular { min: usize, max: usize },
    #[error("n * D = {n} * {degree} is odd")]
    OddDegreeSum { n: usize, degree: usize },
    #[error("degree {degree} must be below n = {n}")]
    DegreeTooLarge { n: usize, degree: usize },
    #[error("configuration model rejected {attempts} pairings")]
    RejectionBudgetExhausted { attempts: usize },
    #[error("girth repair used {swaps} swap attempts, girth still {girth}")]
    SwapBudgetExhausted { swaps: usize, girth: Girth },
    #[error("target girth must be at least 3, got {0}")]
    InvalidGirthTarget(usize),
    #[error("lattice dimensions {width}x{height} below minimum {min}")]
    LatticeTooSmall {
        width: usize,
        height: usize,
        min: usize,
    },
    #[error("need at least one copy")]
    ZeroCopies,
    #[error("vertex counts differ: {0} vs {1}")]
    VertexCountMismatch(usize, usize),
    #[error("graph needs at least one vertex")]
    Empty,
}

/// An undirected simple graph.
///
/// Edges are stored canonically as `(u, v)` with `u < v`, sorted; each
/// adjacency list is sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    min_degree: usize,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and bad indices.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_canonical(n, list))
    }

    /// Like [`Graph::from_edges`] but collapses repeated edges.
    pub fn from_edges_dedup(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut list: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        list.sort_unstable();
        list.dedup();
        Self::from_edges(n, list)
    }

    /// `list` must already be sorted, deduplicated and canonical.
    pub(crate) fn from_canonical(n: usize, list: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &list {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let min_degree = adjacency.iter().map(Vec::len).min().unwrap_or(0);
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Graph {
            n,
            edges: list,
            adjacency,
            min_degree,
            max_degree,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn min_degree(&self) -> usize {
        self.min_degree
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `Some(D)` when every vertex has degree `D`.
    pub fn regular_degree(&self) -> Option<usize> {
        (self.n > 0 && self.min_degree == self.max_degree).then_some(self.max_degree)
    }

    pub fn is_regular(&self) -> bool {
        self.regular_degree().is_some()
    }

    pub(crate) fn require_regular(&self) -> Result<usize, GraphError> {
        self.regular_degree().ok_or(GraphError::NotRegular {
            min: self.min_degree,
            max: self.max_degree,
        })
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn girth(&self) -> Girth {
        girth(self)
    }

    /// Vertices within distance `r` of `sources`, sorted.
    pub fn ball(&self, sources: &[usize], r: usize) -> Result<Vec<usize>, GraphError> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if s >= self.n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: s,
                    n: self.n,
                });
            }
            if dist[s] == usize::MAX {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            if dist[u] == r {
                continue;
            }
            for &w in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok((0..self.n).filter(|&v| dist[v] != usize::MAX).collect())
    }

    /// Connected components, each sorted ascending, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Subgraph induced on `vertices` (sorted), relabelled `0..len`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut list: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u].min(index[v]), index[u].max(index[v])))
            .collect();
        list.sort_unstable();
        Graph::from_canonical(vertices.len(), list)
    }

    /// `A x` for the 0/1 adjacency matrix.
    pub fn adjacency_matvec(&self, x: &[f64], out: &mut [f64]) {
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            out[u] = nbrs.iter().map(|&w| x[w]).sum();
        }
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}", self.n, self.edges.len())?;
        match self.regular_degree() {
            Some(d) => write!(f, ", {d}-regular)"),
            None => write!(f, ", degrees {}..={})", self.min_degree, self.max_degree),
        }
    }
}

/// Cut value and mean edge correlation of a sign vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutValue {
    /// Fraction of edges with differing endpoint signs.
    pub value: f64,
    /// `E_{(i,j) in E}[x_i x_j]`, equal to `1 - 2 * value`.
    pub edge_correlation: f64,
}

fn check_signs(g: &Graph, x: &[i8]) -> Result<(), GraphError> {
    if x.len() != g.n {
        return Err(GraphError::LengthMismatch {
            expected: g.n,
            got: x.len(),
        });
    }
    if let Some((vertex, &value)) = x.iter().enumerate().find(|(_, &s)| s != 1 && s != -1) {
        return Err(GraphError::NotASign { vertex, value });
    }
    Ok(())
}

fn cut_edges(g: &Graph, x: &[i8]) -> usize {
    g.edges.iter().filter(|&&(u, v)| x[u] != x[v]).count()
}

/// Exact cut fraction of `x` on `g`.
pub fn cut_value(g: &Graph, x: &[i8]) -> Result<CutValue, GraphError> {
    check_signs(g, x)?;
    let m = g.num_edges();
    if m == 0 {
        return Err(GraphError::NoEdges);
    }
    let cut = cut_edges(g, x);
    // Both fields come from integer counts so the identity is exact.
    Ok(CutValue {
        value: cut as f64 / m as f64,
        edge_correlation: (m as f64 - 2.0 * cut as f64) / m as f64,
    })
}

/// A ±1 assignment together with its cut fraction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cut {
    pub assignment: Vec<i8>,
    pub value: f64,
}

impl Cut {
    pub fn new(g: &Graph, assignment: Vec<i8>) -> Result<Self, GraphError> {
        let value = cut_value(g, &assignment)?.value;
        Ok(Cut { assignment, value })
    }

    /// Signs of `values`, with `sgn(0) = +1`.
    pub fn from_signs(g: &Graph, values: &[f64]) -> Result<Self, GraphError> {
        Self::new(g, values.iter().map(|&v| sign(v)).collect())
    }

    pub fn negated(&self) -> Cut {
        Cut {
            assignment: self.assignment.iter().map(|s| -s).collect(),
            value: self.value,
        }
    }

    /// Space-separated `1`/`-1` tokens.
    pub fn to_line(&self) -> String {
        self.assignment
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// `sgn` with the convention `sgn(0) = +1` (also for `-0.0`).
pub fn sign(v: f64) -> i8 {
    if v >= 0.0 || v.is_nan() {
        1
    } else {
        -1
    }
}
