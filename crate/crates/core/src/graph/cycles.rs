use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use serde::{Serialize, Serializer};

use super::Graph;

/// Length of a shortest cycle; forests have infinite girth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }

    /// `true` when the girth is at least `len`.
    pub fn at_least(self, len: usize) -> bool {
        match self {
            Girth::Finite(g) => g >= len,
            Girth::Infinite => true,
        }
    }
}

impl Ord for Girth {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Girth::Finite(a), Girth::Finite(b)) => a.cmp(b),
            (Girth::Finite(_), Girth::Infinite) => Ordering::Less,
            (Girth::Infinite, Girth::Finite(_)) => Ordering::Greater,
            (Girth::Infinite, Girth::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Girth {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Girth::Finite(g) => s.serialize_u64(*g as u64),
            Girth::Infinite => s.serialize_str("inf"),
        }
    }
}

pub fn girth(g: &Graph) -> Girth {
    match shortest_cycle_in(g.adjacency(), usize::MAX) {
        Some(c) => Girth::Finite(c.len()),
        None => Girth::Infinite,
    }
}

/// Vertices of some shortest cycle, in cycle order.
pub fn shortest_cycle(g: &Graph) -> Option<Vec<usize>> {
    shortest_cycle_in(g.adjacency(), usize::MAX)
}

struct Bfs {
    dist: Vec<usize>,
    parent: Vec<usize>,
    touched: Vec<usize>,
}

impl Bfs {
    fn new(n: usize) -> Self {
        Bfs {
            dist: vec![usize::MAX; n],
            parent: vec![usize::MAX; n],
            touched: Vec::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v] = usize::MAX;
            self.parent[v] = usize::MAX;
        }
        self.touched.clear();
    }

    /// BFS from `root`; returns the shortest closing edge found whose cycle
    /// length is below `bound`, with that length.
    fn shortest_closing(
        &mut self,
        adj: &[Vec<usize>],
        root: usize,
        bound: usize,
    ) -> Option<(usize, usize, usize)> {
        self.reset();
        let mut best: Option<(usize, usize, usize)> = None;
        let mut limit = bound;
        let mut queue = VecDeque::new();
        self.dist[root] = 0;
        self.touched.push(root);
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            // Any cycle closed from depth d has length >= 2d + 1.
            if 2 * self.dist[x] + 1 >= limit {
                break;
            }
            for &y in &adj[x] {
                if self.dist[y] == usize::MAX {
                    self.dist[y] = self.dist[x] + 1;
                    self.parent[y] = x;
                    self.touched.push(y);
                    queue.push_back(y);
                } else if y != self.parent[x] {
                    let len = self.dist[x] + self.dist[y] + 1;
                    if len < limit {
                        limit = len;
                        best = Some((x, y, len));
                    }
                }
            }
        }
        best
    }

    fn path_to_root(&self, mut v: usize) -> Vec<usize> {
        let mut path = vec![v];
        while self.parent[v] != usize::MAX {
            v = self.parent[v];
            path.push(v);
        }
        path
    }
}

/// Shortest cycle with length strictly below `bound`.
pub(crate) fn shortest_cycle_in(adj: &[Vec<usize>], bound: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut bfs = Bfs::new(n);
    let mut best: Option<(usize, usize)> = None; // (root, len)
    let mut limit = bound;
    for root in 0..n {
        if let Some((_, _, len)) = bfs.shortest_closing(adj, root, limit) {
            limit = len;
            best = Some((root, len));
            if len == 3 {
                break;
            }
        }
    }
    let (root, len) = best?;
    let (x, y, _) = bfs
        .shortest_closing(adj, root, len + 1)
        .expect("cycle reproduces");
    // At the minimising root the two tree paths meet only at the root.
    let mut cycle = bfs.path_to_root(x);
    cycle.reverse();
    let mut back = bfs.path_to_root(y);
    back.pop();
    cycle.extend(back);
    debug_assert_eq!(cycle.len(), len);
    Some(cycle)
}

/// Length of the shortest cycle through edge `{a, b}` if it is at most
/// `max_len`, searching paths from `a` to `b` that avoid that edge.
pub(crate) fn shortest_cycle_through_edge(
    adj: &[Vec<usize>],
    a: usize,
    b: usize,
    max_len: usize,
) -> Option<usize> {
    let mut dist = std::collections::HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(a, 0usize);
    queue.push_back(a);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d + 2 > max_len {
            break;
        }
        for &y in &adj[x] {
            if x == a && y == b {
                continue;
            }
            if y == b {
                return Some(d + 2);
            }
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(y) {
                e.insert(d + 1);
                queue.push_back(y);
            }
        }
    }
    None
}
