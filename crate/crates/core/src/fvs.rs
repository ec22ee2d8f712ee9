//! Feedback vertex sets: validation and a local-ratio 2-approximation.

use crate::graph::{Graph, Vertex};

const EPS: f64 = 1e-9;

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// True iff `g − x` is a forest.
pub fn validate_fvs(g: &Graph, x: &[Vertex]) -> bool {
    let mut removed = vec![false; g.capacity()];
    for &v in x {
        if v < removed.len() {
            removed[v] = true;
        }
    }
    let mut dsu = Dsu::new(g.capacity());
    g.edges().filter(|&(u, v)| !removed[u] && !removed[v]).all(|(u, v)| dsu.union(u, v))
}

struct Residual {
    adj: Vec<Vec<Vertex>>,
    alive: Vec<bool>,
    deg: Vec<usize>,
}

impl Residual {
    fn remove(&mut self, v: Vertex) {
        self.alive[v] = false;
        for i in 0..self.adj[v].len() {
            let u = self.adj[v][i];
            if self.alive[u] {
                self.deg[u] -= 1;
            }
        }
    }

    fn live_neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj[v].iter().copied().filter(|&u| self.alive[u])
    }

    /// Strips vertices of degree at most one until none remain.
    fn prune(&mut self) {
        let mut stack: Vec<Vertex> = (0..self.adj.len()).filter(|&v| self.alive[v] && self.deg[v] <= 1).collect();
        while let Some(v) = stack.pop() {
            if !self.alive[v] {
                continue;
            }
            let nbrs: Vec<Vertex> = self.live_neighbors(v).collect();
            self.remove(v);
            for u in nbrs {
                if self.deg[u] == 1 {
                    stack.push(u);
                }
            }
        }
    }

    /// A cycle in which every vertex but at most one has degree two.
    fn semidisjoint_cycle(&self) -> Option<Vec<Vertex>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        for s in 0..n {
            if !self.alive[s] || self.deg[s] != 2 || seen[s] {
                continue;
            }
            seen[s] = true;
            let mut run = vec![s];
            let mut ends = Vec::new();
            for start in self.live_neighbors(s).collect::<Vec<_>>() {
                let (mut prev, mut cur) = (s, start);
                while cur != s && self.deg[cur] == 2 {
                    if !seen[cur] {
                        seen[cur] = true;
                        run.push(cur);
                    }
                    let next = self.live_neighbors(cur).find(|&u| u != prev).unwrap();
                    prev = cur;
                    cur = next;
                }
                if cur == s {
                    run.sort_unstable();
                    return Some(run);
                }
                ends.push(cur);
            }
            if ends[0] == ends[1] {
                run.push(ends[0]);
                run.sort_unstable();
                return Some(run);
            }
        }
        None
    }
}

/// A feedback vertex set of size at most twice the optimum.
///
/// Local-ratio rounds alternate between semidisjoint cycles and
/// degree-weighted reductions, then redundant vertices are dropped in
/// reverse order of selection.
pub fn approx_fvs(g: &Graph) -> Vec<Vertex> {
    let n = g.capacity();
    let mut r = Residual {
        adj: (0..n).map(|v| if g.contains(v) { g.neighbors(v).to_vec() } else { Vec::new() }).collect(),
        alive: (0..n).map(|v| g.contains(v)).collect(),
        deg: (0..n).map(|v| if g.contains(v) { g.degree(v) } else { 0 }).collect(),
    };
    let mut weight = vec![1.0f64; n];
    let mut chosen = Vec::new();
    r.prune();
    while r.alive.iter().any(|&a| a) {
        if let Some(cycle) = r.semidisjoint_cycle() {
            let gamma = cycle.iter().map(|&v| weight[v]).fold(f64::INFINITY, f64::min);
            for &v in &cycle {
                weight[v] -= gamma;
            }
        } else {
            let live: Vec<Vertex> = (0..n).filter(|&v| r.alive[v]).collect();
            let gamma = live.iter().map(|&v| weight[v] / (r.deg[v] - 1) as f64).fold(f64::INFINITY, f64::min);
            for &v in &live {
                weight[v] -= gamma * (r.deg[v] - 1) as f64;
            }
        }
        let zero: Vec<Vertex> = (0..n).filter(|&v| r.alive[v] && weight[v] <= EPS).collect();
        for v in zero {
            r.remove(v);
            chosen.push(v);
        }
        r.prune();
    }

    let mut in_set = vec![false; n];
    for &v in &chosen {
        in_set[v] = true;
    }
    let mut dsu = Dsu::new(n);
    for (u, v) in g.edges() {
        if !in_set[u] && !in_set[v] {
            dsu.union(u, v);
        }
    }
    for &v in chosen.iter().rev() {
        let outside: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&u| !in_set[u]).collect();
        let mut roots: Vec<usize> = outside.iter().map(|&u| dsu.find(u)).collect();
        roots.sort_unstable();
        let distinct = roots.windows(2).all(|w| w[0] != w[1]);
        if distinct {
            in_set[v] = false;
            for u in outside {
                dsu.union(u, v);
            }
        }
    }
    let mut out: Vec<Vertex> = chosen.into_iter().filter(|&v| in_set[v]).collect();
    out.sort_unstable();
    out
}
