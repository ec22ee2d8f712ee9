//! Simple undirected graphs with stable vertex identities.
//!
//! Vertices are dense integer ids `0..capacity`. Deleting a vertex tombstones
//! its id; ids are never reused, so reduction traces and lifted solutions
//! always refer to vertices of the original input.

use crate::error::{Error, Result};

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    alive: Vec<bool>,
    live: usize,
    edges: usize,
}

impl Graph {
    /// Edgeless graph on vertices `0..n`.
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], alive: vec![true; n], live: n, edges: 0 }
    }

    /// Builds a graph from an edge list, rejecting loops and parallel edges.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(Error::Validation(format!("self-loop at vertex {}", u + 1)));
            }
            if !g.add_edge(u, v) {
                return Err(Error::Validation(format!("duplicate edge {} {}", u + 1, v + 1)));
            }
        }
        Ok(g)
    }

    /// Size of the id space, including tombstoned ids.
    pub fn capacity(&self) -> usize {
        self.alive.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.live
    }

    pub fn num_edges(&self) -> usize {
        self.edges
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.alive.len() && self.alive[v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.alive.iter().enumerate().filter(|(_, &a)| a).map(|(v, _)| v)
    }

    /// Sorted neighbor sequence of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.contains(u) && self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices().flat_map(move |u| self.adj[u].iter().copied().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    /// Inserts `{u, v}`; returns false if the edge was already present.
    ///
    /// Panics on loops or dead endpoints.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        assert!(u != v, "self-loop at {u}");
        assert!(self.contains(u) && self.contains(v), "edge {u}-{v} touches a deleted vertex");
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.edges += 1;
                true
            }
        }
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        if !self.contains(u) {
            return false;
        }
        match self.adj[u].binary_search(&v) {
            Ok(pos) => {
                self.adj[u].remove(pos);
                let pos = self.adj[v].binary_search(&u).expect("symmetric adjacency");
                self.adj[v].remove(pos);
                self.edges -= 1;
                true
            }
            Err(_) => false,
        }
    }

    /// Tombstones `v` together with its incident edges.
    pub fn remove_vertex(&mut self, v: Vertex) -> Result<()> {
        if !self.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        let nbrs = std::mem::take(&mut self.adj[v]);
        for &u in &nbrs {
            let pos = self.adj[u].binary_search(&v).expect("symmetric adjacency");
            self.adj[u].remove(pos);
        }
        self.edges -= nbrs.len();
        self.alive[v] = false;
        self.live -= 1;
        Ok(())
    }

    /// `G - S`. Surviving vertices keep their ids.
    pub fn delete_vertices(&self, set: &[Vertex]) -> Result<Graph> {
        let mut drop = vec![false; self.capacity()];
        for &v in set {
            if !self.contains(v) {
                return Err(Error::UnknownVertex(v));
            }
            drop[v] = true;
        }
        Ok(self.filtered(|v| !drop[v]))
    }

    /// `G[S]`. Vertices outside `S` are tombstoned.
    pub fn induced_subgraph(&self, set: &[Vertex]) -> Result<Graph> {
        let mut keep = vec![false; self.capacity()];
        for &v in set {
            if !self.contains(v) {
                return Err(Error::UnknownVertex(v));
            }
            keep[v] = true;
        }
        Ok(self.filtered(|v| keep[v]))
    }

    fn filtered(&self, keep: impl Fn(Vertex) -> bool) -> Graph {
        let n = self.capacity();
        let mut g = Graph { adj: vec![Vec::new(); n], alive: vec![false; n], live: 0, edges: 0 };
        for v in self.vertices().filter(|&v| keep(v)) {
            g.alive[v] = true;
            g.live += 1;
            g.adj[v] = self.adj[v].iter().copied().filter(|&u| keep(u)).collect();
            g.edges += g.adj[v].len();
        }
        g.edges /= 2;
        g
    }

    /// Relabels live vertices to `0..num_vertices` in ascending id order.
    /// Returns the compacted graph and the map from new id to old id.
    pub fn compact(&self) -> (Graph, Vec<Vertex>) {
        let order: Vec<Vertex> = self.vertices().collect();
        let mut index = vec![usize::MAX; self.capacity()];
        for (i, &v) in order.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(order.len());
        for (i, &v) in order.iter().enumerate() {
            g.adj[i] = self.adj[v].iter().map(|&u| index[u]).collect();
        }
        g.edges = self.edges;
        (g, order)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.capacity()];
        let mut comps = Vec::new();
        let mut stack = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Acyclicity via the edge-count identity `|E| = |V| - #components`.
    pub fn is_forest(&self) -> bool {
        self.edges + self.connected_components().len() == self.live
    }

    /// True iff no two members of `set` are adjacent. Dead or duplicate
    /// members make the set invalid.
    pub fn is_independent(&self, set: &[Vertex]) -> bool {
        self.independence_violation(set).is_none() && distinct_live(self, set)
    }

    /// First edge with both endpoints in `set`, if any.
    pub fn independence_violation(&self, set: &[Vertex]) -> Option<(Vertex, Vertex)> {
        let mut mark = vec![false; self.capacity()];
        for &v in set {
            if v < mark.len() {
                mark[v] = true;
            }
        }
        set.iter()
            .filter(|&&v| self.contains(v))
            .find_map(|&v| self.adj[v].iter().find(|&&u| mark[u]).map(|&u| (v.min(u), v.max(u))))
    }

    /// First edge with neither endpoint in `set`, if any.
    pub fn uncovered_edge(&self, set: &[Vertex]) -> Option<(Vertex, Vertex)> {
        let mut mark = vec![false; self.capacity()];
        for &v in set {
            if v < mark.len() {
                mark[v] = true;
            }
        }
        self.edges().find(|&(u, v)| !mark[u] && !mark[v])
    }

    pub fn is_vertex_cover(&self, set: &[Vertex]) -> bool {
        self.uncovered_edge(set).is_none() && distinct_live(self, set)
    }

    /// Checks the structural invariants: symmetric, sorted, loop-free
    /// adjacency over live vertices and a consistent edge count.
    pub fn check_invariants(&self) -> bool {
        let mut degree_sum = 0;
        for v in 0..self.capacity() {
            let nb = &self.adj[v];
            if !self.alive[v] {
                if !nb.is_empty() {
                    return false;
                }
                continue;
            }
            if nb.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &u in nb {
                if u == v || !self.contains(u) || self.adj[u].binary_search(&v).is_err() {
                    return false;
                }
            }
            degree_sum += nb.len();
        }
        degree_sum == 2 * self.edges && self.alive.iter().filter(|&&a| a).count() == self.live
    }
}

fn distinct_live(g: &Graph, set: &[Vertex]) -> bool {
    let mut seen = vec![false; g.capacity()];
    set.iter().all(|&v| g.contains(v) && !std::mem::replace(&mut seen[v], true))
}

/// Sorts and deduplicates a vertex list.
pub fn normalize(mut set: Vec<Vertex>) -> Vec<Vertex> {
    set.sort_unstable();
    set.dedup();
    set
}
