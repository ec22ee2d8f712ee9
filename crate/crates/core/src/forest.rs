//! Independence and matching machinery on forests, plus the conflict
//! function `CONF_F'(Y) = α(F') − α(F' − N(Y))`.

use crate::chunk::enumerate_chunks;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::matching::Matching;

const NONE: usize = usize::MAX;
const BLOCKED: i64 = i64::MIN / 4;

/// A rooted traversal of a forest, reusable across many DP passes.
///
/// `order` lists vertices parents-first; trees appear in ascending order of
/// their smallest vertex, which is also the root.
#[derive(Debug, Clone)]
pub struct ForestDp {
    order: Vec<Vertex>,
    parent: Vec<usize>,
    root_of: Vec<usize>,
    inc: Vec<i64>,
    exc: Vec<i64>,
}

impl ForestDp {
    /// Builds the traversal over `vertices` with adjacency `nbrs`.
    /// Fails if a cycle is found.
    pub fn build<'a, I, N>(capacity: usize, vertices: I, mut nbrs: N) -> Result<Self>
    where
        I: IntoIterator<Item = Vertex>,
        N: FnMut(Vertex) -> &'a [Vertex],
    {
        let mut pos = vec![NONE; capacity];
        let mut order = Vec::new();
        let mut parent = Vec::new();
        let mut root_of = Vec::new();
        let mut stack = Vec::new();
        for s in vertices {
            if pos[s] != NONE {
                continue;
            }
            let root = order.len();
            pos[s] = root;
            order.push(s);
            parent.push(NONE);
            root_of.push(root);
            stack.push(s);
            while let Some(v) = stack.pop() {
                let pv = pos[v];
                let up = parent[pv];
                for &u in nbrs(v) {
                    if up != NONE && order[up] == u {
                        continue;
                    }
                    if pos[u] != NONE {
                        return Err(Error::NotAForest);
                    }
                    pos[u] = order.len();
                    order.push(u);
                    parent.push(pv);
                    root_of.push(root);
                    stack.push(u);
                }
            }
        }
        let n = order.len();
        Ok(ForestDp { order, parent, root_of, inc: vec![0; n], exc: vec![0; n] })
    }

    pub fn of_graph(f: &Graph) -> Result<Self> {
        ForestDp::build(f.capacity(), f.vertices(), |v| f.neighbors(v))
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.order
    }

    /// Roots (as positions into `vertices()`), one per tree.
    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.order.len()).filter(|&i| self.parent[i] == NONE)
    }

    /// Position of the root of the tree containing position `i`.
    pub fn root_of(&self, i: usize) -> usize {
        self.root_of[i]
    }

    fn run(&mut self, blocked: impl Fn(Vertex) -> bool) {
        self.inc.iter_mut().for_each(|x| *x = 0);
        self.exc.iter_mut().for_each(|x| *x = 0);
        for i in (0..self.order.len()).rev() {
            let inc = if blocked(self.order[i]) { BLOCKED } else { 1 + self.inc[i] };
            let exc = self.exc[i];
            self.inc[i] = inc;
            let p = self.parent[i];
            if p != NONE {
                self.exc[p] += inc.max(exc);
                self.inc[p] += exc;
            }
        }
    }

    fn best(&self, i: usize) -> usize {
        self.inc[i].max(self.exc[i]) as usize
    }

    /// α of the forest minus the vertices for which `blocked` holds.
    pub fn alpha(&mut self, blocked: impl Fn(Vertex) -> bool) -> usize {
        self.run(blocked);
        self.roots().map(|r| self.best(r)).sum()
    }

    /// Per-tree α (indexed like `roots()`), minus blocked vertices.
    pub fn alpha_per_tree(&mut self, blocked: impl Fn(Vertex) -> bool) -> Vec<usize> {
        self.run(blocked);
        self.roots().map(|r| self.best(r)).collect()
    }

    /// A maximum independent set avoiding blocked vertices. Ties include
    /// the vertex, so the output is a deterministic function of the input.
    pub fn mis(&mut self, blocked: impl Fn(Vertex) -> bool) -> Vec<Vertex> {
        self.run(blocked);
        let mut taken = vec![false; self.order.len()];
        for i in 0..self.order.len() {
            let p = self.parent[i];
            let parent_taken = p != NONE && taken[p];
            taken[i] = !parent_taken && self.inc[i] >= 0 && self.inc[i] >= self.exc[i];
        }
        let mut set: Vec<Vertex> = (0..self.order.len()).filter(|&i| taken[i]).map(|i| self.order[i]).collect();
        set.sort_unstable();
        set
    }
}

fn marks(capacity: usize, set: &[Vertex]) -> Vec<bool> {
    let mut m = vec![false; capacity];
    for &v in set {
        if v < capacity {
            m[v] = true;
        }
    }
    m
}

/// Independence number of a forest.
pub fn alpha_forest(f: &Graph) -> Result<usize> {
    Ok(ForestDp::of_graph(f)?.alpha(|_| false))
}

/// `α(f − avoid)`, computed without materialising the deletion.
pub fn alpha_forest_avoiding(f: &Graph, avoid: &[Vertex]) -> Result<usize> {
    let blocked = marks(f.capacity(), avoid);
    Ok(ForestDp::of_graph(f)?.alpha(|v| blocked[v]))
}

/// A maximum independent set of `f − avoid`.
pub fn mis_forest_avoiding(f: &Graph, avoid: &[Vertex]) -> Result<Vec<Vertex>> {
    let blocked = marks(f.capacity(), avoid);
    Ok(ForestDp::of_graph(f)?.mis(|v| blocked[v]))
}

/// Perfect matching of a forest by repeatedly matching a leaf to its
/// unique neighbour; `None` if the forest has none.
pub fn perfect_matching_forest(f: &Graph) -> Result<Option<Matching>> {
    if !f.is_forest() {
        return Err(Error::NotAForest);
    }
    let mut deg: Vec<usize> = (0..f.capacity()).map(|v| if f.contains(v) { f.degree(v) } else { 0 }).collect();
    let mut gone = vec![false; f.capacity()];
    let mut m = Matching::empty(f.capacity());
    if f.vertices().any(|v| deg[v] == 0) {
        return Ok(None);
    }
    let mut leaves: Vec<Vertex> = f.vertices().filter(|&v| deg[v] == 1).collect();
    leaves.reverse();
    while let Some(v) = leaves.pop() {
        if gone[v] {
            continue;
        }
        if deg[v] == 0 {
            return Ok(None);
        }
        let u = *f.neighbors(v).iter().find(|&&u| !gone[u]).expect("leaf has a live neighbour");
        m.join(v, u);
        gone[v] = true;
        gone[u] = true;
        for &w in f.neighbors(u) {
            if gone[w] {
                continue;
            }
            deg[w] -= 1;
            match deg[w] {
                0 => return Ok(None),
                1 => leaves.push(w),
                _ => {}
            }
        }
    }
    if f.vertices().all(|v| gone[v]) {
        Ok(Some(m))
    } else {
        Err(Error::Invariant("leaf peeling stalled on a forest".into()))
    }
}

/// Maximum matching of a forest: scanning children before parents, match
/// a vertex to its parent whenever both are still free.
pub fn max_matching_forest(f: &Graph) -> Result<Matching> {
    let dp = ForestDp::of_graph(f)?;
    let mut m = Matching::empty(f.capacity());
    for i in (0..dp.order.len()).rev() {
        let p = dp.parent[i];
        if p == NONE {
            continue;
        }
        let (v, u) = (dp.order[i], dp.order[p]);
        if !m.is_covered(v) && !m.is_covered(u) {
            m.join(v, u);
        }
    }
    Ok(m)
}

/// `CONF_F'(Y)` where `F' = g[f_vertices]` must be a forest.
pub fn conf(g: &Graph, f_vertices: &[Vertex], chunk: &[Vertex]) -> Result<usize> {
    let f = g.induced_subgraph(f_vertices)?;
    let mut dp = ForestDp::of_graph(&f)?;
    let mut hit = vec![false; g.capacity()];
    for &y in chunk {
        if !g.contains(y) {
            return Err(Error::UnknownVertex(y));
        }
        for &u in g.neighbors(y) {
            hit[u] = true;
        }
    }
    let full = dp.alpha(|_| false);
    let reduced = dp.alpha(|v| hit[v]);
    Ok(full - reduced)
}

/// `ACTIVE_F(𝒳)`: the sum of conflicts over every chunk of `x`.
pub fn active_conflicts(g: &Graph, x: &[Vertex], f_vertices: &[Vertex]) -> Result<usize> {
    enumerate_chunks(g, x).iter().map(|c| conf(g, f_vertices, &c.members())).sum()
}

/// Conflicts summed over all chunks of `x`, split by tree of `g − x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeConflicts {
    /// Lowest vertex of the tree.
    pub min_vertex: Vertex,
    pub size: usize,
    pub conflicts: usize,
}

/// Per-tree conflict totals of `g − x`, ordered by lowest vertex.
pub fn conflict_profile(g: &Graph, x: &[Vertex]) -> Result<Vec<TreeConflicts>> {
    let f = g.delete_vertices(x)?;
    let mut dp = ForestDp::of_graph(&f)?;
    let roots: Vec<usize> = dp.roots().collect();
    let mut slot = vec![NONE; dp.len()];
    for (t, &r) in roots.iter().enumerate() {
        slot[r] = t;
    }
    let mut out: Vec<TreeConflicts> =
        roots.iter().map(|&r| TreeConflicts { min_vertex: dp.vertices()[r], size: 0, conflicts: 0 }).collect();
    for i in 0..dp.len() {
        let t = slot[dp.root_of(i)];
        out[t].size += 1;
        out[t].min_vertex = out[t].min_vertex.min(dp.vertices()[i]);
    }
    let base = dp.alpha_per_tree(|_| false);
    let mut hit = vec![false; g.capacity()];
    for chunk in enumerate_chunks(g, x) {
        let members = chunk.members();
        for &y in &members {
            for &u in g.neighbors(y) {
                hit[u] = true;
            }
        }
        for (t, a) in dp.alpha_per_tree(|v| hit[v]).into_iter().enumerate() {
            out[t].conflicts += base[t] - a;
        }
        for &y in &members {
            for &u in g.neighbors(y) {
                hit[u] = false;
            }
        }
    }
    out.sort_by_key(|t| t.min_vertex);
    Ok(out)
}
