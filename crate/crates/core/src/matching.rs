//! Maximum bipartite matching (Hopcroft–Karp) and König vertex covers.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

const NONE: usize = usize::MAX;

/// A set of vertex-disjoint edges, stored as a mate table over the id space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<usize>,
    size: usize,
}

impl Matching {
    pub fn empty(capacity: usize) -> Self {
        Matching { mate: vec![NONE; capacity], size: 0 }
    }

    /// Builds a matching from edges; fails if two edges share a vertex.
    pub fn from_edges(capacity: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut m = Matching::empty(capacity);
        for &(u, v) in edges {
            if u >= capacity || v >= capacity {
                return Err(Error::UnknownVertex(u.max(v)));
            }
            if u == v || m.mate[u] != NONE || m.mate[v] != NONE {
                return Err(Error::Validation(format!("edges of a matching share vertex ({u}, {v})")));
            }
            m.join(u, v);
        }
        Ok(m)
    }

    pub(crate) fn join(&mut self, u: Vertex, v: Vertex) {
        debug_assert!(self.mate[u] == NONE && self.mate[v] == NONE);
        self.mate[u] = v;
        self.mate[v] = u;
        self.size += 1;
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn mate(&self, v: Vertex) -> Option<Vertex> {
        self.mate.get(v).copied().filter(|&u| u != NONE)
    }

    pub fn is_covered(&self, v: Vertex) -> bool {
        self.mate(v).is_some()
    }

    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        self.mate(u) == Some(v)
    }

    /// Edges `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        (0..self.mate.len()).filter(|&u| self.mate[u] != NONE && u < self.mate[u]).map(|u| (u, self.mate[u])).collect()
    }

    /// Every edge exists in `g` and every live vertex of `g` is covered.
    pub fn is_perfect_in(&self, g: &Graph) -> bool {
        self.mate.len() >= g.capacity()
            && g.vertices().all(|v| self.mate(v).is_some_and(|u| g.has_edge(u, v)))
            && self.edges().iter().all(|&(u, v)| g.has_edge(u, v))
    }

    pub fn is_matching_in(&self, g: &Graph) -> bool {
        self.edges().iter().all(|&(u, v)| g.has_edge(u, v))
    }
}

/// Bipartite graph in index space: left `0..left`, right `0..right`.
#[derive(Debug, Clone)]
pub(crate) struct Bipartite {
    pub left: usize,
    pub right: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Bipartite {
    /// `adj` lists, for each left index, its right neighbors.
    pub fn from_lists(right: usize, adj: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for list in &adj {
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        Bipartite { left: adj.len(), right, offsets, targets }
    }

    fn adj(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Maximum matching as `(match_left, match_right)` with `usize::MAX` for free.
    pub fn hopcroft_karp(&self) -> (Vec<usize>, Vec<usize>) {
        let mut ml = vec![NONE; self.left];
        let mut mr = vec![NONE; self.right];
        let mut dist = vec![NONE; self.left];
        let mut it = vec![0usize; self.left];
        let mut queue = VecDeque::new();
        let mut stack = Vec::new();

        // greedy warm start
        for (u, slot) in ml.iter_mut().enumerate() {
            if let Some(&v) = self.adj(u).iter().find(|&&v| mr[v] == NONE) {
                *slot = v;
                mr[v] = u;
            }
        }

        loop {
            queue.clear();
            for u in 0..self.left {
                if ml[u] == NONE {
                    dist[u] = 0;
                    queue.push_back(u);
                } else {
                    dist[u] = NONE;
                }
            }
            let mut found = false;
            while let Some(u) = queue.pop_front() {
                for &v in self.adj(u) {
                    let w = mr[v];
                    if w == NONE {
                        found = true;
                    } else if dist[w] == NONE {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            if !found {
                break;
            }

            it.iter_mut().for_each(|i| *i = 0);
            for s in 0..self.left {
                if ml[s] != NONE {
                    continue;
                }
                stack.clear();
                stack.push(s);
                while let Some(&u) = stack.last() {
                    let adj = self.adj(u);
                    if it[u] >= adj.len() {
                        dist[u] = NONE;
                        stack.pop();
                        if let Some(&p) = stack.last() {
                            it[p] += 1;
                        }
                        continue;
                    }
                    let v = adj[it[u]];
                    let w = mr[v];
                    if w == NONE {
                        for &x in &stack {
                            let y = self.adj(x)[it[x]];
                            ml[x] = y;
                            mr[y] = x;
                        }
                        break;
                    } else if dist[w] != NONE && dist[w] == dist[u] + 1 {
                        stack.push(w);
                    } else {
                        it[u] += 1;
                    }
                }
            }
        }
        (ml, mr)
    }

    /// König cover from a matching: left vertices not reachable by
    /// alternating paths from free left vertices, plus reachable right ones.
    /// Fails if the matching admits an augmenting path.
    pub fn konig_cover(&self, ml: &[usize], mr: &[usize]) -> Result<(Vec<bool>, Vec<bool>)> {
        let mut reach_l = vec![false; self.left];
        let mut reach_r = vec![false; self.right];
        let mut queue: VecDeque<usize> = (0..self.left).filter(|&u| ml[u] == NONE).collect();
        for &u in &queue {
            reach_l[u] = true;
        }
        while let Some(u) = queue.pop_front() {
            for &v in self.adj(u) {
                if reach_r[v] || ml[u] == v {
                    continue;
                }
                reach_r[v] = true;
                let w = mr[v];
                if w == NONE {
                    return Err(Error::MatchingNotMaximum);
                }
                if !reach_l[w] {
                    reach_l[w] = true;
                    queue.push_back(w);
                }
            }
        }
        let cover_l = reach_l.iter().map(|&r| !r).collect();
        Ok((cover_l, reach_r))
    }
}

/// Left/right index tables for a graph bipartition given as `left[v]`.
struct SideIndex {
    lefts: Vec<Vertex>,
    rights: Vec<Vertex>,
    index: Vec<usize>,
}

fn bipartite_view(g: &Graph, left: &[bool]) -> Result<(Bipartite, SideIndex)> {
    if left.len() < g.capacity() {
        return Err(Error::Validation("bipartition does not cover every vertex".into()));
    }
    let mut index = vec![NONE; g.capacity()];
    let (mut lefts, mut rights) = (Vec::new(), Vec::new());
    for v in g.vertices() {
        let side = if left[v] { &mut lefts } else { &mut rights };
        index[v] = side.len();
        side.push(v);
    }
    for (u, v) in g.edges() {
        if left[u] == left[v] {
            return Err(Error::NotBipartite(u, v));
        }
    }
    let adj = lefts.iter().map(|&u| g.neighbors(u).iter().map(|&v| index[v]).collect()).collect();
    let bg = Bipartite::from_lists(rights.len(), adj);
    Ok((bg, SideIndex { lefts, rights, index }))
}

/// Maximum matching of a bipartite graph; `left[v]` marks one side.
pub fn max_matching_bipartite(g: &Graph, left: &[bool]) -> Result<Matching> {
    let (bg, sides) = bipartite_view(g, left)?;
    let (ml, _) = bg.hopcroft_karp();
    let mut m = Matching::empty(g.capacity());
    for (i, &j) in ml.iter().enumerate() {
        if j != NONE {
            m.join(sides.lefts[i], sides.rights[j]);
        }
    }
    Ok(m)
}

/// Minimum vertex cover of a bipartite graph from a maximum matching
/// (König's construction). Sorted ascending.
pub fn min_vc_bipartite(g: &Graph, left: &[bool], m: &Matching) -> Result<Vec<Vertex>> {
    let (bg, sides) = bipartite_view(g, left)?;
    if !m.is_matching_in(g) {
        return Err(Error::Validation("matching uses a non-edge".into()));
    }
    let mut ml = vec![NONE; bg.left];
    let mut mr = vec![NONE; bg.right];
    for (u, v) in m.edges() {
        let (l, r) = if left[u] { (u, v) } else { (v, u) };
        ml[sides.index[l]] = sides.index[r];
        mr[sides.index[r]] = sides.index[l];
    }
    let (cl, cr) = bg.konig_cover(&ml, &mr)?;
    let mut cover: Vec<Vertex> =
        sides.lefts.iter().zip(&cl).chain(sides.rights.iter().zip(&cr)).filter(|(_, &c)| c).map(|(&v, _)| v).collect();
    cover.sort_unstable();
    Ok(cover)
}

/// Proper 2-colouring of a bipartite graph by BFS; `None` if an odd cycle exists.
pub fn two_coloring(g: &Graph) -> Option<Vec<bool>> {
    let mut color = vec![None; g.capacity()];
    let mut queue = VecDeque::new();
    for s in g.vertices() {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(true);
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            let c = color[v].unwrap();
            for &u in g.neighbors(v) {
                match color[u] {
                    None => {
                        color[u] = Some(!c);
                        queue.push_back(u);
                    }
                    Some(cu) if cu == c => return None,
                    _ => {}
                }
            }
        }
    }
    Some(color.into_iter().map(|c| c.unwrap_or(false)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sides(n: usize, left: &[usize]) -> Vec<bool> {
        let mut s = vec![false; n];
        for &v in left {
            s[v] = true;
        }
        s
    }

    #[test]
    fn matching_examples() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let m = max_matching_bipartite(&k2, &sides(2, &[0])).unwrap();
        assert_eq!(m.edges(), vec![(0, 1)]);

        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(max_matching_bipartite(&star, &sides(4, &[0])).unwrap().len(), 1);

        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(max_matching_bipartite(&c4, &sides(4, &[0, 2])).unwrap().len(), 2);
    }

    #[test]
    fn edge_within_side_is_an_error() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(max_matching_bipartite(&k2, &sides(2, &[0, 1])), Err(Error::NotBipartite(0, 1)));
    }

    #[test]
    fn konig_cover_examples() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let s = sides(2, &[0]);
        let m = max_matching_bipartite(&k2, &s).unwrap();
        assert_eq!(min_vc_bipartite(&k2, &s, &m).unwrap().len(), 1);

        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let s = sides(4, &[0]);
        let m = max_matching_bipartite(&star, &s).unwrap();
        assert_eq!(min_vc_bipartite(&star, &s, &m).unwrap(), vec![0]);

        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let s = sides(4, &[0, 2]);
        let m = max_matching_bipartite(&c4, &s).unwrap();
        let cover = min_vc_bipartite(&c4, &s, &m).unwrap();
        assert_eq!(cover.len(), 2);
        assert!(c4.is_vertex_cover(&cover));
        assert!(cover == vec![0, 2] || cover == vec![1, 3]);
    }

    #[test]
    fn non_maximum_matching_detected() {
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = sides(4, &[0, 2]);
        let m = Matching::from_edges(4, &[(1, 2)]).unwrap();
        assert_eq!(min_vc_bipartite(&p4, &s, &m), Err(Error::MatchingNotMaximum));
    }

    #[test]
    fn long_path_does_not_overflow_the_stack() {
        let n = 200_001;
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        let color = two_coloring(&g).unwrap();
        let m = max_matching_bipartite(&g, &color).unwrap();
        assert_eq!(m.len(), n / 2);
    }
}
