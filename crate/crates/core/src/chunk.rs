//! Chunks of the feedback vertex set and X-blockability of forest pairs.

use std::fmt;

use crate::graph::{Graph, Vertex};

/// An independent subset of X with one or two members, stored canonically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChunkKey {
    a: Vertex,
    b: Option<Vertex>,
}

impl ChunkKey {
    pub fn single(v: Vertex) -> Self {
        ChunkKey { a: v, b: None }
    }

    pub fn pair(u: Vertex, v: Vertex) -> Self {
        assert_ne!(u, v, "a pair chunk needs two distinct vertices");
        ChunkKey { a: u.min(v), b: Some(u.max(v)) }
    }

    pub fn first(&self) -> Vertex {
        self.a
    }

    pub fn second(&self) -> Option<Vertex> {
        self.b
    }

    pub fn len(&self) -> usize {
        1 + self.b.is_some() as usize
    }

    /// Always false; a chunk has at least one member.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_pair(&self) -> bool {
        self.b.is_some()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.a == v || self.b == Some(v)
    }

    pub fn members(&self) -> Vec<Vertex> {
        std::iter::once(self.a).chain(self.b).collect()
    }
}

impl fmt::Display for ChunkKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.b {
            None => write!(f, "{{{}}}", self.a + 1),
            Some(b) => write!(f, "{{{},{}}}", self.a + 1, b + 1),
        }
    }
}

/// Singletons of `x` followed by its non-adjacent pairs, each group in
/// ascending order.
pub fn enumerate_chunks(g: &Graph, x: &[Vertex]) -> Vec<ChunkKey> {
    let mut xs = x.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let mut out: Vec<ChunkKey> = xs.iter().map(|&v| ChunkKey::single(v)).collect();
    for (i, &u) in xs.iter().enumerate() {
        for &v in &xs[i + 1..] {
            if !g.has_edge(u, v) {
                out.push(ChunkKey::pair(u, v));
            }
        }
    }
    out
}

/// Whether some chunk of `x` sees both `a` and `b`.
///
/// Equivalently: an X-neighbour of `a` coincides with, or is non-adjacent
/// to, an X-neighbour of `b`.
pub fn is_blockable(g: &Graph, x: &[Vertex], a: Vertex, b: Vertex) -> bool {
    let mut in_x = vec![false; g.capacity()];
    for &v in x {
        in_x[v] = true;
    }
    let na: Vec<Vertex> = g.neighbors(a).iter().copied().filter(|&v| in_x[v]).collect();
    let nb: Vec<Vertex> = g.neighbors(b).iter().copied().filter(|&v| in_x[v]).collect();
    na.iter().any(|&u| nb.iter().any(|&v| u == v || !g.has_edge(u, v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunk_examples() {
        let g = Graph::new(1);
        assert_eq!(enumerate_chunks(&g, &[0]), vec![ChunkKey::single(0)]);
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(enumerate_chunks(&g, &[0, 1]), vec![ChunkKey::single(0), ChunkKey::single(1)]);
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(
            enumerate_chunks(&g, &[2, 0, 1]),
            vec![
                ChunkKey::single(0),
                ChunkKey::single(1),
                ChunkKey::single(2),
                ChunkKey::pair(0, 2),
                ChunkKey::pair(1, 2)
            ]
        );
    }

    #[test]
    fn key_is_canonical() {
        assert_eq!(ChunkKey::pair(5, 2), ChunkKey::pair(2, 5));
        assert_eq!(ChunkKey::pair(5, 2).members(), vec![2, 5]);
        assert!(ChunkKey::single(3) < ChunkKey::pair(3, 4));
    }

    #[test]
    fn blockable_examples() {
        // forest edge 0-1, X = {2, 3}
        let shared = Graph::from_edges(4, &[(0, 1), (2, 0), (2, 1)]).unwrap();
        assert!(is_blockable(&shared, &[2, 3], 0, 1));
        let none = Graph::from_edges(4, &[(0, 1), (2, 1)]).unwrap();
        assert!(!is_blockable(&none, &[2, 3], 0, 1));
        let apart = Graph::from_edges(4, &[(0, 1), (2, 0), (3, 1)]).unwrap();
        assert!(is_blockable(&apart, &[2, 3], 0, 1));
        let joined = Graph::from_edges(4, &[(0, 1), (2, 0), (3, 1), (2, 3)]).unwrap();
        assert!(!is_blockable(&joined, &[2, 3], 0, 1));
    }
}
