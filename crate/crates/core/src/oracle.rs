//! Exact reference solvers for small graphs.

use crate::error::{Error, Result};
use crate::forest::ForestDp;
use crate::fvs::validate_fvs;
use crate::graph::{Graph, Vertex};

pub const DEFAULT_ALPHA_CAP: usize = 30;
pub const DEFAULT_FVS_CAP: usize = 12;
pub const DEFAULT_FPT_CAP: usize = 30;

/// Compact bitmask view of a graph with at most 128 vertices.
struct Masks {
    ids: Vec<Vertex>,
    nbr: Vec<u128>,
}

impl Masks {
    fn new(g: &Graph, cap: usize) -> Result<Self> {
        let n = g.num_vertices();
        if n > cap.min(128) {
            return Err(Error::CapExceeded { n, cap: cap.min(128) });
        }
        let ids: Vec<Vertex> = g.vertices().collect();
        let mut index = vec![usize::MAX; g.capacity()];
        for (i, &v) in ids.iter().enumerate() {
            index[v] = i;
        }
        let nbr = ids.iter().map(|&v| g.neighbors(v).iter().fold(0u128, |m, &u| m | 1 << index[u])).collect();
        Ok(Masks { ids, nbr })
    }

    fn full(&self) -> u128 {
        if self.ids.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.ids.len()) - 1
        }
    }

    fn deg(&self, v: usize, mask: u128) -> u32 {
        (self.nbr[v] & mask).count_ones()
    }

    fn component(&self, mask: u128) -> u128 {
        let start = mask & mask.wrapping_neg();
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.nbr[v] & mask & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        comp
    }

    fn decode(&self, set: u128) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = bits(set).map(|i| self.ids[i]).collect();
        out.sort_unstable();
        out
    }

    /// Maximum independent set of `mask`: degree ≤ 1 vertices are taken,
    /// all-degree-2 components are cycles where any vertex may be taken,
    /// otherwise branch on a maximum-degree vertex.
    fn mis(&self, mask: u128) -> u128 {
        if mask == 0 {
            return 0;
        }
        let comp = self.component(mask);
        if comp != mask {
            return self.mis(comp) | self.mis(mask & !comp);
        }
        let mut best_v = usize::MAX;
        let mut best_d = 0;
        for v in bits(mask) {
            let d = self.deg(v, mask);
            if d <= 1 {
                return 1 << v | self.mis(mask & !(1 << v) & !self.nbr[v]);
            }
            if d > best_d {
                best_d = d;
                best_v = v;
            }
        }
        let v = best_v;
        let take = 1 << v | self.mis(mask & !(1 << v) & !self.nbr[v]);
        if best_d <= 2 {
            return take;
        }
        let skip = self.mis(mask & !(1 << v));
        if skip.count_ones() > take.count_ones() {
            skip
        } else {
            take
        }
    }

    fn mis_weighted(&self, mask: u128, w: &[u64]) -> (u64, u128) {
        if mask == 0 {
            return (0, 0);
        }
        let comp = self.component(mask);
        if comp != mask {
            let (a, sa) = self.mis_weighted(comp, w);
            let (b, sb) = self.mis_weighted(mask & !comp, w);
            return (a + b, sa | sb);
        }
        let mut best_v = usize::MAX;
        let mut best_d = 0;
        for v in bits(mask) {
            let d = self.deg(v, mask);
            let dominated = d == 0 || (d == 1 && w[v] >= w[(self.nbr[v] & mask).trailing_zeros() as usize]);
            if dominated {
                let (r, s) = self.mis_weighted(mask & !(1 << v) & !self.nbr[v], w);
                return (r + w[v], s | 1 << v);
            }
            if d > best_d {
                best_d = d;
                best_v = v;
            }
        }
        let v = best_v;
        let (t, st) = self.mis_weighted(mask & !(1 << v) & !self.nbr[v], w);
        let (s, ss) = self.mis_weighted(mask & !(1 << v), w);
        if s > t + w[v] {
            (s, ss)
        } else {
            (t + w[v], st | 1 << v)
        }
    }
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

pub fn exact_alpha(g: &Graph) -> Result<usize> {
    exact_alpha_capped(g, DEFAULT_ALPHA_CAP)
}

pub fn exact_alpha_capped(g: &Graph, cap: usize) -> Result<usize> {
    Ok(exact_mis_capped(g, cap)?.len())
}

/// A maximum independent set, sorted.
pub fn exact_mis(g: &Graph) -> Result<Vec<Vertex>> {
    exact_mis_capped(g, DEFAULT_ALPHA_CAP)
}

pub fn exact_mis_capped(g: &Graph, cap: usize) -> Result<Vec<Vertex>> {
    let m = Masks::new(g, cap)?;
    Ok(m.decode(m.mis(m.full())))
}

/// Maximum weight of an independent set; `w` is indexed by vertex id.
pub fn exact_alpha_weighted(g: &Graph, w: &[u64]) -> Result<u64> {
    Ok(exact_mis_weighted(g, w)?.0)
}

pub fn exact_mis_weighted(g: &Graph, w: &[u64]) -> Result<(u64, Vec<Vertex>)> {
    exact_mis_weighted_capped(g, w, DEFAULT_ALPHA_CAP)
}

pub fn exact_mis_weighted_capped(g: &Graph, w: &[u64], cap: usize) -> Result<(u64, Vec<Vertex>)> {
    let m = Masks::new(g, cap)?;
    let local: Vec<u64> = m.ids.iter().map(|&v| w[v]).collect();
    let (value, set) = m.mis_weighted(m.full(), &local);
    Ok((value, m.decode(set)))
}

/// α by enumerating independent subsets of `x` and solving the forest
/// remainder exactly.
pub fn fpt_alpha(g: &Graph, x: &[Vertex]) -> Result<usize> {
    Ok(fpt_mis(g, x)?.len())
}

pub fn fpt_mis(g: &Graph, x: &[Vertex]) -> Result<Vec<Vertex>> {
    fpt_mis_capped(g, x, DEFAULT_FPT_CAP)
}

pub fn fpt_mis_capped(g: &Graph, x: &[Vertex], cap: usize) -> Result<Vec<Vertex>> {
    let mut xs = x.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let cap = cap.min(64);
    if xs.len() > cap {
        return Err(Error::CapExceeded { n: xs.len(), cap });
    }
    if let Some(&v) = xs.iter().find(|&&v| !g.contains(v)) {
        return Err(Error::UnknownVertex(v));
    }
    let mut in_x = vec![false; g.capacity()];
    for &v in &xs {
        in_x[v] = true;
    }
    let forest_vs: Vec<Vertex> = g.vertices().filter(|&v| !in_x[v]).collect();
    let forest = g.induced_subgraph(&forest_vs)?;
    let dp = ForestDp::of_graph(&forest)?;

    let conflicts: Vec<u64> = xs
        .iter()
        .map(|&u| xs.iter().enumerate().filter(|&(_, &v)| g.has_edge(u, v)).fold(0u64, |m, (j, _)| m | 1 << j))
        .collect();
    let mut search =
        FptSearch { g, xs: &xs, conflicts, dp, hits: vec![0; g.capacity()], chosen: Vec::new(), best: None };
    search.run(0, 0);
    Ok(search.best.map(|b| b.1).unwrap_or_default())
}

struct FptSearch<'a> {
    g: &'a Graph,
    xs: &'a [Vertex],
    conflicts: Vec<u64>,
    dp: ForestDp,
    hits: Vec<u32>,
    chosen: Vec<Vertex>,
    best: Option<(usize, Vec<Vertex>)>,
}

impl FptSearch<'_> {
    fn run(&mut self, from: usize, used: u64) {
        let hits = &self.hits;
        let value = self.chosen.len() + self.dp.alpha(|v| hits[v] > 0);
        if self.best.as_ref().is_none_or(|(b, _)| value > *b) {
            let mut set = self.chosen.clone();
            set.extend(self.dp.mis(|v| hits[v] > 0));
            set.sort_unstable();
            self.best = Some((value, set));
        }
        for j in from..self.xs.len() {
            if self.conflicts[j] & used != 0 {
                continue;
            }
            let v = self.xs[j];
            for &u in self.g.neighbors(v) {
                self.hits[u] += 1;
            }
            self.chosen.push(v);
            self.run(j + 1, used | 1 << j);
            self.chosen.pop();
            for &u in self.g.neighbors(v) {
                self.hits[u] -= 1;
            }
        }
    }
}

/// A minimum feedback vertex set, lexicographically smallest among minima.
pub fn exact_fvs(g: &Graph) -> Result<Vec<Vertex>> {
    exact_fvs_capped(g, DEFAULT_FVS_CAP)
}

pub fn exact_fvs_capped(g: &Graph, cap: usize) -> Result<Vec<Vertex>> {
    let n = g.num_vertices();
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let vs: Vec<Vertex> = g.vertices().collect();
    for size in 0..=n {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let set: Vec<Vertex> = idx.iter().map(|&i| vs[i]).collect();
            if validate_fvs(g, &set) {
                return Ok(set);
            }
            // next combination in lexicographic order
            let Some(pos) = (0..size).rev().find(|&p| idx[p] < n - size + p) else { break };
            idx[pos] += 1;
            for p in pos + 1..size {
                idx[p] = idx[p - 1] + 1;
            }
        }
    }
    unreachable!("deleting every vertex leaves a forest")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_alpha(g: &Graph) -> usize {
        let vs: Vec<_> = g.vertices().collect();
        (0u32..1 << vs.len())
            .filter_map(|mask| {
                let set: Vec<_> = (0..vs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| vs[i]).collect();
                g.is_independent(&set).then_some(set.len())
            })
            .max()
            .unwrap_or(0)
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, &edges).unwrap()
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(exact_alpha(&Graph::from_edges(2, &[(0, 1)]).unwrap()).unwrap(), 1);
        assert_eq!(exact_alpha(&cycle(5)).unwrap(), 2);
        let p = petersen();
        assert_eq!(exact_alpha(&p).unwrap(), brute_alpha(&p));
        assert_eq!(exact_alpha(&p).unwrap(), 4);
        let mis = exact_mis(&p).unwrap();
        assert!(p.is_independent(&mis));
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(exact_alpha_capped(&Graph::new(5), 4), Err(Error::CapExceeded { n: 5, cap: 4 }));
        assert_eq!(exact_fvs(&Graph::new(13)), Err(Error::CapExceeded { n: 13, cap: 12 }));
    }

    #[test]
    fn weighted_examples() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(exact_alpha_weighted(&k2, &[3, 4]).unwrap(), 4);
        assert_eq!(exact_alpha_weighted(&Graph::new(6), &[1; 6]).unwrap(), 6);
        let p = petersen();
        assert_eq!(exact_alpha_weighted(&p, &[1; 10]).unwrap(), 4);
    }

    #[test]
    fn fpt_examples() {
        let path = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(fpt_alpha(&path, &[]).unwrap(), 3);
        let tri = cycle(3);
        assert_eq!(fpt_alpha(&tri, &[0]).unwrap(), 1);
        assert_eq!(fpt_alpha(&tri, &[]), Err(Error::NotAForest));
        let p = petersen();
        let x = exact_fvs(&p).unwrap();
        let s = fpt_mis(&p, &x).unwrap();
        assert!(p.is_independent(&s));
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn fvs_examples() {
        assert!(exact_fvs(&Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()).unwrap().is_empty());
        assert_eq!(exact_fvs(&cycle(3)).unwrap(), vec![0]);
        let edges: Vec<_> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
        assert_eq!(exact_fvs(&Graph::from_edges(4, &edges).unwrap()).unwrap(), vec![0, 1]);
        assert_eq!(exact_fvs(&petersen()).unwrap().len(), 3);
    }
}
