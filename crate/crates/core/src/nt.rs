//! Half-integral LP decomposition and the cleaning step that leaves a
//! forest with a perfect matching.

use crate::error::{Error, Result};
use crate::forest::max_matching_forest;
use crate::graph::{Graph, Vertex};
use crate::instance::{Instance, Problem};
use crate::matching::Bipartite;

/// Partition of the vertices by LP value: `c0` (value 1), `v0` (value ½)
/// and `j` (value 0). Each list is sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NtDecomposition {
    pub c0: Vec<Vertex>,
    pub v0: Vec<Vertex>,
    pub j: Vec<Vertex>,
}

/// LP values doubled (0, 1 or 2) for the vertices of `set`, read off a
/// König cover of the bipartite double cover of `g[set]`.
fn doubled_lp(g: &Graph, set: &[Vertex]) -> Result<Vec<u8>> {
    let mut index = vec![usize::MAX; g.capacity()];
    for (i, &v) in set.iter().enumerate() {
        index[v] = i;
    }
    let adj: Vec<Vec<usize>> =
        set.iter().map(|&v| g.neighbors(v).iter().map(|&u| index[u]).filter(|&i| i != usize::MAX).collect()).collect();
    let bip = Bipartite::from_lists(set.len(), adj);
    let (ml, mr) = bip.hopcroft_karp();
    let (cl, cr) = bip.konig_cover(&ml, &mr)?;
    Ok((0..set.len()).map(|i| cl[i] as u8 + cr[i] as u8).collect())
}

/// Splits off integral LP vertices repeatedly until the residual optimum
/// is all-halves.
pub fn nt_decompose(g: &Graph) -> Result<NtDecomposition> {
    let mut out = NtDecomposition::default();
    let mut rest: Vec<Vertex> = g.vertices().collect();
    loop {
        let lp = doubled_lp(g, &rest)?;
        if lp.iter().all(|&x| x == 1) {
            break;
        }
        let mut next = Vec::with_capacity(rest.len());
        for (i, &v) in rest.iter().enumerate() {
            match lp[i] {
                0 => out.j.push(v),
                2 => out.c0.push(v),
                _ => next.push(v),
            }
        }
        rest = next;
    }
    out.v0 = rest;
    out.c0.sort_unstable();
    out.j.sort_unstable();
    Ok(out)
}

/// What cleaning removed or moved, for lifting.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CleanRecord {
    pub c0: Vec<Vertex>,
    pub j: Vec<Vertex>,
    /// Forest vertices left unmatched, moved into the feedback set.
    pub moved: Vec<Vertex>,
}

impl CleanRecord {
    pub fn offset(&self) -> usize {
        self.j.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c0.is_empty() && self.j.is_empty() && self.moved.is_empty()
    }
}

/// Restricts to the half-integral core and moves unmatched forest vertices
/// into X, so the remaining forest has a perfect matching.
pub fn clean(inst: &Instance) -> Result<(Instance, CleanRecord)> {
    if inst.problem != Problem::IndependentSet {
        return Err(Error::WrongProblem("independent set"));
    }
    if !inst.is_unweighted() {
        return Err(Error::Validation("cleaning requires unit weights".into()));
    }
    let nt = nt_decompose(&inst.graph)?;
    let core = inst.graph.induced_subgraph(&nt.v0)?;
    let mut in_core = vec![false; core.capacity()];
    for &v in &nt.v0 {
        in_core[v] = true;
    }
    let x_hat: Vec<Vertex> = inst.fvs.iter().copied().filter(|&v| in_core[v]).collect();
    let forest = core.delete_vertices(&x_hat)?;
    let m = max_matching_forest(&forest)?;
    let moved: Vec<Vertex> = forest.vertices().filter(|&v| !m.is_covered(v)).collect();
    if moved.len() > x_hat.len() {
        return Err(Error::Invariant(format!(
            "{} unmatched forest vertices but only {} feedback vertices survive",
            moved.len(),
            x_hat.len()
        )));
    }
    let mut x = x_hat;
    x.extend_from_slice(&moved);
    let target = inst.target - nt.j.len() as i64;
    let out = Instance::new(core, x, target, Problem::IndependentSet, None)?;
    Ok((out, CleanRecord { c0: nt.c0, j: nt.j, moved }))
}

/// True iff `inst.graph − inst.fvs` has a perfect matching.
pub fn is_clean(inst: &Instance) -> Result<bool> {
    let forest = inst.graph.delete_vertices(&inst.fvs)?;
    Ok(crate::forest::perfect_matching_forest(&forest)?.is_some())
}

fn complement_target(inst: &Instance) -> i64 {
    inst.total_weight() as i64 - inst.target
}

/// Vertex cover to independent set: `k ↦ w(V) − k`.
pub fn to_is(inst: &Instance) -> Instance {
    match inst.problem {
        Problem::IndependentSet => inst.clone(),
        Problem::VertexCover => {
            Instance { target: complement_target(inst), problem: Problem::IndependentSet, ..inst.clone() }
        }
    }
}

/// Independent set to vertex cover: `k ↦ w(V) − k`.
pub fn to_vc(inst: &Instance) -> Instance {
    match inst.problem {
        Problem::VertexCover => inst.clone(),
        Problem::IndependentSet => {
            Instance { target: complement_target(inst), problem: Problem::VertexCover, ..inst.clone() }
        }
    }
}

/// The empty independent set instance with target 0.
pub fn trivial_yes() -> Instance {
    Instance { graph: Graph::new(0), fvs: Vec::new(), target: 0, problem: Problem::IndependentSet, weights: None }
}

/// A single edge asking for two independent vertices.
pub fn trivial_no() -> Instance {
    let graph = Graph::from_edges(2, &[(0, 1)]).expect("K2 is simple");
    Instance { graph, fvs: Vec::new(), target: 2, problem: Problem::IndependentSet, weights: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_instance(g: Graph, x: Vec<Vertex>, k: i64) -> Instance {
        Instance::new(g, x, k, Problem::IndependentSet, None).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let nt = nt_decompose(&Graph::new(3)).unwrap();
        assert_eq!(nt, NtDecomposition { c0: vec![], v0: vec![], j: vec![0, 1, 2] });
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(nt_decompose(&k2).unwrap(), NtDecomposition { c0: vec![], v0: vec![0, 1], j: vec![] });
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(nt_decompose(&star).unwrap(), NtDecomposition { c0: vec![0], v0: vec![], j: vec![1, 2, 3] });
    }

    #[test]
    fn j_is_only_adjacent_to_c0() {
        // triangle with a pendant path
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]).unwrap();
        let nt = nt_decompose(&g).unwrap();
        let mut c0 = [false; 5];
        for &v in &nt.c0 {
            c0[v] = true;
        }
        for &v in &nt.j {
            assert!(g.neighbors(v).iter().all(|&u| c0[u]));
        }
        assert_eq!(nt.c0.len() + nt.v0.len() + nt.j.len(), 5);
    }

    #[test]
    fn clean_fixpoint() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let inst = is_instance(g, vec![0], 2);
        let (out, rec) = clean(&inst).unwrap();
        assert!(rec.is_empty());
        assert_eq!(out, inst);
    }

    #[test]
    fn clean_absorbs_p3() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let (out, rec) = clean(&is_instance(g, vec![], 2)).unwrap();
        assert_eq!(rec.j, vec![0, 2]);
        assert_eq!(rec.c0, vec![1]);
        assert_eq!(out.graph.num_vertices(), 0);
        assert_eq!(out.target, 0);
    }

    #[test]
    fn clean_rejects_vc() {
        let inst = Instance::new(Graph::new(1), vec![], 0, Problem::VertexCover, None).unwrap();
        assert_eq!(clean(&inst).unwrap_err(), Error::WrongProblem("independent set"));
    }

    #[test]
    fn conversions() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let vc = Instance::new(k2.clone(), vec![], 1, Problem::VertexCover, None).unwrap();
        assert_eq!(to_is(&vc).target, 1);
        assert_eq!(to_vc(&to_is(&vc)), vc);
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let vc = Instance::new(tri, vec![0], 2, Problem::VertexCover, None).unwrap();
        assert_eq!(to_is(&vc).target, 1);
        let w = Instance::new(k2, vec![], 3, Problem::VertexCover, Some(vec![3, 4])).unwrap();
        assert_eq!(to_is(&w).target, 4);
        assert_eq!(to_vc(&to_is(&w)), w);
    }
}
