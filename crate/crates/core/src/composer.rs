//! Independent set on P₂-split graphs, edge subdivision into that form, and
//! the weighted OR-composition of many such instances into one instance
//! with a small vertex cover.

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::instance::{Instance, Problem};

/// A graph with an independent set `y` such that every component of
/// `graph − y` is a single edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P2SplitInstance {
    pub graph: Graph,
    pub y: Vec<Vertex>,
    pub target: i64,
}

impl P2SplitInstance {
    pub fn new(graph: Graph, mut y: Vec<Vertex>, target: i64) -> Result<Self> {
        y.sort_unstable();
        y.dedup();
        if let Some(&v) = y.iter().find(|&&v| !graph.contains(v)) {
            return Err(Error::UnknownVertex(v));
        }
        if let Some((a, b)) = graph.independence_violation(&y) {
            return Err(Error::Validation(format!("split side is not independent: {} ~ {}", a + 1, b + 1)));
        }
        let inst = P2SplitInstance { graph, y, target };
        for c in inst.graph.delete_vertices(&inst.y)?.connected_components() {
            if c.len() != 2 {
                return Err(Error::Validation(format!("component of {} vertices off the split side", c.len())));
            }
        }
        Ok(inst)
    }

    /// Reads `y` as the vertices not marked in `inst.fvs`.
    pub fn from_instance(inst: &Instance) -> Result<Self> {
        if !inst.is_unweighted() {
            return Err(Error::Validation("P2-split instances are unweighted".into()));
        }
        let is = crate::nt::to_is(inst);
        let mut in_x = vec![false; is.graph.capacity()];
        for &v in &is.fvs {
            in_x[v] = true;
        }
        let y = is.graph.vertices().filter(|&v| !in_x[v]).collect();
        Self::new(is.graph, y, is.target)
    }

    /// An independent set instance whose feedback set is the P₂ side.
    pub fn to_instance(&self) -> Instance {
        let mut in_y = vec![false; self.graph.capacity()];
        for &v in &self.y {
            in_y[v] = true;
        }
        let x = self.graph.vertices().filter(|&v| !in_y[v]).collect();
        Instance::new(self.graph.clone(), x, self.target, Problem::IndependentSet, None)
            .expect("split side is independent")
    }

    /// The P₂ edges `(a_j, b_j)`, ordered by their lower endpoint, with
    /// `a_j` the lower id.
    pub fn p2_edges(&self) -> Vec<(Vertex, Vertex)> {
        let rest = self.graph.delete_vertices(&self.y).expect("y is valid");
        let mut out: Vec<_> = rest.edges().collect();
        out.sort_unstable();
        out
    }
}

/// Replaces every edge `u–v` by a path `u–p1–p2–v` through two new
/// vertices; the target rises by the number of edges.
pub fn subdivide_to_p2split(g: &Graph, k: i64) -> P2SplitInstance {
    let edges: Vec<_> = g.edges().collect();
    let base = g.capacity();
    let mut new_edges = Vec::with_capacity(3 * edges.len());
    for (i, &(u, v)) in edges.iter().enumerate() {
        let (p1, p2) = (base + 2 * i, base + 2 * i + 1);
        new_edges.extend([(u, p1), (p1, p2), (p2, v)]);
    }
    let mut graph = Graph::from_edges(base + 2 * edges.len(), &new_edges).expect("subdivision is simple");
    for v in 0..base {
        if !g.contains(v) {
            graph.remove_vertex(v).expect("isolated id");
        }
    }
    P2SplitInstance { graph, y: g.vertices().collect(), target: k + edges.len() as i64 }
}

/// A weighted independent set instance acting as the OR of its inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedComposite {
    /// Independent set form; `fvs` is the declared vertex cover.
    pub instance: Instance,
    /// Number of inputs before padding.
    pub inputs: usize,
    /// Input index behind each padded slot.
    pub source: Vec<usize>,
    /// Composite ids of each slot's copy of `y`, in `y` order.
    pub copies: Vec<Vec<Vertex>>,
    /// The split side of each slot's input, in original ids.
    pub y_sets: Vec<Vec<Vertex>>,
    /// Each slot's P₂ edges in original ids.
    pub p2: Vec<Vec<(Vertex, Vertex)>>,
    /// Shared `(a′_j, b′_j)` vertices.
    pub primed: Vec<(Vertex, Vertex)>,
    /// `(s_j^0, s_j^1)` for each bit `j`, least significant first. Slot `i`
    /// is adjacent to `s_j^{bit j of i}`.
    pub selectors: Vec<(Vertex, Vertex)>,
    pub selector_weight: u64,
    /// Target shared by all inputs.
    pub base_target: i64,
}

impl WeightedComposite {
    pub fn slots(&self) -> usize {
        self.copies.len()
    }

    pub fn bits(&self) -> usize {
        self.selectors.len()
    }
}

/// Builds the composite; inputs must agree on vertex count, split side
/// size and target.
pub fn cross_compose(instances: &[P2SplitInstance]) -> Result<WeightedComposite> {
    let first = instances.first().ok_or_else(|| Error::Composition("no instances to compose".into()))?;
    let n = first.graph.num_vertices();
    let r = first.y.len();
    let k = first.target;
    for (i, inst) in instances.iter().enumerate() {
        if inst.graph.num_vertices() != n || inst.y.len() != r || inst.target != k {
            return Err(Error::Composition(format!(
                "instance {} has (n, |Y|, k) = ({}, {}, {}) but instance 1 has ({n}, {r}, {k})",
                i + 1,
                inst.graph.num_vertices(),
                inst.y.len(),
                inst.target
            )));
        }
    }
    let q = (n - r) / 2;
    let t = instances.len().next_power_of_two().max(2);
    let bits = t.trailing_zeros() as usize;
    let source: Vec<usize> = (0..t).map(|i| i.min(instances.len() - 1)).collect();
    let selector_weight = (t * (n + 1)) as u64;

    let primed_base = t * r;
    let sel_base = primed_base + 2 * q;
    let total = sel_base + 2 * bits;
    let primed: Vec<(Vertex, Vertex)> = (0..q).map(|j| (primed_base + 2 * j, primed_base + 2 * j + 1)).collect();
    let selectors: Vec<(Vertex, Vertex)> = (0..bits).map(|j| (sel_base + 2 * j, sel_base + 2 * j + 1)).collect();

    let mut edges = Vec::new();
    edges.extend(primed.iter().copied());
    edges.extend(selectors.iter().copied());
    let mut copies = Vec::with_capacity(t);
    let mut y_sets = Vec::with_capacity(t);
    let mut p2 = Vec::with_capacity(t);
    for (slot, &src) in source.iter().enumerate() {
        let inst = &instances[src];
        let pairs = inst.p2_edges();
        let ids: Vec<Vertex> = (0..r).map(|i| slot * r + i).collect();
        for (&v, &c) in inst.y.iter().zip(&ids) {
            for (j, &(a, b)) in pairs.iter().enumerate() {
                if inst.graph.has_edge(v, a) {
                    edges.push((c, primed[j].0));
                }
                if inst.graph.has_edge(v, b) {
                    edges.push((c, primed[j].1));
                }
            }
            for (j, &(s0, s1)) in selectors.iter().enumerate() {
                edges.push((c, if (slot >> j) & 1 == 1 { s1 } else { s0 }));
            }
        }
        copies.push(ids);
        y_sets.push(inst.y.clone());
        p2.push(pairs);
    }
    let graph = Graph::from_edges(total, &edges)?;
    let mut weights = vec![1u64; total];
    for &(s0, s1) in &selectors {
        weights[s0] = selector_weight;
        weights[s1] = selector_weight;
    }
    let cover: Vec<Vertex> = (primed_base..total).collect();
    let target = k + (selector_weight * bits as u64) as i64;
    let instance = Instance::new(graph, cover, target, Problem::IndependentSet, Some(weights))?;
    Ok(WeightedComposite {
        instance,
        inputs: instances.len(),
        source,
        copies,
        y_sets,
        p2,
        primed,
        selectors,
        selector_weight,
        base_target: k,
    })
}

/// Reads the slot picked by an independent set of weight at least the
/// composite target. Returns the input index and the corresponding
/// independent set of that input, in its own ids.
pub fn decode_witness(c: &WeightedComposite, set: &[Vertex]) -> Result<(usize, Vec<Vertex>)> {
    let g = &c.instance.graph;
    if let Some(&v) = set.iter().find(|&&v| !g.contains(v)) {
        return Err(Error::UnknownVertex(v));
    }
    if let Some((a, b)) = g.independence_violation(set) {
        return Err(Error::Infeasible(format!("vertices {} and {} are adjacent", a + 1, b + 1)));
    }
    let weight = c.instance.set_weight(set);
    if (weight as i64) < c.instance.target {
        return Err(Error::Infeasible(format!("weight {weight} is below the target {}", c.instance.target)));
    }
    let mut inside = vec![false; g.capacity()];
    for &v in set {
        inside[v] = true;
    }
    let mut slot = 0;
    for (j, &(s0, s1)) in c.selectors.iter().enumerate() {
        match (inside[s0], inside[s1]) {
            (true, false) => slot |= 1 << j,
            (false, true) => {}
            _ => return Err(Error::Composition(format!("selector pair {} is not used exactly once", j + 1))),
        }
    }
    let mut out: Vec<Vertex> = Vec::new();
    for (&cv, &v) in c.copies[slot].iter().zip(&c.y_sets[slot]) {
        if inside[cv] {
            out.push(v);
        }
    }
    for (&(pa, pb), &(a, b)) in c.primed.iter().zip(&c.p2[slot]) {
        if inside[pa] {
            out.push(a);
        }
        if inside[pb] {
            out.push(b);
        }
    }
    out.sort_unstable();
    if (out.len() as i64) < c.base_target {
        return Err(Error::Composition("decoded set is smaller than the input target".into()));
    }
    Ok((c.source[slot], out))
}
