//! Packing vertex-disjoint conflict structures into trees with a perfect
//! matching, by growing a subtree one local augmentation at a time.
//!
//! Every augmentation is logged with the change in open branches (`O`),
//! structures (`C`), live spikes (`S`) and subtree vertices (`N`), and must
//! satisfy `8ΔO + 14ΔC + ΔS ≥ ΔN`. Summed over a full run this gives at
//! least one structure per 14 vertices.

use std::collections::BTreeSet;
use std::fmt;

use crate::chunk::ChunkKey;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::matching::Matching;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConflictStructure {
    /// A matched edge whose endpoints have degree at most two.
    A(Vertex, Vertex),
    /// A path leaf, degree 3, degree 3, leaf.
    B(Vertex, Vertex, Vertex, Vertex),
}

impl ConflictStructure {
    pub fn vertices(&self) -> Vec<Vertex> {
        match *self {
            ConflictStructure::A(a, b) => vec![a, b],
            ConflictStructure::B(a, b, c, d) => vec![a, b, c, d],
        }
    }

    /// Pairs whose joint coverage by a chunk counts as a hit.
    fn hit_pairs(&self) -> Vec<(Vertex, Vertex)> {
        match *self {
            ConflictStructure::A(a, b) => vec![(a, b)],
            ConflictStructure::B(a, b, c, d) => vec![(a, b), (c, d), (a, d)],
        }
    }

    pub fn is_valid(&self, f: &Graph, m: &Matching) -> bool {
        let has = |v: Vertex| f.contains(v);
        match *self {
            ConflictStructure::A(a, b) => {
                has(a) && has(b) && m.contains(a, b) && f.has_edge(a, b) && f.degree(a) <= 2 && f.degree(b) <= 2
            }
            ConflictStructure::B(a, b, c, d) => {
                [a, b, c, d].iter().all(|&v| has(v))
                    && f.has_edge(a, b)
                    && f.has_edge(b, c)
                    && f.has_edge(c, d)
                    && f.degree(a) == 1
                    && f.degree(d) == 1
                    && f.degree(b) == 3
                    && f.degree(c) == 3
            }
        }
    }
}

impl fmt::Display for ConflictStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConflictStructure::A(a, b) => write!(f, "A {} {}", a + 1, b + 1),
            ConflictStructure::B(a, b, c, d) => write!(f, "B {} {} {} {}", a + 1, b + 1, c + 1, d + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerStep {
    /// Which augmentation was applied, 1 to 5.
    pub op: u8,
    pub d_open: i64,
    pub d_structures: i64,
    pub d_spikes: i64,
    pub d_vertices: i64,
    /// Vertices newly added to the subtree.
    pub added: Vec<Vertex>,
}

impl LedgerStep {
    pub fn holds(&self) -> bool {
        8 * self.d_open + 14 * self.d_structures + self.d_spikes >= self.d_vertices
    }
}

impl fmt::Display for LedgerStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {} {}",
            self.op,
            self.d_open,
            self.d_structures,
            self.d_spikes,
            self.d_vertices,
            self.added.len()
        )?;
        for v in &self.added {
            write!(f, " {}", v + 1)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PackingLedger {
    pub steps: Vec<LedgerStep>,
}

impl PackingLedger {
    pub fn holds(&self) -> bool {
        self.steps.iter().all(LedgerStep::holds)
    }
}

fn is_leaf(t: &Graph, v: Vertex) -> bool {
    t.degree(v) == 1
}

fn leaf_neighbors(t: &Graph, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
    t.neighbors(v).iter().copied().filter(move |&u| is_leaf(t, u))
}

fn is_spike(t: &Graph, v: Vertex) -> bool {
    t.degree(v) == 3 && leaf_neighbors(t, v).count() == 1
}

/// Vertices of degree three with exactly one leaf neighbour.
pub fn find_spikes(t: &Graph) -> Vec<Vertex> {
    t.vertices().filter(|&v| is_spike(t, v)).collect()
}

struct Grower<'a> {
    t: &'a Graph,
    m: &'a Matching,
    inside: Vec<bool>,
    used: Vec<bool>,
    open: BTreeSet<Vertex>,
    live: usize,
    size: usize,
    structures: Vec<ConflictStructure>,
    ledger: PackingLedger,
}

fn violation(msg: impl Into<String>) -> Error {
    Error::Invariant(format!("packing: {}", msg.into()))
}

impl<'a> Grower<'a> {
    fn new(t: &'a Graph, m: &'a Matching) -> Self {
        let n = t.capacity();
        Grower {
            t,
            m,
            inside: vec![false; n],
            used: vec![false; n],
            open: BTreeSet::new(),
            live: 0,
            size: 0,
            structures: Vec::new(),
            ledger: PackingLedger::default(),
        }
    }

    fn deg(&self, v: Vertex) -> usize {
        self.t.degree(v)
    }

    /// Degree at least four, or degree three with no leaf neighbour.
    fn branching(&self, v: Vertex) -> bool {
        self.deg(v) >= 4 || (self.deg(v) == 3 && leaf_neighbors(self.t, v).next().is_none())
    }

    fn outside(&self, v: Vertex) -> Vec<Vertex> {
        self.t.neighbors(v).iter().copied().filter(|&u| !self.inside[u]).collect()
    }

    fn next_on_path(&self, prev: Vertex, v: Vertex) -> Result<Vertex> {
        self.t.neighbors(v).iter().copied().find(|&u| u != prev).ok_or_else(|| violation("path ends early"))
    }

    fn set_open(&mut self, v: Vertex, open: bool) {
        let changed = if open { self.open.insert(v) } else { self.open.remove(&v) };
        if changed && is_spike(self.t, v) {
            if open {
                self.live += 1;
            } else {
                self.live -= 1;
            }
        }
    }

    fn augment(&mut self, op: u8, add: Vec<Vertex>, found: Option<ConflictStructure>) -> Result<()> {
        let before = (self.open.len() as i64, self.structures.len() as i64, self.live as i64, self.size as i64);
        let mut added = Vec::new();
        for v in add {
            if !self.inside[v] {
                self.inside[v] = true;
                added.push(v);
            }
        }
        added.sort_unstable();
        self.size += added.len();
        let mut touched: Vec<Vertex> = added.clone();
        for &v in &added {
            touched.extend_from_slice(self.t.neighbors(v));
        }
        touched.sort_unstable();
        touched.dedup();
        for v in touched {
            let open = self.inside[v] && self.t.neighbors(v).iter().any(|&u| !self.inside[u]);
            self.set_open(v, open);
            if open && self.used[v] {
                return Err(violation(format!("structure vertex {} became an open branch", v + 1)));
            }
        }
        if let Some(s) = found {
            for v in s.vertices() {
                if self.used[v] || !self.inside[v] || self.open.contains(&v) {
                    return Err(violation(format!("structure {s} overlaps or is on the boundary")));
                }
                self.used[v] = true;
            }
            self.structures.push(s);
        }
        let step = LedgerStep {
            op,
            d_open: self.open.len() as i64 - before.0,
            d_structures: self.structures.len() as i64 - before.1,
            d_spikes: self.live as i64 - before.2,
            d_vertices: self.size as i64 - before.3,
            added,
        };
        if !step.holds() {
            return Err(violation(format!("operation {op} breaks the incremental inequality: {step}")));
        }
        self.ledger.steps.push(step);
        Ok(())
    }

    fn closed_nbhd(&self, path: &[Vertex]) -> Vec<Vertex> {
        let mut out = path.to_vec();
        for &v in path {
            out.extend_from_slice(self.t.neighbors(v));
        }
        out
    }

    fn op3(&mut self, v0: Vertex, v1: Vertex) -> Result<()> {
        let leaf = |g: &Self, v: Vertex| leaf_neighbors(g.t, v).find(|&l| !g.inside[l]);
        let (l0, l1) = match (leaf(self, v0), leaf(self, v1)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(violation("operation 3 without two outside leaves")),
        };
        let add = self.closed_nbhd(&[v0, v1]);
        self.augment(3, add, Some(ConflictStructure::B(l0, v0, v1, l1)))
    }

    fn op4(&mut self, path: &[Vertex]) -> Result<()> {
        let (a, b) = (path[path.len() - 2], path[path.len() - 1]);
        if !self.m.contains(a, b) || self.deg(a) > 2 || self.deg(b) > 2 {
            return Err(violation(format!("operation 4 on {}-{} is not a low-degree matched edge", a + 1, b + 1)));
        }
        let add = self.closed_nbhd(path);
        self.augment(4, add, Some(ConflictStructure::A(a, b)))
    }

    fn op5(&mut self, path: &[Vertex]) -> Result<()> {
        let add = self.closed_nbhd(path);
        self.augment(5, add, None)
    }

    /// Picks and applies the augmentation at open branch `v0`.
    fn grow(&mut self, v0: Vertex) -> Result<()> {
        if self.branching(v0) {
            return self.op5(&[v0]);
        }
        let outside = self.outside(v0);
        match self.deg(v0) {
            3 => {
                let v1 = match outside.iter().copied().filter(|&u| !is_leaf(self.t, u)).collect::<Vec<_>>()[..] {
                    [v1] => v1,
                    _ => return Err(violation(format!("open spike {} has no unique way out", v0 + 1))),
                };
                if self.branching(v1) {
                    self.op5(&[v0, v1])
                } else if self.deg(v1) == 3 {
                    self.op3(v0, v1)
                } else {
                    let v2 = self.next_on_path(v0, v1)?;
                    if self.deg(v2) <= 2 {
                        self.op4(&[v0, v1, v2])
                    } else {
                        self.op5(&[v0, v1, v2])
                    }
                }
            }
            2 => {
                let [v1] = outside[..] else {
                    return Err(violation(format!("open branch {} has no way out", v0 + 1)));
                };
                if self.branching(v1) {
                    self.op5(&[v0, v1])
                } else if self.deg(v1) == 3 {
                    self.augment(2, vec![v1], None)
                } else if self.deg(v1) == 1 {
                    self.op4(&[v0, v1])
                } else {
                    let v2 = self.next_on_path(v0, v1)?;
                    if self.deg(v2) <= 2 {
                        if self.m.contains(v0, v1) {
                            self.op4(&[v0, v1])
                        } else {
                            self.op4(&[v0, v1, v2])
                        }
                    } else if leaf_neighbors(self.t, v2).next().is_some() {
                        self.op4(&[v0, v1])
                    } else {
                        self.op5(&[v0, v1, v2])
                    }
                }
            }
            d => Err(violation(format!("open branch {} has degree {d}", v0 + 1))),
        }
    }

    fn pack_tree(&mut self, tree: &[Vertex]) -> Result<()> {
        match tree.len() {
            0 => return Ok(()),
            2 => {
                let (a, b) = (tree[0], tree[1]);
                for v in [a, b] {
                    self.inside[v] = true;
                    self.used[v] = true;
                }
                self.size += 2;
                self.structures.push(ConflictStructure::A(a, b));
                return Ok(());
            }
            _ => {}
        }
        let start = self.size;
        let leaf = tree
            .iter()
            .copied()
            .filter(|&v| is_leaf(self.t, v))
            .min()
            .ok_or_else(|| violation("tree without leaves"))?;
        let u = self.t.neighbors(leaf)[0];
        self.augment(1, self.closed_nbhd(&[u]), None)?;
        while let Some(&v0) = self.open.first() {
            self.grow(v0)?;
        }
        if self.live != 0 || self.size - start != tree.len() {
            return Err(violation("growth stopped before covering the tree"));
        }
        Ok(())
    }
}

fn pack_components(
    t: &Graph,
    m: &Matching,
    trees: &[Vec<Vertex>],
) -> Result<(Vec<ConflictStructure>, Vec<PackingLedger>)> {
    if !t.is_forest() {
        return Err(Error::NotAForest);
    }
    if !m.is_perfect_in(t) {
        return Err(Error::NotPerfect);
    }
    let mut grower = Grower::new(t, m);
    let mut ledgers = Vec::with_capacity(trees.len());
    for tree in trees {
        let first = grower.structures.len();
        grower.pack_tree(tree)?;
        ledgers.push(std::mem::take(&mut grower.ledger));
        let found = grower.structures.len() - first;
        if 14 * found < tree.len() {
            return Err(violation(format!("{found} structures in a tree of {} vertices", tree.len())));
        }
    }
    Ok((grower.structures, ledgers))
}

/// Vertex-disjoint conflict structures covering at least one in 14
/// vertices of the tree `t`, with the ledger of augmentations.
pub fn pack(t: &Graph, m: &Matching) -> Result<(Vec<ConflictStructure>, PackingLedger)> {
    let trees = t.connected_components();
    if trees.len() > 1 {
        return Err(Error::Validation("packing expects a single tree; use pack_forest".into()));
    }
    let (s, mut ledgers) = pack_components(t, m, &trees)?;
    Ok((s, ledgers.pop().unwrap_or_default()))
}

/// Packs each tree of a forest separately; one ledger per tree, in the
/// order of [`Graph::connected_components`].
pub fn pack_forest(f: &Graph, m: &Matching) -> Result<(Vec<ConflictStructure>, Vec<PackingLedger>)> {
    pack_components(f, m, &f.connected_components())
}

/// Validity, pairwise disjointness, and at least `|V(T)|/14` structures.
pub fn verify_packing(t: &Graph, m: &Matching, structures: &[ConflictStructure]) -> bool {
    if !m.is_perfect_in(t) {
        return false;
    }
    let mut used = vec![false; t.capacity()];
    for s in structures {
        if !s.is_valid(t, m) {
            return false;
        }
        for v in s.vertices() {
            if std::mem::replace(&mut used[v], true) {
                return false;
            }
        }
    }
    14 * structures.len() >= t.num_vertices()
}

/// The lowest chunk of `x` whose neighbourhood covers one of the hit pairs
/// of `s`.
pub fn hit_by(g: &Graph, x: &[Vertex], s: &ConflictStructure) -> Option<ChunkKey> {
    let mut in_x = vec![false; g.capacity()];
    for &v in x {
        in_x[v] = true;
    }
    let xn = |v: Vertex| -> Vec<Vertex> { g.neighbors(v).iter().copied().filter(|&u| in_x[u]).collect() };
    let mut best: Option<ChunkKey> = None;
    let mut offer = |k: ChunkKey| {
        if best.is_none_or(|b| k < b) {
            best = Some(k);
        }
    };
    for (p, q) in s.hit_pairs() {
        let (np, nq) = (xn(p), xn(q));
        for &a in &np {
            for &b in &nq {
                if a == b {
                    offer(ChunkKey::single(a));
                } else if !g.has_edge(a, b) {
                    offer(ChunkKey::pair(a, b));
                }
            }
        }
    }
    best
}
