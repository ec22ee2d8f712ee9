//! Reduction rules 1–5 on clean independent set instances and the
//! three-phase scheduler that applies them exhaustively.
//!
//! The session keeps the forest as explicit adjacency lists and every
//! forest vertex's X-neighbourhood as a bitset over X positions, so rule
//! applications touch only the affected vertices.

use std::collections::BTreeSet;

use crate::chunk::ChunkKey;
use crate::error::{Error, Result};
use crate::forest::ForestDp;
use crate::graph::{Graph, Vertex};
use crate::instance::{Instance, Problem};
use crate::nt::is_clean;

const NONE: usize = usize::MAX;

/// One applied rule with the local state needed to undo it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleRecord {
    /// A feedback vertex deleted together with its neighbourhood.
    R1 { v: Vertex, nbrs: Vec<Vertex> },
    /// An edge added between two feedback vertices.
    R2 { u: Vertex, v: Vertex },
    /// A whole tree deleted, with its edges and its edges into X.
    R3 { tree: Vec<Vertex>, tree_edges: Vec<(Vertex, Vertex)>, x_edges: Vec<(Vertex, Vertex)> },
    /// A matched edge `u–v` contracted away; `t` and `w` are the outer
    /// forest neighbours of `u` and `v`.
    R4 { u: Vertex, v: Vertex, t: Option<Vertex>, w: Option<Vertex>, xu: Vec<Vertex>, xv: Vec<Vertex> },
    /// The path `t–u–v–w` between leaves `t`, `w` removed; `p` and `q` are
    /// the remaining forest neighbours of `u` and `v`.
    R5 {
        t: Vertex,
        u: Vertex,
        v: Vertex,
        w: Vertex,
        p: Vertex,
        q: Vertex,
        xt: Vec<Vertex>,
        xu: Vec<Vertex>,
        xv: Vec<Vertex>,
        xw: Vec<Vertex>,
    },
}

impl RuleRecord {
    /// How much the rule lowered the target.
    pub fn offset(&self) -> usize {
        match self {
            RuleRecord::R1 { .. } | RuleRecord::R2 { .. } => 0,
            RuleRecord::R3 { tree, .. } => tree.len() / 2,
            RuleRecord::R4 { .. } => 1,
            RuleRecord::R5 { .. } => 2,
        }
    }

    pub fn rule(&self) -> usize {
        match self {
            RuleRecord::R1 { .. } => 1,
            RuleRecord::R2 { .. } => 2,
            RuleRecord::R3 { .. } => 3,
            RuleRecord::R4 { .. } => 4,
            RuleRecord::R5 { .. } => 5,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReduceStats {
    /// Applications per rule, index 0 is Rule 1.
    pub applied: [usize; 5],
    /// Rounds of phases 1–2; more than one means the fallback ran.
    pub rounds: usize,
    /// Conflict-table comparisons made after phase 2.
    pub stability_checks: usize,
    /// Chunks whose conflict count changed across phase 2.
    pub stability_mismatches: usize,
}

/// Conflict counts of every chunk against the whole forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictTable {
    pub alpha: usize,
    pub entries: Vec<(ChunkKey, usize)>,
}

impl ConflictTable {
    pub fn get(&self, key: ChunkKey) -> Option<usize> {
        self.entries.binary_search_by_key(&key, |e| e.0).ok().map(|i| self.entries[i].1)
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }
}

/// Upper bound on the vertex count of a reduced clean instance with `x`
/// feedback vertices: `x + 14x(x + C(x,2))`.
pub fn reduced_size_bound(x: usize) -> u128 {
    let x = x as u128;
    x + 14 * x * (x + x * x.saturating_sub(1) / 2)
}

/// Exclusive reduction session over one clean instance.
#[derive(Debug, Clone)]
pub struct Reducer {
    in_f: Vec<bool>,
    f_adj: Vec<Vec<Vertex>>,
    xs: Vec<Vertex>,
    x_pos: Vec<usize>,
    x_alive: Vec<u64>,
    x_count: usize,
    words: usize,
    xmask: Vec<u64>,
    xadj: Vec<u64>,
    target: i64,
    records: Vec<RuleRecord>,
    stats: ReduceStats,
}

type Chunk = (usize, Option<usize>);

impl Reducer {
    /// Fails unless `inst` is an unweighted, clean independent set instance.
    pub fn new(inst: &Instance) -> Result<Self> {
        if inst.problem != Problem::IndependentSet {
            return Err(Error::WrongProblem("independent set"));
        }
        if !inst.is_unweighted() {
            return Err(Error::Validation("reduction requires unit weights".into()));
        }
        if !is_clean(inst)? {
            return Err(Error::NotClean);
        }
        let g = &inst.graph;
        let cap = g.capacity();
        let xs = inst.fvs.clone();
        let mut x_pos = vec![NONE; cap];
        for (i, &v) in xs.iter().enumerate() {
            x_pos[v] = i;
        }
        let words = xs.len().div_ceil(64).max(1);
        let mut x_alive = vec![0u64; words];
        for i in 0..xs.len() {
            x_alive[i / 64] |= 1 << (i % 64);
        }
        let mut in_f = vec![false; cap];
        let mut f_adj = vec![Vec::new(); cap];
        let mut xmask = vec![0u64; cap * words];
        let mut xadj = vec![0u64; xs.len() * words];
        for v in g.vertices() {
            let pv = x_pos[v];
            if pv == NONE {
                in_f[v] = true;
            }
            for &u in g.neighbors(v) {
                let pu = x_pos[u];
                match (pv == NONE, pu == NONE) {
                    (true, true) => f_adj[v].push(u),
                    (true, false) => xmask[v * words + pu / 64] |= 1 << (pu % 64),
                    (false, false) => xadj[pv * words + pu / 64] |= 1 << (pu % 64),
                    (false, true) => {}
                }
            }
        }
        Ok(Reducer {
            in_f,
            f_adj,
            x_count: xs.len(),
            xs,
            x_pos,
            x_alive,
            words,
            xmask,
            xadj,
            target: inst.target,
            records: Vec::new(),
            stats: ReduceStats::default(),
        })
    }

    pub fn target(&self) -> i64 {
        self.target
    }

    pub fn records(&self) -> &[RuleRecord] {
        &self.records
    }

    pub fn stats(&self) -> &ReduceStats {
        &self.stats
    }

    pub fn fvs_size(&self) -> usize {
        self.x_count
    }

    fn cap(&self) -> usize {
        self.in_f.len()
    }

    fn f_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.cap()).filter(|&v| self.in_f[v])
    }

    fn fdeg(&self, v: Vertex) -> usize {
        self.f_adj[v].len()
    }

    fn x_is_alive(&self, i: usize) -> bool {
        self.x_alive[i / 64] >> (i % 64) & 1 == 1
    }

    fn alive_x_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.xs.len()).filter(|&i| self.x_is_alive(i))
    }

    fn mask(&self, v: Vertex) -> &[u64] {
        &self.xmask[v * self.words..(v + 1) * self.words]
    }

    fn sees(&self, v: Vertex, i: usize) -> bool {
        self.xmask[v * self.words + i / 64] >> (i % 64) & 1 == 1
    }

    fn x_adjacent(&self, i: usize, j: usize) -> bool {
        self.xadj[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    /// Live X-neighbours of forest vertex `v`, ascending.
    fn x_nbrs(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = Vec::new();
        for (w, (&m, &a)) in self.mask(v).iter().zip(&self.x_alive).enumerate() {
            let mut bits = m & a;
            while bits != 0 {
                out.push(self.xs[w * 64 + bits.trailing_zeros() as usize]);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Some chunk sees both `a` and `b`: an X-neighbour of `a` equals or is
    /// non-adjacent to an X-neighbour of `b`.
    fn blockable(&self, a: Vertex, b: Vertex) -> bool {
        let (ma, mb) = (self.mask(a), self.mask(b));
        for (w, (&m, &alive)) in ma.iter().zip(&self.x_alive).enumerate() {
            let mut bits = m & alive;
            while bits != 0 {
                let i = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let row = &self.xadj[i * self.words..(i + 1) * self.words];
                if (0..self.words).any(|k| mb[k] & self.x_alive[k] & !row[k] != 0) {
                    return true;
                }
            }
        }
        false
    }

    fn chunks(&self) -> Vec<Chunk> {
        let alive: Vec<usize> = self.alive_x_positions().collect();
        let mut out: Vec<Chunk> = alive.iter().map(|&i| (i, None)).collect();
        for (a, &i) in alive.iter().enumerate() {
            for &j in &alive[a + 1..] {
                if !self.x_adjacent(i, j) {
                    out.push((i, Some(j)));
                }
            }
        }
        out
    }

    fn key(&self, c: Chunk) -> ChunkKey {
        match c.1 {
            None => ChunkKey::single(self.xs[c.0]),
            Some(j) => ChunkKey::pair(self.xs[c.0], self.xs[j]),
        }
    }

    fn build_dp(&self) -> ForestDp {
        ForestDp::build(self.cap(), self.f_vertices(), |v| &self.f_adj[v]).expect("forest stays acyclic")
    }

    fn blocked_alpha(&self, dp: &mut ForestDp, c: Chunk) -> usize {
        match c {
            (i, None) => dp.alpha(|v| self.sees(v, i)),
            (i, Some(j)) => dp.alpha(|v| self.sees(v, i) || self.sees(v, j)),
        }
    }

    fn table_for(&self, dp: &mut ForestDp, chunks: &[Chunk]) -> Vec<usize> {
        let alpha = dp.alpha(|_| false);
        chunks.iter().map(|&c| alpha - self.blocked_alpha(dp, c)).collect()
    }

    /// Fresh conflict counts for every current chunk.
    pub fn conflict_table(&self) -> ConflictTable {
        let mut dp = self.build_dp();
        let chunks = self.chunks();
        let confs = self.table_for(&mut dp, &chunks);
        let mut entries: Vec<(ChunkKey, usize)> = chunks.iter().map(|&c| self.key(c)).zip(confs).collect();
        entries.sort_unstable();
        ConflictTable { alpha: dp.alpha(|_| false), entries }
    }

    fn chunk_of(&self, members: &[Vertex]) -> Result<Chunk> {
        let pos = |v: Vertex| -> Result<usize> {
            let p = *self.x_pos.get(v).ok_or(Error::UnknownVertex(v))?;
            if p == NONE || !self.x_is_alive(p) {
                return Err(Error::Precondition(format!("vertex {} is not in the feedback set", v + 1)));
            }
            Ok(p)
        };
        match *members {
            [a] => Ok((pos(a)?, None)),
            [a, b] if a != b => {
                let (i, j) = (pos(a.min(b))?, pos(a.max(b))?);
                if self.x_adjacent(i, j) {
                    return Err(Error::Precondition(format!("{} and {} are adjacent", a + 1, b + 1)));
                }
                Ok((i, Some(j)))
            }
            _ => Err(Error::Precondition("a chunk has one or two distinct vertices".into())),
        }
    }

    /// `CONF_F(Y)` for a chunk given by its members.
    pub fn conf(&self, members: &[Vertex]) -> Result<usize> {
        let c = self.chunk_of(members)?;
        let mut dp = self.build_dp();
        Ok(self.table_for(&mut dp, &[c])[0])
    }

    // ---- rule bodies, preconditions already checked ----

    fn delete_f(&mut self, v: Vertex) {
        self.in_f[v] = false;
        for u in std::mem::take(&mut self.f_adj[v]) {
            self.f_adj[u].retain(|&x| x != v);
        }
        let w = self.words;
        self.xmask[v * w..(v + 1) * w].iter_mut().for_each(|m| *m = 0);
    }

    fn absorb_mask(&mut self, dst: Vertex, src: Vertex) {
        let w = self.words;
        for k in 0..w {
            self.xmask[dst * w + k] |= self.xmask[src * w + k] & self.x_alive[k];
        }
    }

    fn link_f(&mut self, a: Vertex, b: Vertex) {
        for (x, y) in [(a, b), (b, a)] {
            let list = &mut self.f_adj[x];
            if let Err(i) = list.binary_search(&y) {
                list.insert(i, y);
            }
        }
    }

    fn rule1(&mut self, i: usize) {
        let v = self.xs[i];
        let mut nbrs: Vec<Vertex> = self.f_vertices().filter(|&u| self.sees(u, i)).collect();
        nbrs.extend(self.alive_x_positions().filter(|&j| self.x_adjacent(i, j)).map(|j| self.xs[j]));
        nbrs.sort_unstable();
        self.x_alive[i / 64] &= !(1 << (i % 64));
        self.x_count -= 1;
        for u in 0..self.cap() {
            self.xmask[u * self.words + i / 64] &= !(1 << (i % 64));
        }
        for j in 0..self.xs.len() {
            self.xadj[j * self.words + i / 64] &= !(1 << (i % 64));
        }
        self.records.push(RuleRecord::R1 { v, nbrs });
        self.stats.applied[0] += 1;
    }

    fn rule2(&mut self, i: usize, j: usize) {
        self.xadj[i * self.words + j / 64] |= 1 << (j % 64);
        self.xadj[j * self.words + i / 64] |= 1 << (i % 64);
        let (u, v) = (self.xs[i], self.xs[j]);
        self.records.push(RuleRecord::R2 { u: u.min(v), v: u.max(v) });
        self.stats.applied[1] += 1;
    }

    fn rule3(&mut self, tree: Vec<Vertex>) {
        let mut tree_edges = Vec::new();
        let mut x_edges = Vec::new();
        for &a in &tree {
            tree_edges.extend(self.f_adj[a].iter().filter(|&&b| a < b).map(|&b| (a, b)));
            x_edges.extend(self.x_nbrs(a).into_iter().map(|x| (a, x)));
        }
        for &a in &tree {
            self.delete_f(a);
        }
        self.target -= (tree.len() / 2) as i64;
        self.records.push(RuleRecord::R3 { tree, tree_edges, x_edges });
        self.stats.applied[2] += 1;
    }

    fn other_nbr(&self, a: Vertex, not: Vertex) -> Option<Vertex> {
        self.f_adj[a].iter().copied().find(|&x| x != not)
    }

    /// Returns the vertices whose surroundings changed.
    fn rule4(&mut self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        let t = self.other_nbr(u, v);
        let w = self.other_nbr(v, u);
        let (xu, xv) = (self.x_nbrs(u), self.x_nbrs(v));
        if let Some(t) = t {
            self.absorb_mask(t, v);
        }
        if let Some(w) = w {
            self.absorb_mask(w, u);
        }
        self.delete_f(u);
        self.delete_f(v);
        if let (Some(t), Some(w)) = (t, w) {
            self.link_f(t, w);
        }
        self.target -= 1;
        self.records.push(RuleRecord::R4 { u, v, t, w, xu, xv });
        self.stats.applied[3] += 1;
        t.into_iter().chain(w).collect()
    }

    fn rule5(&mut self, t: Vertex, u: Vertex, v: Vertex, w: Vertex) -> Vec<Vertex> {
        let p = self.f_adj[u].iter().copied().find(|&x| x != t && x != v).expect("u has degree 3");
        let q = self.f_adj[v].iter().copied().find(|&x| x != w && x != u).expect("v has degree 3");
        let (xt, xu, xv, xw) = (self.x_nbrs(t), self.x_nbrs(u), self.x_nbrs(v), self.x_nbrs(w));
        self.absorb_mask(p, t);
        self.absorb_mask(q, w);
        for a in [t, u, v, w] {
            self.delete_f(a);
        }
        self.target -= 2;
        self.records.push(RuleRecord::R5 { t, u, v, w, p, q, xt, xu, xv, xw });
        self.stats.applied[4] += 1;
        vec![p, q]
    }

    // ---- checked entry points ----

    pub fn apply_rule1(&mut self, v: Vertex) -> Result<()> {
        let c = self.chunk_of(&[v])?;
        let conf = self.conf(&[v])?;
        if conf < self.x_count {
            return Err(Error::Precondition(format!(
                "conflict {conf} of {{{}}} is below |X| = {}",
                v + 1,
                self.x_count
            )));
        }
        self.rule1(c.0);
        Ok(())
    }

    pub fn apply_rule2(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        let c = self.chunk_of(&[u, v])?;
        let conf = self.conf(&[u, v])?;
        if conf < self.x_count {
            return Err(Error::Precondition(format!("conflict {conf} of the pair is below |X| = {}", self.x_count)));
        }
        self.rule2(c.0, c.1.expect("pair chunk"));
        Ok(())
    }

    pub fn apply_rule3(&mut self, tree: &[Vertex]) -> Result<()> {
        let mut tree = tree.to_vec();
        tree.sort_unstable();
        tree.dedup();
        let Some(&root) = tree.first() else {
            return Err(Error::Precondition("empty tree".into()));
        };
        if tree.iter().any(|&v| v >= self.cap() || !self.in_f[v]) {
            return Err(Error::Precondition("tree vertices must lie in the forest".into()));
        }
        let component = self.component_of(root);
        if component != tree {
            return Err(Error::Precondition("vertices do not form a forest component".into()));
        }
        let mut dp = ForestDp::build(self.cap(), tree.iter().copied(), |v| &self.f_adj[v])?;
        let alpha = dp.alpha(|_| false);
        for c in self.chunks() {
            if self.blocked_alpha(&mut dp, c) != alpha {
                return Err(Error::Precondition(format!("chunk {} conflicts with the tree", self.key(c))));
            }
        }
        self.rule3(tree);
        Ok(())
    }

    fn component_of(&self, root: Vertex) -> Vec<Vertex> {
        let mut seen = BTreeSet::from([root]);
        let mut stack = vec![root];
        while let Some(a) = stack.pop() {
            for &b in &self.f_adj[a] {
                if seen.insert(b) {
                    stack.push(b);
                }
            }
        }
        seen.into_iter().collect()
    }

    fn check_forest_pair(&self, a: Vertex, b: Vertex) -> Result<()> {
        for v in [a, b] {
            if v >= self.cap() || !self.in_f[v] {
                return Err(Error::Precondition(format!("vertex {} is not a forest vertex", v + 1)));
            }
        }
        if self.f_adj[a].binary_search(&b).is_err() {
            return Err(Error::Precondition(format!("{} and {} are not adjacent in the forest", a + 1, b + 1)));
        }
        Ok(())
    }

    pub fn apply_rule4(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.check_forest_pair(u, v)?;
        if self.fdeg(u) > 2 || self.fdeg(v) > 2 {
            return Err(Error::Precondition("endpoints must have forest degree at most 2".into()));
        }
        if self.blockable(u, v) {
            return Err(Error::Precondition(format!("pair {},{} is blockable", u + 1, v + 1)));
        }
        self.rule4(u, v);
        Ok(())
    }

    pub fn apply_rule5(&mut self, t: Vertex, u: Vertex, v: Vertex, w: Vertex) -> Result<()> {
        self.check_forest_pair(t, u)?;
        self.check_forest_pair(u, v)?;
        self.check_forest_pair(v, w)?;
        if self.fdeg(t) != 1 || self.fdeg(w) != 1 || self.fdeg(u) != 3 || self.fdeg(v) != 3 {
            return Err(Error::Precondition("degrees must be 1, 3, 3, 1 along the path".into()));
        }
        if self.rule5_blocked(t, u, v, w) {
            return Err(Error::Precondition("a pair of the path is blockable".into()));
        }
        self.rule5(t, u, v, w);
        Ok(())
    }

    fn rule5_blocked(&self, t: Vertex, u: Vertex, v: Vertex, w: Vertex) -> bool {
        self.blockable(u, t) || self.blockable(v, w) || self.blockable(t, w)
    }

    // ---- scheduler ----

    /// Rules 1 and 2 over the chunks in order of decreasing conflict count.
    fn phase1(&mut self) -> bool {
        let mut dp = self.build_dp();
        let chunks = self.chunks();
        let confs = self.table_for(&mut dp, &chunks);
        let mut order: Vec<usize> = (0..chunks.len()).collect();
        order.sort_by(|&a, &b| confs[b].cmp(&confs[a]).then(self.key(chunks[a]).cmp(&self.key(chunks[b]))));
        let mut changed = false;
        for idx in order {
            let (i, j) = chunks[idx];
            if !self.x_is_alive(i) {
                continue;
            }
            match j {
                None => {
                    if confs[idx] >= self.x_count {
                        self.rule1(i);
                        changed = true;
                    }
                }
                Some(j) => {
                    if self.x_is_alive(j) && !self.x_adjacent(i, j) && confs[idx] >= self.x_count {
                        self.rule2(i, j);
                        changed = true;
                    }
                }
            }
        }
        changed
    }

    /// Tries Rule 4 on edges at `a`, then Rule 5 with `a` as a leaf end.
    fn try_local(&mut self, a: Vertex) -> Option<Vec<Vertex>> {
        if self.fdeg(a) <= 2 {
            for idx in 0..self.f_adj[a].len() {
                let b = self.f_adj[a][idx];
                if self.fdeg(b) <= 2 && !self.blockable(a, b) {
                    return Some(self.rule4(a.min(b), a.max(b)));
                }
            }
        }
        if self.fdeg(a) == 1 {
            let u = self.f_adj[a][0];
            if self.fdeg(u) == 3 {
                for idx in 0..3 {
                    let v = self.f_adj[u][idx];
                    if v == a || self.fdeg(v) != 3 {
                        continue;
                    }
                    let leaf = self.f_adj[v].iter().copied().find(|&x| x != u && self.fdeg(x) == 1);
                    if let Some(w) = leaf {
                        if !self.rule5_blocked(a, u, v, w) {
                            return Some(self.rule5(a, u, v, w));
                        }
                    }
                }
            }
        }
        None
    }

    /// Rules 4 and 5 to exhaustion, revisiting only the neighbourhood of
    /// each change.
    fn phase2(&mut self) -> bool {
        let mut work: BTreeSet<Vertex> = self.f_vertices().collect();
        let mut changed = false;
        while let Some(a) = work.pop_first() {
            if !self.in_f[a] {
                continue;
            }
            let Some(touched) = self.try_local(a) else { continue };
            changed = true;
            for c in touched {
                work.insert(c);
                for &d in &self.f_adj[c] {
                    work.insert(d);
                    work.extend(self.f_adj[d].iter().copied());
                }
            }
        }
        changed
    }

    /// Rule 3 on every tree no chunk conflicts with.
    fn phase3(&mut self) {
        let mut dp = self.build_dp();
        let base = dp.alpha_per_tree(|_| false);
        let mut conflicted = vec![false; base.len()];
        for c in self.chunks() {
            let per_tree = match c {
                (i, None) => dp.alpha_per_tree(|v| self.sees(v, i)),
                (i, Some(j)) => dp.alpha_per_tree(|v| self.sees(v, i) || self.sees(v, j)),
            };
            for (k, (&a, &b)) in base.iter().zip(&per_tree).enumerate() {
                conflicted[k] |= a != b;
            }
        }
        let roots: Vec<usize> = dp.roots().collect();
        let mut tree_index = vec![NONE; dp.len()];
        for (k, &r) in roots.iter().enumerate() {
            tree_index[r] = k;
        }
        let mut trees: Vec<Vec<Vertex>> = vec![Vec::new(); roots.len()];
        for (i, &v) in dp.vertices().iter().enumerate() {
            let k = tree_index[dp.root_of(i)];
            if !conflicted[k] {
                trees[k].push(v);
            }
        }
        for mut tree in trees.into_iter().filter(|t| !t.is_empty()) {
            tree.sort_unstable();
            self.rule3(tree);
        }
    }

    /// Applies all rules exhaustively.
    pub fn run(&mut self) {
        loop {
            self.stats.rounds += 1;
            self.phase1();
            let before = self.conflict_table();
            if !self.phase2() {
                break;
            }
            let after = self.conflict_table();
            self.stats.stability_checks += 1;
            let mismatches =
                before.entries.iter().zip(&after.entries).filter(|(b, a)| b.0 != a.0 || b.1 != a.1).count();
            self.stats.stability_mismatches += mismatches;
            if mismatches == 0 {
                break;
            }
        }
        self.phase3();
    }

    /// Which rule, if any, still applies; used to certify reducedness.
    pub fn applicable_rule(&self) -> Option<usize> {
        let table = self.conflict_table();
        if table.entries.iter().any(|&(k, c)| c >= self.x_count && !k.is_pair()) {
            return Some(1);
        }
        if table.entries.iter().any(|&(k, c)| c >= self.x_count && k.is_pair()) {
            return Some(2);
        }
        for a in self.f_vertices() {
            let mut probe = self.clone();
            probe.records.clear();
            if probe.try_local(a).is_some() {
                return Some(probe.records[0].rule());
            }
        }
        let mut probe = self.clone();
        probe.records.clear();
        probe.phase3();
        if !probe.records.is_empty() {
            return Some(3);
        }
        None
    }

    /// The current graph, feedback set and target as an instance.
    pub fn instance(&self) -> Instance {
        let cap = self.cap();
        let mut edges = Vec::new();
        for v in self.f_vertices() {
            edges.extend(self.f_adj[v].iter().filter(|&&u| v < u).map(|&u| (v, u)));
            edges.extend(self.x_nbrs(v).into_iter().map(|x| (v.min(x), v.max(x))));
        }
        let alive: Vec<usize> = self.alive_x_positions().collect();
        for (a, &i) in alive.iter().enumerate() {
            for &j in &alive[a + 1..] {
                if self.x_adjacent(i, j) {
                    edges.push((self.xs[i], self.xs[j]));
                }
            }
        }
        let mut g = Graph::from_edges(cap, &edges).expect("session keeps the graph simple");
        let x: Vec<Vertex> = alive.iter().map(|&i| self.xs[i]).collect();
        let mut keep = vec![false; cap];
        for &v in &x {
            keep[v] = true;
        }
        for (v, &kept) in keep.iter().enumerate() {
            if !kept && !self.in_f[v] {
                g.remove_vertex(v).expect("vertex exists");
            }
        }
        Instance { graph: g, fvs: x, target: self.target, problem: Problem::IndependentSet, weights: None }
    }

    pub fn into_parts(self) -> (Instance, Vec<RuleRecord>, ReduceStats) {
        let inst = self.instance();
        (inst, self.records, self.stats)
    }
}

/// Exhaustively reduces a clean independent set instance.
pub fn reduce(inst: &Instance) -> Result<(Instance, Vec<RuleRecord>, ReduceStats)> {
    let mut r = Reducer::new(inst)?;
    r.run();
    Ok(r.into_parts())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: usize, edges: &[(Vertex, Vertex)], x: &[Vertex], k: i64) -> Instance {
        Instance::new(Graph::from_edges(n, edges).unwrap(), x.to_vec(), k, Problem::IndependentSet, None).unwrap()
    }

    #[test]
    fn bound_formula() {
        assert_eq!(reduced_size_bound(2), 86);
        assert_eq!(reduced_size_bound(0), 0);
        assert_eq!(reduced_size_bound(1), 15);
    }

    #[test]
    fn rejects_unclean_input() {
        let i = inst(3, &[(0, 1), (1, 2)], &[], 1);
        assert_eq!(Reducer::new(&i).unwrap_err(), Error::NotClean);
    }

    #[test]
    fn empty_fvs_deletes_everything() {
        let i = inst(6, &[(0, 1), (2, 3), (4, 5)], &[], 3);
        let (out, records, _) = reduce(&i).unwrap();
        assert_eq!(out.graph.num_vertices(), 0);
        assert_eq!(out.target, 0);
        assert_eq!(records.iter().map(RuleRecord::offset).sum::<usize>(), 3);
    }

    #[test]
    fn rule1_fires_on_heavy_vertex() {
        // x = 6 sees both ends of three K2s; |X| = 1 so conf 3 >= 1
        let i = inst(7, &[(0, 1), (2, 3), (4, 5), (6, 0), (6, 1), (6, 2), (6, 3), (6, 4), (6, 5)], &[6], 3);
        let mut r = Reducer::new(&i).unwrap();
        assert_eq!(r.conf(&[6]).unwrap(), 3);
        r.apply_rule1(6).unwrap();
        assert_eq!(r.fvs_size(), 0);
        assert!(!r.instance().graph.contains(6));
    }

    #[test]
    fn rule1_needs_conflict() {
        let i = inst(3, &[(0, 1)], &[2], 1);
        let mut r = Reducer::new(&i).unwrap();
        assert!(matches!(r.apply_rule1(2), Err(Error::Precondition(_))));
    }

    #[test]
    fn rule2_adds_edge() {
        // X = {4,5}: 4 sees 0 and 2, 5 sees 1 and 3; the pair blocks both K2s
        let i = inst(6, &[(0, 1), (2, 3), (4, 0), (4, 2), (5, 1), (5, 3)], &[4, 5], 2);
        let mut r = Reducer::new(&i).unwrap();
        assert_eq!(r.conf(&[4, 5]).unwrap(), 2);
        r.apply_rule2(4, 5).unwrap();
        assert!(r.instance().graph.has_edge(4, 5));
        assert!(matches!(r.apply_rule2(4, 5), Err(Error::Precondition(_))));
    }

    #[test]
    fn rule3_examples() {
        let i = inst(3, &[(0, 1)], &[2], 1);
        let mut r = Reducer::new(&i).unwrap();
        r.apply_rule3(&[0, 1]).unwrap();
        assert_eq!(r.target(), 0);
        let i = inst(3, &[(0, 1), (2, 0)], &[2], 1);
        let mut r = Reducer::new(&i).unwrap();
        r.apply_rule3(&[1, 0]).unwrap();
        assert_eq!(r.target(), 0);
        let i = inst(3, &[(0, 1), (2, 0), (2, 1)], &[2], 1);
        let mut r = Reducer::new(&i).unwrap();
        assert!(r.apply_rule3(&[0, 1]).is_err());
    }

    #[test]
    fn rule4_examples() {
        // 2 sees u, 3 sees v, 2-3 adjacent: unblockable
        let i = inst(4, &[(0, 1), (2, 0), (3, 1), (2, 3)], &[2, 3], 2);
        let mut r = Reducer::new(&i).unwrap();
        r.apply_rule4(0, 1).unwrap();
        assert_eq!(r.target(), 1);
        let i = inst(3, &[(0, 1), (2, 0), (2, 1)], &[2], 1);
        let mut r = Reducer::new(&i).unwrap();
        assert!(r.apply_rule4(0, 1).is_err());
    }

    #[test]
    fn rule4_links_outer_neighbours() {
        // path 0-1-2-3-4-5 matched as 01 23 45; contract 1-2
        let i = inst(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (6, 1), (6, 0)], &[6], 3);
        let mut r = Reducer::new(&i).unwrap();
        r.apply_rule4(1, 2).unwrap();
        let g = r.instance().graph;
        assert!(g.has_edge(0, 3));
        // t = 0 inherits the X-neighbours of v = 2 (none); w = 3 inherits 6
        assert!(g.has_edge(3, 6));
    }

    fn h_gadget() -> Vec<(Vertex, Vertex)> {
        // t=0 u=1 v=2 w=3, p=4 matched to 5, q=6 matched to 7
        vec![(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (2, 6), (6, 7)]
    }

    #[test]
    fn rule5_examples() {
        let i = inst(8, &h_gadget(), &[], 4);
        let mut r = Reducer::new(&i).unwrap();
        r.apply_rule5(0, 1, 2, 3).unwrap();
        assert_eq!(r.target(), 2);
        let mut edges = h_gadget();
        edges.extend([(8, 0), (8, 3)]);
        let i = inst(9, &edges, &[8], 4);
        let mut r = Reducer::new(&i).unwrap();
        assert!(r.apply_rule5(0, 1, 2, 3).is_err());
    }

    #[test]
    fn reduced_instance_is_a_fixpoint() {
        let i = inst(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], &[0], 2);
        let (out, records, _) = reduce(&i).unwrap();
        let (again, more, _) = reduce(&out).unwrap();
        assert_eq!(again, out);
        assert!(more.is_empty());
        let _ = records;
    }
}
