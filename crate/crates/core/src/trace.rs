//! Reduction traces: text form, forward replay and solution lifting.
//!
//! ```text
//! h <problem> <n> <k> <kernel-problem>
//! NT <|C0|> ids.. <|J|> ids.. <|moved|> ids..
//! R1 v <deg> nbrs..
//! R2 u v
//! R3 <|T|> ids.. <|E_T|> pairs.. <|E_X|> pairs..
//! R4 u v t|0 w|0 <|Nx(u)|> ids.. <|Nx(v)|> ids..
//! R5 t u v w p q <|Nx(t)|> ids.. <|Nx(u)|> ids.. <|Nx(v)|> ids.. <|Nx(w)|> ids..
//! TRIVIAL yes|no
//! KERNEL <n'> ids..
//! ```
//!
//! Ids are 1-based; `0` marks an absent optional vertex.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::forest::ForestDp;
use crate::graph::{Graph, Vertex};
use crate::instance::{Instance, Problem};
use crate::nt::{to_is, to_vc, trivial_no, trivial_yes, CleanRecord};
use crate::reduce::RuleRecord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub problem: Problem,
    /// Vertex count of the original instance; its ids are `0..n`.
    pub n: usize,
    pub target: i64,
    pub kernel_problem: Problem,
    pub clean: CleanRecord,
    pub rules: Vec<RuleRecord>,
    /// `Some(answer)` if the kernel was replaced by a trivial instance.
    pub trivial: Option<bool>,
    /// Original id of each kernel vertex, indexed by kernel id.
    pub kernel_ids: Vec<Vertex>,
}

impl ReductionTrace {
    /// Identity trace for an instance kept as is.
    pub fn identity(inst: &Instance) -> Self {
        ReductionTrace {
            problem: inst.problem,
            n: inst.graph.capacity(),
            target: inst.target,
            kernel_problem: inst.problem,
            clean: CleanRecord::default(),
            rules: Vec::new(),
            trivial: None,
            kernel_ids: inst.graph.vertices().collect(),
        }
    }

    /// Amount by which the independent set target dropped: `|J|` plus every
    /// rule's decrement.
    pub fn offset(&self) -> usize {
        self.clean.offset() + self.rules.iter().map(RuleRecord::offset).sum::<usize>()
    }

    /// The constant `c` with `vc(G) = vc(G') + c`.
    pub fn cover_offset(&self) -> i64 {
        (self.n - self.kernel_ids.len()) as i64 - self.offset() as i64
    }
}

fn push_list(out: &mut String, list: &[Vertex]) {
    write!(out, " {}", list.len()).unwrap();
    for &v in list {
        write!(out, " {}", v + 1).unwrap();
    }
}

fn push_pairs(out: &mut String, list: &[(Vertex, Vertex)]) {
    write!(out, " {}", list.len()).unwrap();
    for &(a, b) in list {
        write!(out, " {} {}", a + 1, b + 1).unwrap();
    }
}

fn opt(v: Option<Vertex>) -> usize {
    v.map_or(0, |v| v + 1)
}

pub fn serialize_trace(t: &ReductionTrace) -> String {
    let mut out = String::new();
    writeln!(out, "h {} {} {} {}", t.problem.tag(), t.n, t.target, t.kernel_problem.tag()).unwrap();
    out.push_str("NT");
    push_list(&mut out, &t.clean.c0);
    push_list(&mut out, &t.clean.j);
    push_list(&mut out, &t.clean.moved);
    out.push('\n');
    for r in &t.rules {
        match r {
            RuleRecord::R1 { v, nbrs } => {
                write!(out, "R1 {}", v + 1).unwrap();
                push_list(&mut out, nbrs);
            }
            RuleRecord::R2 { u, v } => write!(out, "R2 {} {}", u + 1, v + 1).unwrap(),
            RuleRecord::R3 { tree, tree_edges, x_edges } => {
                out.push_str("R3");
                push_list(&mut out, tree);
                push_pairs(&mut out, tree_edges);
                push_pairs(&mut out, x_edges);
            }
            RuleRecord::R4 { u, v, t, w, xu, xv } => {
                write!(out, "R4 {} {} {} {}", u + 1, v + 1, opt(*t), opt(*w)).unwrap();
                push_list(&mut out, xu);
                push_list(&mut out, xv);
            }
            RuleRecord::R5 { t, u, v, w, p, q, xt, xu, xv, xw } => {
                write!(out, "R5 {} {} {} {} {} {}", t + 1, u + 1, v + 1, w + 1, p + 1, q + 1).unwrap();
                for list in [xt, xu, xv, xw] {
                    push_list(&mut out, list);
                }
            }
        }
        out.push('\n');
    }
    if let Some(answer) = t.trivial {
        writeln!(out, "TRIVIAL {}", if answer { "yes" } else { "no" }).unwrap();
    }
    out.push_str("KERNEL");
    push_list(&mut out, &t.kernel_ids);
    out.push('\n');
    out
}

struct Tokens<'a> {
    line: usize,
    it: std::str::SplitWhitespace<'a>,
}

impl Tokens<'_> {
    fn word(&mut self) -> Result<&str> {
        self.it.next().ok_or_else(|| Error::parse(self.line, "record ends early"))
    }

    fn num(&mut self) -> Result<usize> {
        let line = self.line;
        self.word()?.parse().map_err(|_| Error::parse(line, "expected a non-negative integer"))
    }

    fn vertex(&mut self) -> Result<Vertex> {
        match self.num()? {
            0 => Err(Error::parse(self.line, "vertex ids are 1-based")),
            v => Ok(v - 1),
        }
    }

    fn opt_vertex(&mut self) -> Result<Option<Vertex>> {
        Ok(self.num()?.checked_sub(1))
    }

    fn list(&mut self) -> Result<Vec<Vertex>> {
        let len = self.num()?;
        (0..len).map(|_| self.vertex()).collect()
    }

    fn pairs(&mut self) -> Result<Vec<(Vertex, Vertex)>> {
        let len = self.num()?;
        (0..len).map(|_| Ok((self.vertex()?, self.vertex()?))).collect()
    }

    fn end(&mut self) -> Result<()> {
        match self.it.next() {
            None => Ok(()),
            Some(_) => Err(Error::parse(self.line, "trailing tokens")),
        }
    }
}

pub fn parse_trace(text: &str) -> Result<ReductionTrace> {
    let mut header = None;
    let mut clean = None;
    let mut rules = Vec::new();
    let mut trivial = None;
    let mut kernel = None;
    for (idx, raw) in text.lines().enumerate() {
        let mut tok = Tokens { line: idx + 1, it: raw.split_whitespace() };
        let Some(kind) = tok.it.next() else { continue };
        match kind {
            "c" => continue,
            "h" => {
                let problem: Problem = tok.word()?.parse()?;
                let n = tok.num()?;
                let line = tok.line;
                let target: i64 = tok.word()?.parse().map_err(|_| Error::parse(line, "bad target"))?;
                let kernel_problem: Problem = tok.word()?.parse()?;
                header = Some((problem, n, target, kernel_problem));
            }
            "NT" => clean = Some(CleanRecord { c0: tok.list()?, j: tok.list()?, moved: tok.list()? }),
            "R1" => rules.push(RuleRecord::R1 { v: tok.vertex()?, nbrs: tok.list()? }),
            "R2" => rules.push(RuleRecord::R2 { u: tok.vertex()?, v: tok.vertex()? }),
            "R3" => rules.push(RuleRecord::R3 { tree: tok.list()?, tree_edges: tok.pairs()?, x_edges: tok.pairs()? }),
            "R4" => rules.push(RuleRecord::R4 {
                u: tok.vertex()?,
                v: tok.vertex()?,
                t: tok.opt_vertex()?,
                w: tok.opt_vertex()?,
                xu: tok.list()?,
                xv: tok.list()?,
            }),
            "R5" => rules.push(RuleRecord::R5 {
                t: tok.vertex()?,
                u: tok.vertex()?,
                v: tok.vertex()?,
                w: tok.vertex()?,
                p: tok.vertex()?,
                q: tok.vertex()?,
                xt: tok.list()?,
                xu: tok.list()?,
                xv: tok.list()?,
                xw: tok.list()?,
            }),
            "TRIVIAL" => {
                trivial = Some(match tok.word()? {
                    "yes" => true,
                    "no" => false,
                    _ => return Err(Error::parse(tok.line, "expected yes or no")),
                })
            }
            "KERNEL" => kernel = Some(tok.list()?),
            other => return Err(Error::parse(tok.line, format!("unknown record '{other}'"))),
        }
        tok.end()?;
    }
    let (problem, n, target, kernel_problem) = header.ok_or_else(|| Error::Validation("trace has no header".into()))?;
    let trace = ReductionTrace {
        problem,
        n,
        target,
        kernel_problem,
        clean: clean.ok_or_else(|| Error::Validation("trace has no NT record".into()))?,
        rules,
        trivial,
        kernel_ids: kernel.ok_or_else(|| Error::Validation("trace has no KERNEL record".into()))?,
    };
    if let Some(&v) = trace.kernel_ids.iter().find(|&&v| v >= n) {
        return Err(Error::UnknownVertex(v));
    }
    Ok(trace)
}

/// Reapplies the trace to the original instance; the result must equal the
/// emitted kernel.
pub fn replay_forward(original: &Instance, trace: &ReductionTrace) -> Result<Instance> {
    if original.graph.capacity() != trace.n || original.graph.num_vertices() != trace.n {
        return Err(Error::Validation("original instance does not match the trace".into()));
    }
    let start = to_is(original);
    let mut g = start.graph.clone();
    let mut k = start.target;
    let mut in_x = vec![false; trace.n];
    for &v in &start.fvs {
        in_x[v] = true;
    }
    let known = |g: &Graph, v: Vertex| if g.contains(v) { Ok(()) } else { Err(Error::UnknownVertex(v)) };

    for &v in trace.clean.c0.iter().chain(&trace.clean.j) {
        known(&g, v)?;
        g.remove_vertex(v)?;
        in_x[v] = false;
    }
    for &v in &trace.clean.moved {
        known(&g, v)?;
        in_x[v] = true;
    }
    k -= trace.clean.j.len() as i64;

    for r in &trace.rules {
        match r {
            RuleRecord::R1 { v, .. } => {
                g.remove_vertex(*v)?;
                in_x[*v] = false;
            }
            RuleRecord::R2 { u, v } => {
                known(&g, *u)?;
                known(&g, *v)?;
                g.add_edge(*u, *v);
            }
            RuleRecord::R3 { tree, .. } => {
                for &v in tree {
                    g.remove_vertex(v)?;
                }
            }
            RuleRecord::R4 { u, v, t, w, xu, xv } => {
                g.remove_vertex(*u)?;
                g.remove_vertex(*v)?;
                if let Some(t) = *t {
                    known(&g, t)?;
                    xv.iter().for_each(|&x| _ = g.add_edge(t, x));
                }
                if let Some(w) = *w {
                    known(&g, w)?;
                    xu.iter().for_each(|&x| _ = g.add_edge(w, x));
                }
                if let (Some(t), Some(w)) = (*t, *w) {
                    g.add_edge(t, w);
                }
            }
            RuleRecord::R5 { t, u, v, w, p, q, xt, xw, .. } => {
                for &a in &[*t, *u, *v, *w] {
                    g.remove_vertex(a)?;
                }
                known(&g, *p)?;
                known(&g, *q)?;
                xt.iter().for_each(|&x| _ = g.add_edge(*p, x));
                xw.iter().for_each(|&x| _ = g.add_edge(*q, x));
            }
        }
        k -= r.offset() as i64;
    }

    let kernel = match trace.trivial {
        Some(true) => trivial_yes(),
        Some(false) => trivial_no(),
        None => {
            let x: Vec<Vertex> = g.vertices().filter(|&v| in_x[v]).collect();
            let inst = Instance::new(g, x, k, Problem::IndependentSet, None)?;
            let (compact, map) = inst.compacted();
            if map != trace.kernel_ids {
                return Err(Error::Validation("replayed kernel vertices differ from the trace".into()));
            }
            compact
        }
    };
    Ok(match trace.kernel_problem {
        Problem::IndependentSet => kernel,
        Problem::VertexCover => to_vc(&kernel),
    })
}

fn mark(n: usize, set: &[Vertex]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        m[v] = true;
    }
    m
}

fn hits(sol: &[bool], list: &[Vertex]) -> bool {
    list.iter().any(|&x| sol[x])
}

fn broken(msg: &str) -> Error {
    Error::Invariant(format!("lifting: {msg}"))
}

/// Lifts an independent set of the kernel graph (kernel ids) to one of the
/// original graph, larger by exactly `trace.offset()`.
pub fn lift_is(trace: &ReductionTrace, kernel: &Graph, sol: &[Vertex]) -> Result<Vec<Vertex>> {
    if let Some(answer) = trace.trivial {
        return if answer {
            Ok(Vec::new())
        } else {
            Err(Error::Infeasible("the instance was decided NO during kernelization".into()))
        };
    }
    if kernel.num_vertices() != trace.kernel_ids.len() {
        return Err(Error::Validation("kernel graph does not match the trace".into()));
    }
    if let Some(&v) = sol.iter().find(|&&v| !kernel.contains(v)) {
        return Err(Error::UnknownVertex(v));
    }
    if let Some((a, b)) = kernel.independence_violation(sol) {
        return Err(Error::Infeasible(format!("kernel vertices {} and {} are adjacent", a + 1, b + 1)));
    }
    let mut inside = mark(trace.n, &[]);
    for &v in sol {
        inside[trace.kernel_ids[v]] = true;
    }
    for r in trace.rules.iter().rev() {
        match r {
            RuleRecord::R1 { .. } | RuleRecord::R2 { .. } => {}
            RuleRecord::R3 { tree, tree_edges, x_edges } => {
                let mut local = vec![usize::MAX; trace.n];
                for (i, &v) in tree.iter().enumerate() {
                    local[v] = i;
                }
                let mut adj = vec![Vec::new(); tree.len()];
                for &(a, b) in tree_edges {
                    adj[local[a]].push(local[b]);
                    adj[local[b]].push(local[a]);
                }
                let mut blocked = vec![false; tree.len()];
                for &(a, x) in x_edges {
                    if inside[x] {
                        blocked[local[a]] = true;
                    }
                }
                let mut dp = ForestDp::build(tree.len(), 0..tree.len(), |i| &adj[i])?;
                let picked = dp.mis(|i| blocked[i]);
                if picked.len() != tree.len() / 2 {
                    return Err(broken("a deleted tree lost independence number"));
                }
                for i in picked {
                    inside[tree[i]] = true;
                }
            }
            RuleRecord::R4 { u, v, t, w, xu, xv } => {
                let z = if t.is_some_and(|t| inside[t]) {
                    if w.is_some_and(|w| inside[w]) || hits(&inside, xv) {
                        return Err(broken("R4 with t chosen"));
                    }
                    *v
                } else if w.is_some_and(|w| inside[w]) {
                    if hits(&inside, xu) {
                        return Err(broken("R4 with w chosen"));
                    }
                    *u
                } else if !hits(&inside, xu) {
                    *u
                } else if !hits(&inside, xv) {
                    *v
                } else {
                    return Err(broken("R4 pair blocked on both sides"));
                };
                inside[z] = true;
            }
            RuleRecord::R5 { t, u, v, w, p, q, xt, xu, xv, xw } => {
                let (a, b) = match (hits(&inside, xt), hits(&inside, xw)) {
                    (false, false) => (*t, *w),
                    (true, false) => {
                        if hits(&inside, xu) || inside[*p] {
                            return Err(broken("R5 with t blocked"));
                        }
                        (*u, *w)
                    }
                    (false, true) => {
                        if hits(&inside, xv) || inside[*q] {
                            return Err(broken("R5 with w blocked"));
                        }
                        (*t, *v)
                    }
                    (true, true) => return Err(broken("R5 leaves blocked on both sides")),
                };
                inside[a] = true;
                inside[b] = true;
            }
        }
    }
    for &v in &trace.clean.j {
        inside[v] = true;
    }
    Ok((0..trace.n).filter(|&v| inside[v]).collect())
}

/// Lifts a vertex cover of the kernel graph: the complement of the lifted
/// complement, of size `|sol| + trace.cover_offset()`.
pub fn lift_vc(trace: &ReductionTrace, kernel: &Graph, sol: &[Vertex]) -> Result<Vec<Vertex>> {
    if let Some(&v) = sol.iter().find(|&&v| !kernel.contains(v)) {
        return Err(Error::UnknownVertex(v));
    }
    if let Some((a, b)) = kernel.uncovered_edge(sol) {
        return Err(Error::Infeasible(format!("kernel edge {}-{} is not covered", a + 1, b + 1)));
    }
    let in_sol = mark(kernel.capacity(), sol);
    let rest: Vec<Vertex> = kernel.vertices().filter(|&v| !in_sol[v]).collect();
    let lifted = mark(trace.n, &lift_is(trace, kernel, &rest)?);
    Ok((0..trace.n).filter(|&v| !lifted[v]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ReductionTrace {
        ReductionTrace {
            problem: Problem::VertexCover,
            n: 12,
            target: 5,
            kernel_problem: Problem::VertexCover,
            clean: CleanRecord { c0: vec![0], j: vec![1, 2], moved: vec![3] },
            rules: vec![
                RuleRecord::R1 { v: 4, nbrs: vec![5, 6] },
                RuleRecord::R2 { u: 3, v: 7 },
                RuleRecord::R3 { tree: vec![8, 9], tree_edges: vec![(8, 9)], x_edges: vec![(8, 3)] },
                RuleRecord::R4 { u: 5, v: 6, t: None, w: Some(10), xu: vec![3], xv: vec![] },
                RuleRecord::R5 {
                    t: 0,
                    u: 1,
                    v: 2,
                    w: 3,
                    p: 4,
                    q: 5,
                    xt: vec![],
                    xu: vec![6],
                    xv: vec![7, 8],
                    xw: vec![9],
                },
            ],
            trivial: None,
            kernel_ids: vec![3, 7, 10, 11],
        }
    }

    #[test]
    fn round_trip_every_record() {
        let t = sample();
        assert_eq!(parse_trace(&serialize_trace(&t)).unwrap(), t);
        let mut yes = t.clone();
        yes.trivial = Some(true);
        yes.rules.truncate(1);
        assert_eq!(parse_trace(&serialize_trace(&yes)).unwrap(), yes);
        let mut bare = t;
        bare.rules.clear();
        bare.clean = CleanRecord::default();
        assert_eq!(parse_trace(&serialize_trace(&bare)).unwrap(), bare);
    }

    #[test]
    fn malformed_records_are_rejected() {
        assert!(matches!(parse_trace("h vc 2 1 vc\nNT 0 0 0\nR2 1\nKERNEL 0\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_trace("h vc 2 1 vc\nNT 0 0 0\nR9\nKERNEL 0\n"), Err(Error::Parse { line: 3, .. })));
        assert!(parse_trace("NT 0 0 0\nKERNEL 0\n").is_err());
    }

    #[test]
    fn identity_lift() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let inst = Instance::new(g.clone(), vec![], 1, Problem::IndependentSet, None).unwrap();
        let t = ReductionTrace::identity(&inst);
        assert_eq!(lift_is(&t, &g, &[0, 2]).unwrap(), vec![0, 2]);
        assert_eq!(lift_vc(&t, &g, &[1]).unwrap(), vec![1]);
    }

    #[test]
    fn r3_lift_picks_one_endpoint() {
        let t = ReductionTrace {
            problem: Problem::IndependentSet,
            n: 2,
            target: 1,
            kernel_problem: Problem::IndependentSet,
            clean: CleanRecord::default(),
            rules: vec![RuleRecord::R3 { tree: vec![0, 1], tree_edges: vec![(0, 1)], x_edges: vec![] }],
            trivial: None,
            kernel_ids: vec![],
        };
        let empty = Graph::new(0);
        assert_eq!(lift_is(&t, &empty, &[]).unwrap().len(), 1);
        assert_eq!(lift_vc(&t, &empty, &[]).unwrap().len(), 1);
        assert_eq!(t.cover_offset(), 1);
    }

    #[test]
    fn rejects_dependent_input() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let inst = Instance::new(g.clone(), vec![], 1, Problem::IndependentSet, None).unwrap();
        let t = ReductionTrace::identity(&inst);
        assert!(matches!(lift_is(&t, &g, &[0, 1]), Err(Error::Infeasible(_))));
        assert!(matches!(lift_vc(&t, &g, &[]), Err(Error::Infeasible(_))));
    }
}
