//! Problem instances and the line-oriented VCK text format.
//!
//! ```text
//! c comment
//! p vck <n> <m>
//! e <u> <v>          edge, 1-based
//! x <v>              v belongs to the feedback vertex set
//! w <v> <weight>     positive integer weight
//! t is|vc            problem flag, default vc
//! k <value>          target
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fvs;
use crate::graph::{normalize, Graph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    IndependentSet,
    VertexCover,
}

impl Problem {
    pub fn tag(self) -> &'static str {
        match self {
            Problem::IndependentSet => "is",
            Problem::VertexCover => "vc",
        }
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "is" => Ok(Problem::IndependentSet),
            "vc" => Ok(Problem::VertexCover),
            other => Err(Error::Validation(format!("unknown problem flag '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    /// Sorted feedback vertex set.
    pub fvs: Vec<Vertex>,
    pub target: i64,
    pub problem: Problem,
    /// Per-vertex weights indexed by id; `None` means unit weights.
    pub weights: Option<Vec<u64>>,
}

impl Instance {
    /// Validated constructor: `graph - fvs` must be a forest and weights positive.
    pub fn new(
        graph: Graph,
        fvs: Vec<Vertex>,
        target: i64,
        problem: Problem,
        weights: Option<Vec<u64>>,
    ) -> Result<Self> {
        let fvs = normalize(fvs);
        if let Some(&v) = fvs.iter().find(|&&v| !graph.contains(v)) {
            return Err(Error::UnknownVertex(v));
        }
        if !fvs::validate_fvs(&graph, &fvs) {
            return Err(Error::Validation("feedback vertex set leaves a cycle".into()));
        }
        if let Some(w) = &weights {
            if w.len() != graph.capacity() {
                return Err(Error::Validation("weight vector length does not match graph".into()));
            }
            if let Some(v) = graph.vertices().find(|&v| w[v] == 0) {
                return Err(Error::Validation(format!("vertex {} has weight 0", v + 1)));
            }
        }
        Ok(Instance { graph, fvs, target, problem, weights })
    }

    pub fn weight(&self, v: Vertex) -> u64 {
        self.weights.as_ref().map_or(1, |w| w[v])
    }

    pub fn total_weight(&self) -> u64 {
        self.graph.vertices().map(|v| self.weight(v)).sum()
    }

    pub fn set_weight(&self, set: &[Vertex]) -> u64 {
        set.iter().map(|&v| self.weight(v)).sum()
    }

    /// True if every live vertex has weight one.
    pub fn is_unweighted(&self) -> bool {
        self.graph.vertices().all(|v| self.weight(v) == 1)
    }

    /// Relabels to dense ids `0..n`; returns the map from new id to old id.
    pub fn compacted(&self) -> (Instance, Vec<Vertex>) {
        let (graph, map) = self.graph.compact();
        let mut index = vec![usize::MAX; self.graph.capacity()];
        for (i, &v) in map.iter().enumerate() {
            index[v] = i;
        }
        let inst = Instance {
            graph,
            fvs: self.fvs.iter().map(|&v| index[v]).collect(),
            target: self.target,
            problem: self.problem,
            weights: self.weights.as_ref().map(|w| map.iter().map(|&v| w[v]).collect()),
        };
        (inst, map)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Compute a feedback vertex set when the file has no `x` lines.
    pub auto_fvs: bool,
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_instance_with(text, ParseOptions::default())
}

pub fn parse_instance_with(text: &str, opts: ParseOptions) -> Result<Instance> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut fvs = Vec::new();
    let mut weights: Vec<(usize, Vertex, u64)> = Vec::new();
    let mut target: Option<i64> = None;
    let mut problem: Option<Problem> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tok = raw.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        let args: Vec<&str> = tok.collect();
        let n = header.map(|h| h.0);
        let vertex = |s: &str| -> Result<Vertex> {
            let v: usize = s.parse().map_err(|_| Error::parse(line, format!("bad vertex '{s}'")))?;
            match n {
                Some(n) if v >= 1 && v <= n => Ok(v - 1),
                Some(_) => Err(Error::parse(line, format!("vertex {v} out of range"))),
                None => Err(Error::parse(line, "record before 'p' line")),
            }
        };
        let arity = |want: usize| -> Result<()> {
            if args.len() == want {
                Ok(())
            } else {
                Err(Error::parse(line, format!("'{kind}' expects {want} arguments")))
            }
        };
        match kind {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(Error::parse(line, "duplicate 'p' line"));
                }
                if args.len() != 3 || args[0] != "vck" {
                    return Err(Error::parse(line, "expected 'p vck <n> <m>'"));
                }
                let n = args[1].parse().map_err(|_| Error::parse(line, "bad vertex count"))?;
                let m = args[2].parse().map_err(|_| Error::parse(line, "bad edge count"))?;
                header = Some((n, m));
            }
            "e" => {
                arity(2)?;
                let (u, v) = (vertex(args[0])?, vertex(args[1])?);
                if u == v {
                    return Err(Error::parse(line, "self-loop"));
                }
                edges.push((u, v));
            }
            "x" => {
                arity(1)?;
                fvs.push(vertex(args[0])?);
            }
            "w" => {
                arity(2)?;
                let v = vertex(args[0])?;
                let w: u64 = args[1].parse().map_err(|_| Error::parse(line, "bad weight"))?;
                if w == 0 {
                    return Err(Error::parse(line, "weights must be positive"));
                }
                weights.push((line, v, w));
            }
            "k" => {
                arity(1)?;
                if target.is_some() {
                    return Err(Error::parse(line, "duplicate 'k' line"));
                }
                let k: i64 = args[0].parse().map_err(|_| Error::parse(line, "bad target"))?;
                if k < 0 {
                    return Err(Error::parse(line, "target must be non-negative"));
                }
                target = Some(k);
            }
            "t" => {
                arity(1)?;
                if problem.is_some() {
                    return Err(Error::parse(line, "duplicate 't' line"));
                }
                problem = Some(args[0].parse().map_err(|_| Error::parse(line, "expected 't is' or 't vc'"))?);
            }
            other => return Err(Error::parse(line, format!("unknown record '{other}'"))),
        }
    }

    let (n, m) = header.ok_or_else(|| Error::Validation("missing 'p' line".into()))?;
    let target = target.ok_or_else(|| Error::Validation("missing 'k' line".into()))?;
    if edges.len() != m {
        return Err(Error::Validation(format!("header declares {m} edges, found {}", edges.len())));
    }
    let graph = Graph::from_edges(n, &edges)?;
    let weights = if weights.is_empty() {
        None
    } else {
        let mut w = vec![1; n];
        let mut seen = vec![false; n];
        for (line, v, wt) in weights {
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::parse(line, format!("duplicate weight for vertex {}", v + 1)));
            }
            w[v] = wt;
        }
        Some(w)
    };
    let fvs = if fvs.is_empty() && !graph.is_forest() {
        if !opts.auto_fvs {
            return Err(Error::Validation("fvs absent and graph cyclic".into()));
        }
        fvs::approx_fvs(&graph)
    } else {
        let sorted = normalize(fvs.clone());
        if sorted.len() != fvs.len() {
            return Err(Error::Validation("duplicate 'x' line".into()));
        }
        sorted
    };
    Instance::new(graph, fvs, target, problem.unwrap_or(Problem::VertexCover), weights)
}

/// Canonical text form. Tombstoned ids are compacted away first.
pub fn emit_instance(inst: &Instance) -> String {
    let (inst, _) = inst.compacted();
    let g = &inst.graph;
    let mut out = String::new();
    writeln!(out, "p vck {} {}", g.num_vertices(), g.num_edges()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    for &v in &inst.fvs {
        writeln!(out, "x {}", v + 1).unwrap();
    }
    if let Some(w) = &inst.weights {
        for v in g.vertices() {
            writeln!(out, "w {} {}", v + 1, w[v]).unwrap();
        }
    }
    if inst.problem == Problem::IndependentSet {
        out.push_str("t is\n");
    }
    writeln!(out, "k {}", inst.target).unwrap();
    out
}

/// A solution vertex set with its size or weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub value: u64,
    pub vertices: Vec<Vertex>,
}

pub fn emit_solution(sol: &Solution) -> String {
    let mut out = format!("s {}\n", sol.value);
    for &v in &sol.vertices {
        writeln!(out, "v {}", v + 1).unwrap();
    }
    out
}

pub fn parse_solution(text: &str) -> Result<Solution> {
    let mut value = None;
    let mut vertices = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tok = raw.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        let arg = tok.next();
        if tok.next().is_some() {
            return Err(Error::parse(line, "trailing tokens"));
        }
        match (kind, arg) {
            ("c", _) => {}
            ("s", Some(a)) => {
                if value.is_some() {
                    return Err(Error::parse(line, "duplicate 's' line"));
                }
                value = Some(a.parse().map_err(|_| Error::parse(line, "bad solution value"))?);
            }
            ("v", Some(a)) => {
                let v: usize = a.parse().map_err(|_| Error::parse(line, "bad vertex"))?;
                if v == 0 {
                    return Err(Error::parse(line, "vertex ids are 1-based"));
                }
                vertices.push(v - 1);
            }
            _ => return Err(Error::parse(line, format!("unexpected record '{}'", raw.trim()))),
        }
    }
    let value = value.ok_or_else(|| Error::Validation("missing 's' line".into()))?;
    Ok(Solution { value, vertices })
}
