//! The full kernelization pipeline: conversion to independent set,
//! cleaning, exhaustive rule application and compaction, recorded as a
//! trace.

use std::fmt;

use crate::error::{Error, Result};
use crate::instance::{Instance, Problem};
use crate::nt::{clean, to_is, to_vc, trivial_no, trivial_yes, CleanRecord};
use crate::reduce::{reduce, ReduceStats};
use crate::trace::ReductionTrace;

/// `2x + 28x² + 56x³`, the vertex bound for a feedback set of size `x`.
pub fn kernel_size_bound(x: usize) -> u128 {
    let x = x as u128;
    2 * x + 28 * x * x + 56 * x * x * x
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelOptions {
    /// Replace the kernel by a constant instance once the answer is known.
    /// Must be off when kernel solutions will be lifted.
    pub shortcut: bool,
    /// Skip the rules when the cleaned graph has at most `|X|³` vertices.
    pub fast: bool,
    /// Form of the emitted kernel; defaults to the input's.
    pub output: Option<Problem>,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions { shortcut: true, fast: false, output: None }
    }
}

impl KernelOptions {
    /// Settings for solving the kernel and lifting the result.
    pub fn lifting() -> Self {
        KernelOptions { shortcut: false, ..Self::default() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KernelSummary {
    pub n_in: usize,
    pub n_out: usize,
    pub x_in: usize,
    pub x_out: usize,
    pub k_in: i64,
    pub k_out: i64,
    pub bound: u128,
    pub rules_skipped: bool,
    pub reduce: ReduceStats,
}

impl fmt::Display for KernelSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {} {} {}",
            self.n_in, self.n_out, self.x_in, self.x_out, self.k_in, self.k_out, self.bound
        )
    }
}

#[derive(Debug, Clone)]
pub struct Kernel {
    pub instance: Instance,
    pub trace: ReductionTrace,
    pub summary: KernelSummary,
}

#[allow(clippy::too_many_arguments)]
fn finish(
    original: &Instance,
    opts: KernelOptions,
    reduced: Option<Instance>,
    clean: CleanRecord,
    rules: Vec<crate::reduce::RuleRecord>,
    trivial: Option<bool>,
    reduce_stats: ReduceStats,
    rules_skipped: bool,
) -> Kernel {
    let form = opts.output.unwrap_or(original.problem);
    let (kernel_is, kernel_ids) = match (trivial, reduced) {
        (Some(true), _) => (trivial_yes(), Vec::new()),
        (Some(false), _) | (None, None) => (trivial_no(), Vec::new()),
        (None, Some(r)) => r.compacted(),
    };
    let instance = match form {
        Problem::IndependentSet => kernel_is,
        Problem::VertexCover => to_vc(&kernel_is),
    };
    let summary = KernelSummary {
        n_in: original.graph.num_vertices(),
        n_out: instance.graph.num_vertices(),
        x_in: original.fvs.len(),
        x_out: instance.fvs.len(),
        k_in: original.target,
        k_out: instance.target,
        bound: kernel_size_bound(original.fvs.len()),
        rules_skipped,
        reduce: reduce_stats,
    };
    let trace = ReductionTrace {
        problem: original.problem,
        n: original.graph.capacity(),
        target: original.target,
        kernel_problem: form,
        clean,
        rules,
        trivial,
        kernel_ids,
    };
    Kernel { instance, trace, summary }
}

/// Kernelizes an unweighted instance whose vertex ids are `0..n`.
///
/// With shortcuts on, the answer may be settled early and the kernel
/// replaced by a constant instance: a YES kernel with no vertices, or a
/// single edge asking for two independent vertices.
pub fn kernelize(inst: &Instance, opts: KernelOptions) -> Result<Kernel> {
    if !inst.is_unweighted() {
        return Err(Error::Validation("kernelization requires unit weights".into()));
    }
    if inst.graph.num_vertices() != inst.graph.capacity() {
        return Err(Error::Validation("vertex ids must be dense; compact the instance first".into()));
    }
    let is = to_is(inst);
    let done = |clean, rules, answer, stats| finish(inst, opts, None, clean, rules, Some(answer), stats, false);
    if opts.shortcut && is.target <= 0 {
        return Ok(done(CleanRecord::default(), Vec::new(), true, ReduceStats::default()));
    }
    let (cleaned, record) = clean(&is)?;
    if opts.shortcut {
        if cleaned.target <= 0 {
            return Ok(done(record, Vec::new(), true, ReduceStats::default()));
        }
        // the core has a perfect fractional matching, so α ≤ n/2
        if 2 * cleaned.target > cleaned.graph.num_vertices() as i64 {
            return Ok(done(record, Vec::new(), false, ReduceStats::default()));
        }
    }
    let x = inst.fvs.len() as u128;
    if opts.fast && (cleaned.graph.num_vertices() as u128) <= x * x * x {
        return Ok(finish(inst, opts, Some(cleaned), record, Vec::new(), None, ReduceStats::default(), true));
    }
    let (reduced, rules, stats) = reduce(&cleaned)?;
    if opts.shortcut && reduced.target <= 0 {
        return Ok(done(record, rules, true, stats));
    }
    Ok(finish(inst, opts, Some(reduced), record, rules, None, stats, false))
}
