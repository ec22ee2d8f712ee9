//! Kernelization of vertex cover / independent set parameterized by a
//! feedback vertex set, with solution lifting, a conflict-structure packer
//! and a weighted cross-composition generator.

pub mod chunk;
pub mod composer;
pub mod error;
pub mod forest;
pub mod fvs;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod kernel;
pub mod matching;
pub mod nt;
pub mod oracle;
pub mod packer;
pub mod reduce;
pub mod trace;

pub use chunk::{enumerate_chunks, is_blockable, ChunkKey};
pub use composer::{cross_compose, decode_witness, subdivide_to_p2split, P2SplitInstance, WeightedComposite};
pub use error::{Error, Result};
pub use forest::{
    active_conflicts, alpha_forest, alpha_forest_avoiding, conf, conflict_profile, mis_forest_avoiding,
    perfect_matching_forest, ForestDp, TreeConflicts,
};
pub use fvs::{approx_fvs, validate_fvs};
pub use generate::{generate, GenConfig};
pub use graph::{Graph, Vertex};
pub use instance::{
    emit_instance, emit_solution, parse_instance, parse_instance_with, parse_solution, Instance, ParseOptions, Problem,
    Solution,
};
pub use kernel::{kernel_size_bound, kernelize, Kernel, KernelOptions, KernelSummary};
pub use matching::{max_matching_bipartite, min_vc_bipartite, Matching};
pub use nt::{clean, is_clean, nt_decompose, to_is, to_vc, CleanRecord, NtDecomposition};
pub use packer::{
    find_spikes, hit_by, pack, pack_forest, verify_packing, ConflictStructure, LedgerStep, PackingLedger,
};
pub use reduce::{reduce, reduced_size_bound, ConflictTable, ReduceStats, Reducer, RuleRecord};
pub use trace::{lift_is, lift_vc, parse_trace, replay_forward, serialize_trace, ReductionTrace};
