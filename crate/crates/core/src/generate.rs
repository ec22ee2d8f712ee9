//! Seeded random instances: a forest built from matched pairs plus a
//! planted feedback vertex set.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::instance::{Instance, Problem};

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    /// Size of the planted feedback set; these get the highest ids.
    pub planted_fvs: usize,
    /// Probability that a matched pair is attached to an earlier one.
    /// At 1.0 the forest is a single tree.
    pub join: f64,
    /// Forest neighbours per planted vertex (capped by the forest size).
    pub x_degree: usize,
    /// Probability of an edge between two planted vertices.
    pub x_density: f64,
    /// Vertex cover target; defaults to pairs + planted, always feasible.
    pub target: Option<i64>,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { n: 100, planted_fvs: 4, join: 0.9, x_degree: 4, x_density: 0.5, target: None, seed: 0 }
    }
}

pub fn generate(cfg: &GenConfig) -> Result<Instance> {
    let f = cfg.planted_fvs;
    if f > cfg.n {
        return Err(Error::Validation(format!("planted set of {f} exceeds {} vertices", cfg.n)));
    }
    let forest = cfg.n - f;
    if forest % 2 == 1 {
        return Err(Error::Validation(format!("{forest} forest vertices cannot be perfectly matched")));
    }
    for p in [cfg.join, cfg.x_density] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Validation(format!("probability {p} outside [0, 1]")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pairs = forest / 2;
    let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(forest + f * cfg.x_degree + f * f / 2);
    for i in 0..pairs {
        edges.push((2 * i, 2 * i + 1));
        if i > 0 && rng.gen_bool(cfg.join) {
            let own = 2 * i + rng.gen_range(0..2);
            edges.push((rng.gen_range(0..2 * i), own));
        }
    }
    let degree = cfg.x_degree.min(forest);
    for x in forest..cfg.n {
        for v in sample(&mut rng, forest, degree) {
            edges.push((v, x));
        }
    }
    for x in forest..cfg.n {
        for y in x + 1..cfg.n {
            if rng.gen_bool(cfg.x_density) {
                edges.push((x, y));
            }
        }
    }
    let graph = Graph::from_edges(cfg.n, &edges)?;
    let target = cfg.target.unwrap_or((pairs + f) as i64);
    Instance::new(graph, (forest..cfg.n).collect(), target, Problem::VertexCover, None)
}
