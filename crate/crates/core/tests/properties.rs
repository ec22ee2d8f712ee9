use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vck::matching::two_coloring;
use vck::oracle::{exact_alpha, exact_alpha_weighted, exact_fvs, fpt_alpha};
use vck::{
    alpha_forest, alpha_forest_avoiding, approx_fvs, clean, conf, cross_compose, emit_instance, kernelize, lift_is,
    lift_vc, max_matching_bipartite, min_vc_bipartite, mis_forest_avoiding, nt_decompose, pack, parse_instance,
    perfect_matching_forest, subdivide_to_p2split, to_is, Graph, Instance, KernelOptions, Matching, P2SplitInstance,
    Problem, Reducer, Vertex,
};

fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut i = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits[i] {
                edges.push((u, v));
            }
            i += 1;
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn graph(max_n: usize, p: f64) -> impl Strategy<Value = Graph> {
    (1..=max_n)
        .prop_flat_map(move |n| (Just(n), proptest::collection::vec(proptest::bool::weighted(p), n * (n - 1) / 2)))
        .prop_map(|(n, bits)| graph_from_bits(n, &bits))
}

/// Forest where vertex `v > 0` hangs off an earlier vertex unless cut.
fn forest(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            proptest::collection::vec((any::<prop::sample::Index>(), proptest::bool::weighted(0.8)), n - 1)
        })
        .prop_map(|links| {
            let n = links.len() + 1;
            let edges: Vec<_> =
                links.iter().enumerate().filter(|(_, l)| l.1).map(|(i, l)| (l.0.index(i + 1), i + 1)).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
}

/// Tree built from matched pairs `(2i, 2i+1)`, each attached to an earlier vertex.
fn matched_tree(max_pairs: usize) -> impl Strategy<Value = (Graph, Matching)> {
    (1..=max_pairs)
        .prop_flat_map(|p| proptest::collection::vec((any::<prop::sample::Index>(), any::<bool>()), p - 1))
        .prop_map(|links| {
            let n = 2 * (links.len() + 1);
            let pairs: Vec<_> = (0..n / 2).map(|i| (2 * i, 2 * i + 1)).collect();
            let mut edges = pairs.clone();
            for (i, (at, side)) in links.iter().enumerate() {
                let p = i + 1;
                edges.push((at.index(2 * p), 2 * p + usize::from(*side)));
            }
            (Graph::from_edges(n, &edges).unwrap(), Matching::from_edges(n, &pairs).unwrap())
        })
}

fn brute_alpha_avoiding(f: &Graph, avoid: &[Vertex]) -> usize {
    let n = f.capacity();
    let mut best = 0;
    for s in 0u32..1 << n {
        let set: Vec<Vertex> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
        if set.iter().any(|v| avoid.contains(v)) {
            continue;
        }
        if set.iter().all(|&u| f.neighbors(u).iter().all(|&w| s >> w & 1 == 0)) {
            best = best.max(set.len());
        }
    }
    best
}

/// DFS that reports a back edge, as an independent cycle check.
fn has_cycle(g: &Graph) -> bool {
    let mut seen = vec![false; g.capacity()];
    for root in g.vertices() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![(root, usize::MAX)];
        while let Some((v, from)) = stack.pop() {
            for &u in g.neighbors(v) {
                if u == from {
                    continue;
                }
                if seen[u] {
                    return true;
                }
                seen[u] = true;
                stack.push((u, v));
            }
        }
    }
    false
}

fn clean_instance(g: &Graph) -> Instance {
    let x = exact_fvs(g).unwrap();
    let inst = Instance::new(g.clone(), x, 0, Problem::IndependentSet, None).unwrap();
    clean(&inst).unwrap().0
}

fn dense_alpha(g: &Graph) -> usize {
    exact_alpha(&g.compact().0).unwrap()
}

type Attempt = (usize, Box<dyn Fn(&mut Reducer) -> vck::Result<()>>);

/// Every rule application whose arguments are shaped right; preconditions
/// are left for the session to check.
fn attempts(inst: &Instance) -> Vec<Attempt> {
    let x = inst.fvs.clone();
    let f = inst.graph.delete_vertices(&x).unwrap();
    let mut out: Vec<Attempt> = Vec::new();
    for &a in &x {
        out.push((1, Box::new(move |r| r.apply_rule1(a))));
        for &b in &x {
            if a < b {
                out.push((2, Box::new(move |r| r.apply_rule2(a, b))));
            }
        }
    }
    for tree in f.connected_components() {
        out.push((3, Box::new(move |r| r.apply_rule3(&tree))));
    }
    for (u, v) in f.edges() {
        out.push((4, Box::new(move |r| r.apply_rule4(u, v))));
    }
    for u in f.vertices() {
        for &v in f.neighbors(u) {
            for &t in f.neighbors(u) {
                for &w in f.neighbors(v) {
                    if t != v && w != u {
                        out.push((5, Box::new(move |r| r.apply_rule5(t, u, v, w))));
                    }
                }
            }
        }
    }
    out
}

/// Applies each legal rule once to a copy; returns which rules fired.
fn check_rule_soundness(g: &Graph) -> [bool; 5] {
    let inst = clean_instance(g);
    let before = dense_alpha(&inst.graph);
    let base = Reducer::new(&inst).unwrap();
    let mut fired = [false; 5];
    for (rule, apply) in attempts(&inst) {
        let mut r = base.clone();
        if apply(&mut r).is_err() {
            continue;
        }
        fired[rule - 1] = true;
        let offset = r.records().last().map_or(0, |rec| rec.offset());
        let after = r.instance();
        assert_eq!(dense_alpha(&after.graph) + offset, before, "rule {rule} on {g:?}");
        assert_eq!(after.target, inst.target - offset as i64);
        let forest = after.graph.delete_vertices(&after.fvs).unwrap();
        assert!(perfect_matching_forest(&forest).unwrap().is_some(), "rule {rule} broke the matching");
    }
    fired
}

#[test]
fn each_rule_fires_somewhere_in_a_seeded_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut fired = [false; 5];
    for _ in 0..400 {
        let n = rng.gen_range(4..=12);
        let bits: Vec<bool> = (0..n * (n - 1) / 2).map(|_| rng.gen_bool(0.3)).collect();
        for (seen, now) in fired.iter_mut().zip(check_rule_soundness(&graph_from_bits(n, &bits))) {
            *seen |= now;
        }
    }
    assert_eq!(fired, [true; 5]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn deletion_removes_only_the_set(g in graph(12, 0.4), picks in proptest::collection::vec(0usize..12, 0..5)) {
        let s: Vec<Vertex> = picks.into_iter().filter(|&v| v < g.capacity()).collect();
        let h = g.delete_vertices(&s).unwrap();
        prop_assert!(s.iter().all(|&v| !h.contains(v)));
        prop_assert!(h.edges().all(|(u, v)| g.has_edge(u, v)));
        let kept = g.edges().filter(|&(u, v)| !s.contains(&u) && !s.contains(&v)).count();
        prop_assert_eq!(h.num_edges(), kept);
    }

    #[test]
    fn emit_then_parse_is_identity(g in graph(10, 0.3), k in 0i64..10, weighted in any::<bool>(), vc in any::<bool>()) {
        let x = approx_fvs(&g);
        let weights = weighted.then(|| (0..g.capacity() as u64).map(|v| v % 3 + 1).collect());
        let problem = if vc { Problem::VertexCover } else { Problem::IndependentSet };
        let inst = Instance::new(g, x, k, problem, weights).unwrap();
        prop_assert_eq!(parse_instance(&emit_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn forest_test_matches_dfs(g in graph(10, 0.2)) {
        prop_assert_eq!(g.is_forest(), !has_cycle(&g));
    }

    #[test]
    fn konig_on_bipartite(left in 1usize..7, right in 1usize..7, bits in proptest::collection::vec(proptest::bool::weighted(0.4), 36)) {
        let mut edges = Vec::new();
        for a in 0..left {
            for b in 0..right {
                if bits[a * 6 + b] {
                    edges.push((a, left + b));
                }
            }
        }
        let g = Graph::from_edges(left + right, &edges).unwrap();
        let side: Vec<bool> = (0..left + right).map(|v| v < left).collect();
        let m = max_matching_bipartite(&g, &side).unwrap();
        let cover = min_vc_bipartite(&g, &side, &m).unwrap();
        prop_assert!(g.is_vertex_cover(&cover));
        prop_assert_eq!(cover.len(), m.len());
        prop_assert_eq!(cover.len(), g.num_vertices() - dense_alpha(&g));
        prop_assert!(two_coloring(&g).is_some());
    }

    #[test]
    fn matched_forest_facts((t, m) in matched_tree(10)) {
        let n = t.num_vertices();
        prop_assert_eq!(alpha_forest(&t).unwrap(), n / 2);
        prop_assert_eq!(m.len(), n / 2);
        prop_assert!(perfect_matching_forest(&t).unwrap().is_some());
        for v in t.vertices() {
            let leaves = t.neighbors(v).iter().filter(|&&u| t.degree(u) == 1).count();
            prop_assert!(leaves <= 1 || n == 2);
        }
    }

    #[test]
    fn forest_alpha_agrees_with_enumeration(f in forest(12), avoid in proptest::collection::vec(0usize..12, 0..4)) {
        let avoid: Vec<Vertex> = avoid.into_iter().filter(|&v| v < f.capacity()).collect();
        prop_assert_eq!(alpha_forest(&f).unwrap(), brute_alpha_avoiding(&f, &[]));
        let a = alpha_forest_avoiding(&f, &avoid).unwrap();
        prop_assert_eq!(a, brute_alpha_avoiding(&f, &avoid));
        let set = mis_forest_avoiding(&f, &avoid).unwrap();
        prop_assert!(f.is_independent(&set));
        prop_assert!(set.iter().all(|v| !avoid.contains(v)));
        prop_assert_eq!(set.len(), a);
    }

    #[test]
    fn avoiding_more_never_helps(f in forest(14), a in proptest::collection::vec(0usize..14, 0..4), extra in proptest::collection::vec(0usize..14, 0..4)) {
        let small: Vec<Vertex> = a.into_iter().filter(|&v| v < f.capacity()).collect();
        let mut large = small.clone();
        large.extend(extra.into_iter().filter(|&v| v < f.capacity()));
        prop_assert!(alpha_forest_avoiding(&f, &small).unwrap() >= alpha_forest_avoiding(&f, &large).unwrap());
    }

    #[test]
    fn empty_chunk_has_no_conflict(g in graph(10, 0.3)) {
        let x = approx_fvs(&g);
        let f: Vec<Vertex> = g.delete_vertices(&x).unwrap().vertices().collect();
        prop_assert_eq!(conf(&g, &f, &[]).unwrap(), 0);
    }

    #[test]
    fn crown_decomposition_facts(g in graph(12, 0.3)) {
        let nt = nt_decompose(&g).unwrap();
        prop_assert_eq!(nt.c0.len() + nt.v0.len() + nt.j.len(), g.num_vertices());
        let core = g.induced_subgraph(&nt.v0).unwrap();
        let core_alpha = dense_alpha(&core);
        prop_assert_eq!(dense_alpha(&g), nt.j.len() + core_alpha);
        prop_assert!(2 * core_alpha <= nt.v0.len());
        prop_assert!(g.is_independent(&nt.j));
    }

    #[test]
    fn approx_fvs_is_deterministic_and_valid(g in graph(11, 0.35)) {
        let x = approx_fvs(&g);
        prop_assert_eq!(&x, &approx_fvs(&g));
        prop_assert!(g.delete_vertices(&x).unwrap().is_forest());
        prop_assert!(x.len() <= 2 * exact_fvs(&g).unwrap().len());
    }

    #[test]
    fn oracles_agree(g in graph(12, 0.3)) {
        let a = exact_alpha(&g).unwrap();
        prop_assert_eq!(fpt_alpha(&g, &exact_fvs(&g).unwrap()).unwrap(), a);
        prop_assert_eq!(fpt_alpha(&g, &approx_fvs(&g)).unwrap(), a);
        prop_assert_eq!(exact_alpha_weighted(&g, &vec![1; g.capacity()]).unwrap(), a as u64);
    }

    #[test]
    fn every_rule_application_is_sound(g in graph(11, 0.35)) {
        check_rule_soundness(&g);
    }

    #[test]
    fn lifting_cover_is_complement_of_lifted_set(g in graph(11, 0.35), picks in proptest::collection::vec(any::<bool>(), 12)) {
        let x = exact_fvs(&g).unwrap();
        let inst = Instance::new(g.clone(), x, 0, Problem::VertexCover, None).unwrap();
        let k = kernelize(&inst, KernelOptions::lifting()).unwrap();
        let kg = &k.instance.graph;
        let mut set: Vec<Vertex> = Vec::new();
        for v in kg.vertices() {
            if picks[v % 12] && kg.neighbors(v).iter().all(|u| !set.contains(u)) {
                set.push(v);
            }
        }
        let cover: Vec<Vertex> = kg.vertices().filter(|v| !set.contains(v)).collect();
        let mut lifted_cover = lift_vc(&k.trace, kg, &cover).unwrap();
        let lifted_set = lift_is(&k.trace, kg, &set).unwrap();
        let mut complement: Vec<Vertex> = g.vertices().filter(|v| !lifted_set.contains(v)).collect();
        lifted_cover.sort_unstable();
        complement.sort_unstable();
        prop_assert_eq!(lifted_cover, complement);
    }

    #[test]
    fn composite_cover_and_weights(seeds in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 8), 1..5)) {
        let inputs: Vec<P2SplitInstance> = seeds
            .iter()
            .map(|bits| {
                let mut edges = vec![(2, 3), (4, 5)];
                for (i, &b) in bits.iter().enumerate() {
                    if b {
                        edges.push((i / 4, 2 + i % 4));
                    }
                }
                P2SplitInstance::new(Graph::from_edges(6, &edges).unwrap(), vec![0, 1], 3).unwrap()
            })
            .collect();
        let c = cross_compose(&inputs).unwrap();
        let g = &c.instance.graph;
        prop_assert!(g.is_vertex_cover(&c.instance.fvs));
        let t = c.slots();
        prop_assert!(t.is_power_of_two() && t >= 2 && t >= inputs.len());
        let log_t = t.trailing_zeros() as usize;
        prop_assert_eq!(c.instance.fvs.len(), 2 * 2 + 2 * log_t);
        prop_assert!(c.instance.fvs.len() <= 2 * 6 + 2 * log_t);
        let mut classes: Vec<u64> = g.vertices().map(|v| c.instance.weight(v)).collect();
        classes.sort_unstable();
        classes.dedup();
        prop_assert_eq!(classes, vec![1, t as u64 * 7]);
    }

    #[test]
    fn subdivision_is_a_valid_split(g in graph(8, 0.4), k in 0i64..5) {
        let s = subdivide_to_p2split(&g, k);
        let again = P2SplitInstance::new(s.graph.clone(), s.y.clone(), s.target).unwrap();
        prop_assert_eq!(&again, &s);
        prop_assert_eq!(s.target, k + g.num_edges() as i64);
        prop_assert_eq!(s.graph.num_vertices(), g.num_vertices() + 2 * g.num_edges());
    }

    #[test]
    fn ledger_operation_deltas((t, m) in matched_tree(40)) {
        let (structures, ledger) = pack(&t, &m).unwrap();
        prop_assert!(ledger.holds());
        prop_assert!(14 * structures.len() >= t.num_vertices());
        for s in &ledger.steps {
            match s.op {
                2 => prop_assert_eq!((s.d_open, s.d_structures, s.d_spikes, s.d_vertices), (0, 0, 1, 1)),
                3 => {
                    prop_assert_eq!((s.d_open, s.d_structures, s.d_vertices), (0, 1, 4));
                    prop_assert!(s.d_spikes >= -1);
                }
                _ => {}
            }
        }
    }
}

#[test]
fn to_is_complements_the_target() {
    let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let inst = Instance::new(g, vec![], 1, Problem::VertexCover, None).unwrap();
    let is = to_is(&inst);
    assert_eq!(is.problem, Problem::IndependentSet);
    assert_eq!(is.target, 2);
}
