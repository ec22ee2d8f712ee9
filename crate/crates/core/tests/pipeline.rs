use proptest::prelude::*;
use vck::oracle::{exact_alpha, exact_fvs, exact_mis};
use vck::{
    kernelize, lift_is, lift_vc, parse_trace, replay_forward, serialize_trace, Graph, Instance, KernelOptions, Problem,
};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (Just(n), proptest::collection::vec(proptest::bool::weighted(0.35), pairs))
        })
        .prop_map(|(n, bits)| {
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
        })
}

fn instance(g: &Graph, k: i64, problem: Problem) -> Instance {
    let x = exact_fvs(g).unwrap();
    Instance::new(g.clone(), x, k, problem, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn decision_is_preserved(g in graph_strategy(11), k in 0i64..12) {
        let inst = instance(&g, k, Problem::IndependentSet);
        let kernel = kernelize(&inst, KernelOptions::default()).unwrap();
        let before = exact_alpha(&g).unwrap() as i64 >= k;
        let after = exact_alpha(&kernel.instance.graph).unwrap() as i64 >= kernel.instance.target;
        prop_assert_eq!(before, after);
        prop_assert!(kernel.instance.fvs.len() <= 2 * inst.fvs.len());
    }

    #[test]
    fn optimal_solutions_lift_to_optimal(g in graph_strategy(11)) {
        let inst = instance(&g, 0, Problem::VertexCover);
        let kernel = kernelize(&inst, KernelOptions::lifting()).unwrap();
        let kg = &kernel.instance.graph;
        prop_assert_eq!(&replay_forward(&inst, &kernel.trace).unwrap(), &kernel.instance);
        let text = serialize_trace(&kernel.trace);
        prop_assert_eq!(&parse_trace(&text).unwrap(), &kernel.trace);

        let alpha = exact_alpha(&g).unwrap();
        let mis = exact_mis(kg).unwrap();
        let lifted = lift_is(&kernel.trace, kg, &mis).unwrap();
        prop_assert!(g.is_independent(&lifted));
        prop_assert_eq!(lifted.len(), alpha);

        let in_mis: Vec<bool> = (0..kg.capacity()).map(|v| mis.contains(&v)).collect();
        let cover: Vec<usize> = kg.vertices().filter(|&v| !in_mis[v]).collect();
        let lifted_cover = lift_vc(&kernel.trace, kg, &cover).unwrap();
        prop_assert!(g.is_vertex_cover(&lifted_cover));
        prop_assert_eq!(lifted_cover.len(), g.num_vertices() - alpha);
        prop_assert_eq!(lifted_cover.len() as i64, cover.len() as i64 + kernel.trace.cover_offset());
    }

    #[test]
    fn any_independent_set_lifts_with_the_offset(g in graph_strategy(12), picks in proptest::collection::vec(any::<usize>(), 0..6)) {
        let inst = instance(&g, 0, Problem::IndependentSet);
        let kernel = kernelize(&inst, KernelOptions::lifting()).unwrap();
        let kg = &kernel.instance.graph;
        let mut set: Vec<usize> = Vec::new();
        if kg.num_vertices() > 0 {
            for p in picks {
                let v = p % kg.num_vertices();
                if !set.contains(&v) && kg.neighbors(v).iter().all(|u| !set.contains(u)) {
                    set.push(v);
                }
            }
        }
        let lifted = lift_is(&kernel.trace, kg, &set).unwrap();
        prop_assert!(g.is_independent(&lifted));
        prop_assert_eq!(lifted.len(), set.len() + kernel.trace.offset());
    }
}
