//! Property tests: exact deltas agree with cost differences, enumeration
//! oracles agree with the transition-graph builder, and serialization is a
//! bit-exact round trip.

use plslab::engine::{
    build_transition_graph, enumerate_solutions, run_local_search, initial_solution, PivotRule,
    DEFAULT_CAP,
};
use plslab::exact::{int, parse_rat, format_rat, PointMatrix, SqrtCoord, rat};
use plslab::graph::WeightedGraph;
use plslab::io::{from_json, to_canonical_json, InstanceFile};
use plslab::problems::{cost, flip_delta, neighbors, Evaluator, Instance, ProblemKind};
use plslab::verify::{enumerate_local_optima, random_instance};
use proptest::prelude::*;

fn arb_kind() -> impl Strategy<Value = ProblemKind> {
    prop_oneof![
        Just(ProblemKind::MaxCut),
        Just(ProblemKind::MaxCutDeg5),
        Just(ProblemKind::OddHalfPosNae3Sat),
        Just(ProblemKind::OddHalfPosNae2Sat),
        Just(ProblemKind::OddMaxBisection),
        Just(ProblemKind::OddMinBisection),
        Just(ProblemKind::DensestCut),
        Just(ProblemKind::SparsestCut),
        Just(ProblemKind::KMeans(2)),
        Just(ProblemKind::KMeans(3)),
        Just(ProblemKind::SqEuclideanMaxCut),
    ]
}

fn arb_instance() -> impl Strategy<Value = Instance> {
    (arb_kind(), 3usize..=6, 1u32..=8, 0u64..1000).prop_map(|(kind, n, wmax, seed)| {
        let n = if n % 2 == 0 { n + 1 } else { n };
        random_instance(kind, n, wmax, seed).expect("generator accepts odd sizes")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_matches_cost_difference(inst in arb_instance(), picks in proptest::collection::vec(0usize..1 << 16, 4)) {
        let ev = Evaluator::new(&inst).unwrap();
        let solutions = enumerate_solutions(&inst, DEFAULT_CAP).unwrap();
        for pick in picks {
            let s = &solutions[pick % solutions.len()];
            let base = ev.cost(s).unwrap();
            for m in ev.moves(s).unwrap() {
                let d = ev.delta(s, m).unwrap();
                let t = ev.apply(s, m).unwrap();
                prop_assert_eq!(&base + &d, ev.cost(&t).unwrap());
                prop_assert_eq!(d, flip_delta(&inst, s, m.element, m.target).unwrap());
            }
        }
    }

    #[test]
    fn oracle_equals_transition_sinks(inst in arb_instance()) {
        let oracle = enumerate_local_optima(&inst, DEFAULT_CAP).unwrap();
        let tg = build_transition_graph(&inst, DEFAULT_CAP).unwrap();
        let sinks: Vec<_> = tg.sinks().into_iter().map(|i| tg.nodes[i].clone()).collect();
        prop_assert_eq!(oracle, sinks);
    }

    #[test]
    fn heights_satisfy_bfs_recurrence(inst in arb_instance()) {
        let tg = build_transition_graph(&inst, DEFAULT_CAP).unwrap();
        for i in 0..tg.nodes.len() {
            if tg.arcs[i].is_empty() {
                prop_assert_eq!(tg.heights[i], 0);
            } else {
                let best = tg.arcs[i].iter().map(|(j, _)| tg.heights[*j]).min().unwrap();
                prop_assert_eq!(tg.heights[i], best + 1);
            }
        }
    }

    #[test]
    fn local_search_reaches_a_sink_deterministically(inst in arb_instance()) {
        let start = initial_solution(&inst).unwrap();
        for rule in [PivotRule::FirstImprovement, PivotRule::BestImprovement] {
            let a = run_local_search(&inst, start.clone(), rule, None).unwrap();
            let b = run_local_search(&inst, start.clone(), rule, None).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert!(!a.truncated);
            prop_assert!(plslab::engine::is_local_optimum(&inst, &a.final_solution).unwrap());
            // costs strictly improve along the trace
            let mut c = cost(&inst, &a.start).unwrap();
            for (_, _, d) in &a.moves {
                let next = &c + d;
                match inst.kind.orientation() {
                    plslab::problems::Orientation::Maximize => prop_assert!(next > c),
                    plslab::problems::Orientation::Minimize => prop_assert!(next < c),
                }
                c = next;
            }
            prop_assert_eq!(c, cost(&inst, &a.final_solution).unwrap());
        }
    }

    #[test]
    fn neighbor_relation_is_symmetric_for_cuts(inst in (3usize..=6, 1u32..=6, 0u64..500).prop_map(|(n, w, s)| random_instance(ProblemKind::MaxCut, n, w, s).unwrap())) {
        let solutions = enumerate_solutions(&inst, DEFAULT_CAP).unwrap();
        for s in solutions.iter().take(8) {
            for t in neighbors(&inst, s).unwrap() {
                let back = neighbors(&inst, &t).unwrap();
                prop_assert!(back.contains(s));
            }
        }
    }

    #[test]
    fn instance_files_roundtrip(inst in arb_instance()) {
        let file = InstanceFile::from_instance(&inst);
        let json = to_canonical_json(&file).unwrap();
        let parsed: InstanceFile = from_json(&json).unwrap();
        prop_assert_eq!(&parsed, &file);
        prop_assert_eq!(parsed.to_instance().unwrap(), inst);
        prop_assert_eq!(to_canonical_json(&file).unwrap(), json);
    }

    #[test]
    fn rational_parse_format_roundtrip(num in -1000i64..1000, den in 1i64..1000) {
        let r = rat(num, den);
        prop_assert_eq!(parse_rat(&format_rat(&r)).unwrap(), r);
    }
}

#[test]
fn squared_distance_symmetry_and_identity() {
    let rows = vec![
        vec![SqrtCoord::sqrt(rat(2, 1)).unwrap(), SqrtCoord::zero()],
        vec![SqrtCoord::neg_sqrt(rat(2, 1)).unwrap(), SqrtCoord::from_int(&int(3))],
        vec![SqrtCoord::zero(), SqrtCoord::from_int(&int(-3))],
    ];
    let m = PointMatrix::new(rows).unwrap();
    for i in 0..3 {
        assert_eq!(m.squared_distance(i, i).unwrap(), rat(0, 1));
        for j in 0..3 {
            assert_eq!(m.squared_distance(i, j).unwrap(), m.squared_distance(j, i).unwrap());
        }
    }
    assert_eq!(m.squared_distance(0, 1).unwrap(), rat(17, 1));
}

#[test]
fn huge_weights_roundtrip() {
    // r6 on a 9-vertex bisection produces weights far beyond machine range
    let src = random_instance(ProblemKind::OddMaxBisection, 9, 1000, 5).unwrap();
    let (target, _) = plslab::reductions::r6_densest(&src).unwrap();
    let file = InstanceFile::from_instance(&target);
    let json = to_canonical_json(&file).unwrap();
    let parsed: InstanceFile = from_json(&json).unwrap();
    assert_eq!(parsed.to_instance().unwrap(), target);
}

#[test]
fn zero_weight_edges_are_cost_invisible_but_count_for_degree() {
    let mut a = WeightedGraph::new(3);
    a.add_edge(0, 1, int(2)).unwrap();
    a.add_edge(1, 2, int(0)).unwrap();
    let mut b = WeightedGraph::new(3);
    b.add_edge(0, 1, int(2)).unwrap();
    assert_eq!(a.degree(1), 2);
    assert_eq!(b.degree(1), 1);
    let ia = Instance::graph(ProblemKind::MaxCut, a).unwrap();
    let ib = Instance::graph(ProblemKind::MaxCut, b).unwrap();
    for s in enumerate_solutions(&ia, DEFAULT_CAP).unwrap() {
        assert_eq!(cost(&ia, &s).unwrap(), cost(&ib, &s).unwrap());
    }
}
