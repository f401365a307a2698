mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use sublinear_motifs::decomposition::{decompose, validate, Rational};
use sublinear_motifs::exact::{count_motif, count_odd_cycles, count_stars, enumerate_motif};
use sublinear_motifs::graph::{motif_by_name, parse_edge_list, Graph, Motif};
use sublinear_motifs::hard_instances::{cc_gadget, DisjointnessInstance};
use sublinear_motifs::oracle::{LimitKind, Oracle, QueryError};

use common::{bfs_two_colorable, brute_copies, brute_cycles, brute_rho_halves, brute_stars};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let edges: Vec<_> = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(e, _)| *e).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

/// Connected graphs: a random tree plus random extra edges.
fn connected_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let parents = proptest::collection::vec(any::<prop::sample::Index>(), n - 1);
        let extra = proptest::collection::vec((0..n, 0..n), 0..n * 2);
        (parents, extra).prop_map(move |(parents, extra)| {
            let mut e = BTreeSet::new();
            for (i, p) in parents.iter().enumerate() {
                let v = i + 1;
                e.insert((p.index(v), v));
            }
            for (a, b) in extra {
                if a != b {
                    e.insert((a.min(b), a.max(b)));
                }
            }
            Graph::from_edges(n, &e.into_iter().collect::<Vec<_>>()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_list_round_trip(g in graph_strategy(12)) {
        let back = parse_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(back.m(), g.degrees().iter().sum::<usize>());
    }

    #[test]
    fn neighbors_are_symmetric(g in graph_strategy(12)) {
        for u in 0..g.n() {
            for &v in g.neighbors(u) {
                prop_assert!(g.has_edge(v, u));
            }
        }
        prop_assert_eq!(g.m(), 2 * g.edge_count());
    }

    #[test]
    fn motif_counts_match_brute_force(g in graph_strategy(7)) {
        for name in ["edge", "P3", "P4", "triangle", "C4", "paw", "S3", "diamond", "K4", "C5"] {
            let h = motif_by_name(name).unwrap();
            prop_assert_eq!(count_motif(&g, &h) as usize, brute_copies(&g, h.graph()), "{}", name);
        }
    }

    #[test]
    fn enumerated_copies_are_distinct_and_valid(g in graph_strategy(7)) {
        let h = motif_by_name("paw").unwrap();
        let copies = enumerate_motif(&g, &h);
        let keys: BTreeSet<_> = copies.iter().map(|c| c.key.clone()).collect();
        prop_assert_eq!(keys.len(), copies.len());
        prop_assert!(copies.iter().all(|c| c.is_valid_in(&h, &g)));
    }

    #[test]
    fn stars_and_cycles_match_brute_force(g in graph_strategy(9)) {
        for p in 1..=4 {
            prop_assert_eq!(count_stars(&g, p), brute_stars(&g, p));
        }
        for k in [3, 5, 7] {
            prop_assert_eq!(count_odd_cycles(&g, k).unwrap(), brute_cycles(&g, k));
        }
    }

    #[test]
    fn decomposition_is_optimal(g in connected_strategy(7)) {
        let h = Motif::new(g.clone(), Some("random")).unwrap();
        let d = decompose(&h).unwrap();
        let brute = brute_rho_halves(&g).unwrap();
        prop_assert_eq!(d.rho(), Rational::new(brute as u64, 2));
        prop_assert!(validate(&h, &d).is_empty());
    }

    #[test]
    fn bit_matrices_round_trip(n in 1usize..8, seed in any::<u64>(), hits in 0usize..4) {
        let t = hits.min(n * n).max(1);
        let inst = DisjointnessInstance::random(n, hits.min(t), t, seed).unwrap();
        let (x, y) = inst.to_bit_matrices();
        let back = DisjointnessInstance::from_bit_matrices(&x, &y, t).unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn oracle_counts_every_query(seed in any::<u64>(), ops in proptest::collection::vec((0u8..4, 0usize..6, 0usize..8), 1..60)) {
        let g = Graph::cycle(6);
        let mut o = Oracle::new(&g, seed);
        let mut fails = 0;
        for &(op, v, i) in &ops {
            match op {
                0 => { o.degree(v).unwrap(); }
                1 => {
                    let r = o.neighbor(v, i + 1).unwrap();
                    fails += r.is_none() as u64;
                    prop_assert_eq!(r.is_none(), i + 1 > 2);
                }
                2 => { o.pair(v, (v + 1 + i % 5) % 6).unwrap(); }
                _ => { o.uniform_edge().unwrap(); }
            }
        }
        let s = o.stats();
        prop_assert_eq!(s.total, ops.len() as u64);
        prop_assert_eq!(s.degree + s.neighbor + s.pair + s.uniform_edge, s.total);
        prop_assert!(s.neighbor >= fails);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cc_gadget_invariants(k1 in prop::sample::select(vec![3usize, 5]), side in 3usize..7, seed in any::<u64>(), t_raw in 1usize..6) {
        let t = t_raw.min(side);
        let no = DisjointnessInstance::random(side, 0, t, seed).unwrap();
        let yes = DisjointnessInstance::random(side, t, t, seed).unwrap();
        let g_no = cc_gadget(k1, side, &no).unwrap();
        let g_yes = cc_gadget(k1, side, &yes).unwrap();
        prop_assert!(bfs_two_colorable(&g_no.graph));
        prop_assert_eq!(brute_cycles(&g_yes.graph, k1), (t * side.pow(k1 as u32 - 2)) as u64);
        prop_assert_eq!(g_no.graph.degrees(), g_yes.graph.degrees());
        prop_assert_eq!(g_yes.crucial_edges.len(), t);
        let mut hidden = g_yes.crucial_edges.clone();
        hidden.extend(&g_yes.twin_edges);
        prop_assert!(bfs_two_colorable(&g_yes.graph.without_edges(&hidden)));
    }
}

#[test]
fn budget_stops_queries() {
    let g = Graph::complete(4);
    let mut o = Oracle::new(&g, 1).with_budget(Some(3));
    for _ in 0..3 {
        o.degree(0).unwrap();
    }
    assert_eq!(o.degree(0), Err(QueryError::LimitReached { kind: LimitKind::Budget, limit: 3 }));
    assert!(o.stats().budget_exhausted);
    assert_eq!(o.stats().total, 3);
}
