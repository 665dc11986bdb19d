mod common;

use proptest::prelude::*;

use friendly_cuts::cag::{build_cag, build_sparsified_cag, cag_totals, PartitionTree};
use friendly_cuts::expander::{decompose, Certification, DecomposeOptions, Phi};
use friendly_cuts::gomory_hu::{check_tree_consistency, friendly_mincut_contraction, gomory_hu};
use friendly_cuts::io::{parse_gh_tree, parse_graph, parse_sparsifier, serialize_gh_tree, serialize_graph, serialize_sparsifier};
use friendly_cuts::isolating::{isolating_cuts, isolating_cuts_direct};
use friendly_cuts::maxflow::max_flow;
use friendly_cuts::oracle::{all_pairs_min_cut_enumerated, classify_all_pairs, for_each_cut, FriendlinessClass};
use friendly_cuts::sparsifier::{friendly_sparsify, friendly_sparsify_oneshot, terminal_sparsify, verify_friendly_preservation, verify_terminal_preservation};
use friendly_cuts::unfriendly::{single_source_unfriendly, ExactEstimator, UnfriendlyConfig};
use friendly_cuts::{ContractionMap, Graph, Sparsifier, Weight};

fn weighted_graph(max_n: usize, max_w: Weight) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec((0..n, 0..n, 1..=max_w), 0..=n * (n - 1) / 2).prop_map(move |raw| {
            let edges: Vec<_> = raw.into_iter().filter(|&(u, v, _)| u != v).collect();
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn simple_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n, 0.15f64..0.8, any::<u64>())
        .prop_map(|(n, p, seed)| friendly_cuts::generators::gnp(n, p, &mut common::rng(seed)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn max_flow_matches_enumeration_and_side_is_minimal(g in weighted_graph(9, 6), s in 0usize..9, t in 0usize..9) {
        let n = g.node_count();
        let (s, t) = (s % n, t % n);
        prop_assume!(s != t);
        let cut = max_flow(&g, s, t).unwrap();
        let mut best = Weight::MAX;
        let mut minimal = vec![true; n];
        for_each_cut(&g, |c| {
            if c.mask[s] == c.mask[t] {
                return;
            }
            let side: Vec<bool> = (0..n).map(|v| c.mask[v] == c.mask[s]).collect();
            if c.value < best {
                best = c.value;
                minimal = side;
            } else if c.value == best {
                for v in 0..n {
                    minimal[v] &= side[v];
                }
            }
        }).unwrap();
        prop_assert_eq!(cut.value(), best);
        prop_assert_eq!(cut.mask(n), minimal);
    }

    #[test]
    fn gomory_hu_trees_are_cut_equivalent(g in weighted_graph(9, 5)) {
        let t = gomory_hu(&g);
        check_tree_consistency(&g, &t).unwrap();
        let lambda = all_pairs_min_cut_enumerated(&g).unwrap();
        for s in 0..g.node_count() {
            for u in 0..g.node_count() {
                if s != u {
                    let c = t.query(s, u).unwrap();
                    prop_assert_eq!(c.value(), lambda[s][u]);
                    prop_assert_eq!(g.cut_value(c.side()).unwrap(), c.value());
                }
            }
        }
        prop_assert_eq!(parse_gh_tree(&serialize_gh_tree(&t)).unwrap(), t);
    }

    #[test]
    fn contraction_keeps_values_of_unions_of_classes(g in weighted_graph(8, 4), labels in proptest::collection::vec(0usize..4, 8)) {
        let n = g.node_count();
        let map = ContractionMap::from_labels(&labels[..n]);
        let h = Sparsifier::from_map(&g, map).unwrap();
        for_each_cut(&h.graph, |c| {
            let side = h.map.preimage(c.mask);
            assert_eq!(g.cut_value(&side).unwrap(), c.value);
        }).unwrap();
        prop_assert_eq!(h.graph.total_weight() <= g.total_weight(), true);
    }

    #[test]
    fn isolating_cuts_match_direct(g in weighted_graph(12, 5), picks in proptest::collection::vec(0usize..12, 2..8)) {
        let n = g.node_count();
        let mut r: Vec<_> = picks.into_iter().map(|v| v % n).collect();
        r.sort_unstable();
        r.dedup();
        prop_assume!(r.len() >= 2);
        let fast = isolating_cuts(&g, &r).unwrap();
        let direct = isolating_cuts_direct(&g, &r).unwrap();
        for &v in &r {
            prop_assert_eq!(fast.get(v).unwrap(), direct.get(v).unwrap());
        }
    }

    #[test]
    fn graph_text_round_trips(g in weighted_graph(10, 1000)) {
        prop_assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }

    #[test]
    fn sparsifiers_preserve_small_friendly_cuts(g in simple_graph(12), w in 1u64..12, seed in any::<u64>()) {
        let cfg = common::stress_config(seed);
        for h in [friendly_sparsify(&g, w, &cfg).unwrap(), friendly_sparsify_oneshot(&g, w, &cfg).unwrap()] {
            let report = verify_friendly_preservation(&g, &h, w).unwrap();
            prop_assert!(report.passed(), "{:?}", report.violations);
            let text = serialize_sparsifier(&h, "iterative", w);
            prop_assert_eq!(parse_sparsifier(&text).unwrap().bind(&g).unwrap(), h);
        }
    }

    #[test]
    fn terminal_sparsifier_preserves_terminal_min_cuts(g in simple_graph(11), w in 1u64..10, picks in proptest::collection::vec(0usize..11, 1..5), seed in any::<u64>()) {
        let n = g.node_count();
        let terminals: Vec<_> = picks.into_iter().map(|v| v % n).collect();
        let h = terminal_sparsify(&g, &terminals, w, &common::stress_config(seed)).unwrap();
        let report = verify_terminal_preservation(&g, &h, &terminals, w).unwrap();
        prop_assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn decomposition_clusters_partition_and_certify(g in simple_graph(12), den in 2u64..12, seed in any::<u64>()) {
        let phi = Phi::new(1, den);
        let opts = DecomposeOptions { seed, ..DecomposeOptions::default() };
        let dec = decompose(&g, phi, None, &opts).unwrap();
        let mut seen = vec![false; g.node_count()];
        for (i, c) in dec.clusters.iter().enumerate() {
            for &v in c {
                prop_assert!(!seen[v]);
                seen[v] = true;
                prop_assert_eq!(dec.cluster_of[v], i);
            }
            prop_assert_eq!(dec.certification[i], Certification::Exact);
            // every internal cut of the cluster, boundary edges counting as volume
            let k = c.len();
            let deg = g.degrees();
            for bits in 1u32..(1 << k) - 1 {
                let inside = |x: usize| c.iter().position(|&y| y == x).is_some_and(|j| bits >> j & 1 == 1);
                let mut cut = 0;
                let (mut a, mut b) = (0, 0);
                for (j, &v) in c.iter().enumerate() {
                    if bits >> j & 1 == 1 { a += deg[v] } else { b += deg[v] }
                    if bits >> j & 1 == 1 {
                        cut += g.neighbors(v).iter().filter(|&&(y, _)| c.contains(&y) && !inside(y)).map(|e| e.1).sum::<Weight>();
                    }
                }
                let vol = a.min(b);
                prop_assert!(vol == 0 || Phi::new(cut, vol) >= phi, "cluster {:?} bits {:b}", c, bits);
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
        let outer: Weight = g.edges().iter().filter(|e| dec.cluster_of[e.0] != dec.cluster_of[e.1]).map(|e| e.2).sum();
        prop_assert_eq!(dec.outer_edges, outer);
    }

    #[test]
    fn unfriendly_min_cuts_are_found_exactly(g in simple_graph(10), p in 0usize..10) {
        let p = p % g.node_count();
        let classes = classify_all_pairs(&g).unwrap();
        let table = single_source_unfriendly(&g, p, &ExactEstimator, &UnfriendlyConfig::default()).unwrap().table;
        table.validate(&g).unwrap();
        for v in (0..g.node_count()).filter(|&v| v != p) {
            let c = classes[p][v].unwrap();
            let got = table.value(v).unwrap();
            prop_assert!(got >= c.value);
            if c.has_unfriendly() {
                prop_assert_eq!(got, c.value);
            }
        }
    }

    #[test]
    fn tree_sparsifier_keeps_all_friendly_pairs(g in simple_graph(11)) {
        let h = friendly_mincut_contraction(&g, &gomory_hu(&g)).unwrap();
        let classes = classify_all_pairs(&g).unwrap();
        for s in 0..g.node_count() {
            for t in s + 1..g.node_count() {
                let c = classes[s][t].unwrap();
                if c.class == FriendlinessClass::AllFriendly {
                    let (a, b) = (h.map.super_of(s), h.map.super_of(t));
                    prop_assert_ne!(a, b);
                    prop_assert_eq!(max_flow(&h.graph, a, b).unwrap().value(), c.value);
                }
            }
        }
    }

    #[test]
    fn cag_node_sum_and_identity(g in simple_graph(12), k in 1usize..12, seed in any::<u64>()) {
        let n = g.node_count();
        let pt = PartitionTree::random(&g, k.min(n), &mut common::rng(seed)).unwrap();
        let id = Sparsifier::identity(&g);
        for i in 0..pt.part_count() {
            prop_assert_eq!(build_sparsified_cag(&id, &pt, i).unwrap(), build_cag(&g, &pt, i).unwrap());
            prop_assert!(build_cag(&g, &pt, i).unwrap().node_count() <= pt.parts()[i].len() + pt.degree(i));
        }
        prop_assert!(cag_totals(&id, &pt).unwrap().nodes <= 3 * n);
    }
}
