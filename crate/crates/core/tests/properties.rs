//! Cross-module properties on small random graphs, checked against the
//! exhaustive oracles.

use monocycle::covers::posa_cover;
use monocycle::graph::io::{parse_text, to_text};
use monocycle::graph::oracles::{
    component_cover_within, exact_min_component_cover, exact_min_cycle_partition, exhaustive_b_weighting,
    independence_number, CoverCaps, PartitionCaps,
};
use monocycle::graph::validate_family;
use monocycle::matching::{has_perfect_2matching, perfect_b_matching, BMatchingConfig, TwoMatching};
use monocycle::{Colour, ColouredGraph, SimpleGraph};
use proptest::prelude::*;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn simple_graph(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |keep| {
            let edges = pairs(n).into_iter().zip(keep).filter(|&(_, k)| k).map(|(e, _)| e);
            SimpleGraph::from_edges(n, edges.collect::<Vec<_>>())
        })
    })
}

fn coloured_graph(max_n: usize, r: Colour) -> impl Strategy<Value = ColouredGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(0..=r, n * (n - 1) / 2).prop_map(move |cols| {
            let edges = pairs(n)
                .into_iter()
                .zip(cols)
                .filter(|&(_, c)| c > 0)
                .map(|((u, v), c)| (u, v, c));
            ColouredGraph::from_edges(n, r, edges.collect::<Vec<_>>()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn two_matching_agrees_with_the_weighting_search(g in simple_graph(8)) {
        let oracle = exhaustive_b_weighting(&g, &vec![2; g.order()]).unwrap().is_some();
        match has_perfect_2matching(&g) {
            TwoMatching::Found { weighting } => {
                prop_assert!(oracle);
                prop_assert!(weighting.is_perfect(&g));
            }
            TwoMatching::Obstruction { set, neighbourhood } => {
                prop_assert!(!oracle);
                prop_assert!(neighbourhood.len() < set.len());
                for &u in &set {
                    for v in g.neighbours(u) {
                        prop_assert!(neighbourhood.contains(&v));
                    }
                }
            }
        }
    }

    #[test]
    fn b_matchings_meet_their_targets(
        g in simple_graph(7),
        seed in prop::collection::vec(0u64..5, 7),
    ) {
        let b: Vec<u64> = seed[..g.order()].to_vec();
        // routing along shortest paths can reject targets that do have a
        // b-matching, so only soundness is checked
        if let Ok(w) = perfect_b_matching(&g, &b, None, &BMatchingConfig::default()) {
            prop_assert_eq!(w.weighted_degrees(), b);
            prop_assert!(w.violation(&g).is_none());
        }
    }

    #[test]
    fn posa_pieces_partition_and_stay_below_alpha(g in simple_graph(12)) {
        let alpha = independence_number(&g).unwrap();
        let cover = posa_cover(&g);
        prop_assert!(cover.count() <= alpha);
        prop_assert!(cover.trace_holds());
        let family = cover.into_family(1);
        let verdict = validate_family(&ColouredGraph::from_simple(&g, 1, 1), &family, true);
        prop_assert!(verdict.accepted, "{:?}", verdict.violation);
    }

    #[test]
    fn exact_partition_is_valid_and_beats_posa(g in simple_graph(9)) {
        let cg = ColouredGraph::from_simple(&g, 1, 1);
        let (k, family) = exact_min_cycle_partition(&cg, PartitionCaps::default()).unwrap();
        prop_assert_eq!(family.count(), k);
        prop_assert!(validate_family(&cg, &family, true).accepted);
        prop_assert!(k <= posa_cover(&g).count());
    }

    #[test]
    fn coloured_partitions_are_valid(g in coloured_graph(8, 2)) {
        let (k, family) = exact_min_cycle_partition(&g, PartitionCaps::default()).unwrap();
        prop_assert!(validate_family(&g, &family, true).accepted);
        prop_assert!(k <= g.order());
    }

    #[test]
    fn component_cover_enumeration_matches_branch_and_bound(g in coloured_graph(8, 3)) {
        let targets: Vec<usize> = (0..g.order()).step_by(2).collect();
        let (k, chosen) = exact_min_component_cover(&g, &targets, CoverCaps::default()).unwrap();
        let union: Vec<usize> = chosen.iter().flat_map(|c| c.vertices.iter().copied()).collect();
        prop_assert!(targets.iter().all(|t| union.contains(t)));
        prop_assert!(component_cover_within(&g, &targets, k, u64::MAX).unwrap().is_some());
        if k > 0 {
            prop_assert!(component_cover_within(&g, &targets, k - 1, u64::MAX).unwrap().is_none());
        }
    }

    #[test]
    fn text_format_round_trips(g in coloured_graph(10, 3)) {
        let back = parse_text(&to_text(&g)).unwrap();
        prop_assert_eq!(back, g);
    }
}
