use proptest::prelude::*;

use udcert::chromatic::{
    brute_force_chromatic, chromatic_number, forced_equalities, is_k_colorable, is_k_colorable_parallel,
    is_k_colorable_plain, SolveBudget,
};
use udcert::constructions::slab::{slab_chi5_witness, SpindleParams};
use udcert::constructions::strip::{strip_chi3_witness, strip_chi4_witness};
use udcert::udgraph::{validate_coloring, UnitDistanceGraph};

fn graph(n: usize, mask: &[bool]) -> UnitDistanceGraph {
    let mut edges = Vec::new();
    let mut it = mask.iter();
    for a in 0..n {
        for b in a + 1..n {
            if *it.next().unwrap_or(&false) {
                edges.push((a, b));
            }
        }
    }
    UnitDistanceGraph::abstract_graph(n, &edges).unwrap()
}

fn moser_spindle() -> UnitDistanceGraph {
    let edges = [
        (0, 1), (0, 2), (1, 2), (1, 3), (2, 3),
        (0, 4), (0, 5), (4, 5), (4, 6), (5, 6),
        (3, 6),
    ];
    UnitDistanceGraph::abstract_graph(7, &edges).unwrap()
}

#[test]
fn moser_spindle_needs_four_colors() {
    let g = moser_spindle();
    assert_eq!(brute_force_chromatic(&g).unwrap(), 4);
    assert_eq!(chromatic_number(&g, &SolveBudget::default()).unwrap().chi, 4);
}

#[test]
fn witness_refutations_come_from_forced_merges() {
    let b = SolveBudget::seconds(60.0);
    let cases = [
        (strip_chi3_witness(0.3, 12).unwrap(), 2),
        (strip_chi4_witness(0.9, 18).unwrap(), 3),
        (slab_chi5_witness(&SpindleParams::reference()).unwrap(), 4),
    ];
    for (g, k) in &cases {
        let red = forced_equalities(&g.adjacency(), *k, &b);
        assert!(red.contradiction.is_some(), "k={k}");
        let out = is_k_colorable(g, *k, &b);
        assert!(out.is_unsat() && out.stats.merges > 0);
        let sat = is_k_colorable(g, k + 1, &b);
        assert!(validate_coloring(g, sat.coloring().unwrap()).unwrap());
    }
}

#[test]
fn parallel_agrees_on_witnesses() {
    let b = SolveBudget::seconds(60.0);
    for (g, k) in [
        (strip_chi3_witness(0.3, 12).unwrap(), 3),
        (slab_chi5_witness(&SpindleParams::reference()).unwrap(), 5),
    ] {
        for k in [k - 1, k] {
            let s = is_k_colorable(&g, k, &b);
            let p = is_k_colorable_parallel(&g, k, &b, 4);
            assert_eq!(s.verdict_name(), p.verdict_name());
        }
    }
}

#[test]
fn single_threaded_search_is_deterministic() {
    let g = strip_chi4_witness(0.9, 18).unwrap();
    let b = SolveBudget::seconds(60.0);
    let a = is_k_colorable(&g, 4, &b);
    let c = is_k_colorable(&g, 4, &b);
    assert_eq!(a.verdict, c.verdict);
    assert_eq!((a.stats.decisions, a.stats.backtracks, a.stats.merges), (c.stats.decisions, c.stats.backtracks, c.stats.merges));
}

proptest! {
    #[test]
    fn solver_matches_brute_force(n in 1usize..=9, mask in prop::collection::vec(prop::bool::weighted(0.4), 36)) {
        let g = graph(n, &mask);
        let chi = brute_force_chromatic(&g).unwrap();
        let b = SolveBudget::default();
        prop_assert_eq!(chromatic_number(&g, &b).unwrap().chi, chi);
        for k in 1..=6 {
            let reduced = is_k_colorable(&g, k, &b);
            let plain = is_k_colorable_plain(&g, k, &b);
            prop_assert_eq!(reduced.is_sat(), k >= chi);
            prop_assert_eq!(plain.is_sat(), k >= chi);
            if let Some(c) = reduced.coloring() {
                prop_assert!(validate_coloring(&g, c).unwrap());
                prop_assert!(c.color_count() <= k);
            }
        }
    }

    #[test]
    fn merged_vertices_share_colors_in_every_coloring(n in 3usize..=8, mask in prop::collection::vec(prop::bool::weighted(0.5), 28), k in 2usize..=4) {
        let g = graph(n, &mask);
        let red = forced_equalities(&g.adjacency(), k, &SolveBudget::default());
        // Every proper k-coloring, enumerated directly, respects the merges;
        // after a contradiction there is none.
        let mut colors = vec![0usize; n];
        loop {
            if validate_coloring(&g, &udcert::udgraph::Coloring::new(colors.clone())).unwrap() {
                prop_assert!(red.contradiction.is_none());
                for (v, &r) in red.class_of.iter().enumerate() {
                    prop_assert_eq!(colors[v], colors[r]);
                }
            }
            let mut i = 0;
            while i < n && colors[i] + 1 == k {
                colors[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            colors[i] += 1;
        }
    }
}
