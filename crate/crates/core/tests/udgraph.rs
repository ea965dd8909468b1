use proptest::prelude::*;

use udcert::constructions::curve::curve_odd_cycle;
use udcert::constructions::rational::rational_odd_cycle;
use udcert::constructions::slab::{slab_chi5_witness, SpindleParams};
use udcert::constructions::strip::{strip_chi3_witness, strip_chi4_witness};
use udcert::scalar::Scalar;
use udcert::udgraph::{
    export_dimacs, graph_from_str, graph_to_string, load_graph, save_graph, to_dimacs, validate_coloring,
    validate_geometry, Coloring, UnitDistanceGraph,
};

fn witnesses() -> Vec<UnitDistanceGraph> {
    vec![
        strip_chi3_witness(0.3, 12).unwrap(),
        strip_chi4_witness(0.9, 18).unwrap(),
        slab_chi5_witness(&SpindleParams::reference()).unwrap(),
        rational_odd_cycle(1, &Scalar::ratio(2, 5)).unwrap(),
        rational_odd_cycle(2, &Scalar::ratio(1, 4)).unwrap(),
        curve_odd_cycle(&[[0.0, 0.0], [2.5, 0.0]], 0.2).unwrap().graph,
    ]
}

#[test]
fn witnesses_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for (i, g) in witnesses().iter().enumerate() {
        let path = dir.path().join(format!("g{i}.json"));
        save_graph(g, &path).unwrap();
        let back = load_graph(&path).unwrap();
        assert_eq!(&back, g);
        assert_eq!(graph_to_string(&back), graph_to_string(g));
        assert!(validate_geometry(&back).pass);
    }
}

#[test]
fn dimacs_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for (i, g) in witnesses().iter().enumerate() {
        let a = dir.path().join(format!("a{i}.col"));
        let b = dir.path().join(format!("b{i}.col"));
        export_dimacs(g, &a).unwrap();
        export_dimacs(g, &b).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
    let slab = slab_chi5_witness(&SpindleParams::reference()).unwrap();
    assert!(to_dimacs(&slab, &[]).starts_with("p edge 145 409\n"));
}

#[test]
fn exact_witnesses_have_zero_residual() {
    let g = rational_odd_cycle(2, &Scalar::ratio(1, 4)).unwrap();
    let r = validate_geometry(&g);
    assert!(r.pass && r.exact_zero_residual && r.max_residual == 0.0);
    assert!(graph_to_string(&g).contains("\"37/38\""));
}

#[test]
fn out_of_range_edge_is_rejected_on_load() {
    let text = r#"{"slab": {"n": 1, "k": 0, "epsilon": "1"}, "points": [["0"], ["1"]], "edges": [[0, 2]]}"#;
    assert!(graph_from_str(text).is_err());
}

proptest! {
    #[test]
    fn monochromatic_edge_is_never_valid(colors in prop::collection::vec(0usize..4, 49), pick in 0usize..49) {
        let g = strip_chi3_witness(0.3, 12).unwrap();
        let (a, b) = g.edges()[pick];
        let mut colors = colors;
        colors[b] = colors[a];
        prop_assert!(!validate_coloring(&g, &Coloring::new(colors)).unwrap());
    }

    #[test]
    fn random_abstract_graphs_round_trip(n in 1usize..12, raw in prop::collection::vec((0usize..12, 0usize..12), 0..30)) {
        let edges: Vec<(usize, usize)> = raw.into_iter().filter(|&(a, b)| a < n && b < n && a != b).collect();
        let mut uniq = Vec::new();
        for (a, b) in edges {
            let e = (a.min(b), a.max(b));
            if !uniq.contains(&e) {
                uniq.push(e);
            }
        }
        let g = UnitDistanceGraph::abstract_graph(n, &uniq).unwrap();
        prop_assert_eq!(graph_from_str(&graph_to_string(&g)).unwrap(), g);
    }
}
