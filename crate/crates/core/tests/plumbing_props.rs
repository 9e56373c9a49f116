mod common;

use common::*;
use negsphere::{Error, FiberKind, PlumbingGraph};
use proptest::prelude::*;

#[test]
fn shape_counts_match_known_sequence() {
    let counts: Vec<usize> = (1..=10).map(|n| tree_shapes(n).len()).collect();
    assert_eq!(counts, [1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
}

#[test]
fn small_trees_agree_with_quadratic_form() {
    let count = for_each_weighted_tree(6, -6, -1, |g| {
        let s = g.smooth().unwrap();
        let c = g.two_coloring().unwrap();
        assert_eq!(s, g.oracle_square(&c).unwrap());
        assert_eq!(s, g.oracle_square(&c.flipped()).unwrap());
        assert_eq!(s, quadratic_form_square(g));
    });
    // 1·6 + 1·6² + 1·6³ + 2·6⁴ + 3·6⁵ + 6·6⁶
    assert_eq!(count, 6 + 36 + 216 + 2 * 1296 + 3 * 7776 + 6 * 46656);
}

#[test]
fn small_trees_blow_up_by_fixed_amounts() {
    let mut scratch = PlumbingGraph::new();
    for_each_weighted_tree(5, -4, -1, |g| {
        let s = g.smooth().unwrap();
        for &(a, b) in g.edges() {
            scratch.clone_from(g);
            let x = scratch.blow_up_edge_mut(a, b).unwrap();
            assert_eq!(scratch.smooth().unwrap(), s - 5);
            assert!(scratch.vertices()[x].exceptional);
            assert!(!scratch.has_edge(a, b));
            assert!(scratch.has_edge(a, x) && scratch.has_edge(x, b));
        }
        for v in 0..g.vertex_count() {
            let blown = g.blow_up_point_on_vertex(v).unwrap();
            assert_eq!(blown.smooth().unwrap(), s - 4);
            assert_eq!(blown.vertices()[v].weight, g.vertices()[v].weight - 1);
        }
    });
}

#[test]
fn rejects_graphs_that_are_not_trees() {
    let mut cycle = PlumbingGraph::chain(&[-2, -2, -2, -2]);
    cycle.add_edge(0, 3).unwrap();
    assert!(matches!(cycle.smooth(), Err(Error::NotATree { vertices: 4, edges: 4 })));

    let mut triangle = PlumbingGraph::chain(&[-2, -2, -2]);
    triangle.add_edge(0, 2).unwrap();
    assert!(matches!(triangle.two_coloring(), Err(Error::NotBipartite(_))));

    let mut split = PlumbingGraph::chain(&[-2, -2]);
    split.add_vertex("lonely", -3);
    assert_eq!(split.smooth(), Err(Error::Disconnected));
    assert_eq!(split.two_coloring(), Err(Error::Disconnected));

    let mut torus = PlumbingGraph::new();
    torus.add_surface("T", 0, 1);
    assert!(matches!(
        torus.smooth(),
        Err(Error::PositiveGenus { vertex: 0, genus: 1 })
    ));

    assert_eq!(PlumbingGraph::new().smooth(), Err(Error::EmptyGraph));
}

#[test]
fn rejects_bad_edges_and_colorings() {
    let mut g = PlumbingGraph::chain(&[-2, -3]);
    assert_eq!(g.add_edge(1, 1), Err(Error::SelfLoop(1)));
    assert_eq!(g.add_edge(1, 0), Err(Error::DuplicateEdge(0, 1)));
    assert_eq!(g.add_edge(0, 7), Err(Error::MissingVertex(7)));
    assert_eq!(g.blow_up_edge(0, 7).unwrap_err(), Error::MissingEdge(0, 7));
    assert_eq!(g.blow_up_point_on_vertex(5).unwrap_err(), Error::MissingVertex(5));

    let mono = negsphere::plumbing::Coloring { signs: vec![1, 1] };
    assert!(matches!(g.oracle_square(&mono), Err(Error::InvalidColoring(_))));
    let short = negsphere::plumbing::Coloring { signs: vec![1] };
    assert!(matches!(g.oracle_square(&short), Err(Error::InvalidColoring(_))));
}

#[test]
fn deserialization_validates_edges() {
    let bad = r#"{"vertices":[{"label":"a","weight":-2}],"edges":[[0,0]]}"#;
    assert!(serde_json::from_str::<PlumbingGraph>(bad).is_err());
    let dangling = r#"{"vertices":[{"label":"a","weight":-2}],"edges":[[0,3]]}"#;
    assert!(serde_json::from_str::<PlumbingGraph>(dangling).is_err());
    let ok = r#"{"vertices":[{"label":"a","weight":-2},{"label":"b","weight":-5}],"edges":[[1,0]]}"#;
    let g: PlumbingGraph = serde_json::from_str(ok).unwrap();
    assert_eq!(g.edges(), &[(0, 1)]);
    assert_eq!(g.smooth().unwrap(), -9);
}

#[test]
fn dot_marks_exceptional_spheres() {
    let g = PlumbingGraph::chain(&[-2, -3]).blow_up_edge(0, 1).unwrap();
    let dot = g.to_dot("g");
    assert!(dot.starts_with("graph \"g\" {"));
    assert!(dot.contains("dashed"));
    assert_eq!(dot.matches(" -- ").count(), 2);
}

fn arb_tree() -> impl Strategy<Value = PlumbingGraph> {
    (1usize..=40)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(-6i64..=-1, n),
                prop::collection::vec(0..n.max(1), n.saturating_sub(2)),
            )
        })
        .prop_map(|(weights, seq)| {
            let n = weights.len();
            let edges = match n {
                1 => vec![],
                2 => vec![(0, 1)],
                _ => prufer_edges(&seq, n),
            };
            graph_from(&weights, &edges)
        })
}

proptest! {
    #[test]
    fn smooth_matches_both_colorings(g in arb_tree()) {
        let s = g.smooth().unwrap();
        let c = g.two_coloring().unwrap();
        prop_assert_eq!(s, g.oracle_square(&c).unwrap());
        prop_assert_eq!(s, g.oracle_square(&c.flipped()).unwrap());
        prop_assert_eq!(s, quadratic_form_square(&g));
    }

    #[test]
    fn rewrite_sequences_are_additive(g in arb_tree(), steps in prop::collection::vec((any::<bool>(), any::<prop::sample::Index>()), 0..12)) {
        let start = g.smooth().unwrap();
        let mut h = g.clone();
        let mut expected = start;
        let n_steps = steps.len();
        for (edge, idx) in steps {
            if edge && h.edge_count() > 0 {
                let (a, b) = h.edges()[idx.index(h.edge_count())];
                h.blow_up_edge_mut(a, b).unwrap();
                expected -= 5;
            } else {
                h.blow_up_point_mut(idx.index(h.vertex_count())).unwrap();
                expected -= 4;
            }
            prop_assert_eq!(h.checked_square().unwrap(), expected);
        }
        prop_assert_eq!(h.trace().len(), g.trace().len() + n_steps);
    }

    #[test]
    fn attachment_vertex_does_not_change_the_square(g in arb_tree(), at in any::<prop::sample::Index>(), kind in prop::sample::select(vec![FiberKind::E8t, FiberKind::E7t, FiberKind::E6t, FiberKind::I0star])) {
        let frag = kind.fragment().unwrap();
        let before = g.smooth().unwrap();
        let mut h = g.clone();
        h.attach_fragment(at.index(g.vertex_count()), &frag, "F").unwrap();
        prop_assert_eq!(h.checked_square().unwrap(), before + frag.smoothing_contribution());
    }

    #[test]
    fn json_round_trip(g in arb_tree(), blowups in 0usize..4) {
        let mut h = g;
        for _ in 0..blowups {
            h.blow_up_point_mut(0).unwrap();
        }
        let text = serde_json::to_string(&h).unwrap();
        let back: PlumbingGraph = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(back.smooth().unwrap(), h.smooth().unwrap());
    }

    #[test]
    fn rebuilding_is_deterministic(g in arb_tree()) {
        let weights: Vec<i64> = g.vertices().iter().map(|v| v.weight).collect();
        let again = graph_from(&weights, g.edges());
        prop_assert_eq!(again.to_dot("t"), g.to_dot("t"));
        prop_assert_eq!(again.two_coloring().unwrap(), g.two_coloring().unwrap());
    }
}
