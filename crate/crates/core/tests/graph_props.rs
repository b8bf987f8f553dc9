//! Property tests for the order and graph algorithms: fill-in minimality,
//! maximum cardinality search on chordal graphs, and the correspondence
//! between decomposable structures and perfect lists.

mod common;

use common::{adjacency_pairs, brute_force_maximal_cliques, collider, cycle4, n};
use dredge::graph::{
    fill_in, is_chordal, is_ordered, is_perfect, max_cardinality_search, maximal_cliques,
    moral_graph, orient_by_order, skeleton, topological_order, DirectedGraph, NodeId, NodeOrder,
    UndirectedGraph,
};
use dredge::random::{
    pid_with_random_tables, random_dag, random_order, random_undirected, seeded_rng,
};
use proptest::prelude::*;

/// Independent decomposability check on a bare structure: every two
/// parents of a node are adjacent in some direction.
fn structure_decomposable(g: &DirectedGraph) -> bool {
    g.nodes().all(|v| {
        let ps = g.parents(v);
        ps.iter().enumerate().all(|(k, &a)| {
            ps[k + 1..]
                .iter()
                .all(|&b| g.has_arc(a, b) || g.has_arc(b, a))
        })
    })
}

fn all_permutations(n_nodes: usize) -> Vec<NodeOrder> {
    fn rec(prefix: &mut Vec<NodeId>, rest: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..rest.len() {
            let v = rest.remove(k);
            prefix.push(v);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(k, v);
        }
    }
    let mut out = Vec::new();
    rec(
        &mut Vec::new(),
        &mut (0..n_nodes).map(NodeId).collect(),
        &mut out,
    );
    out.into_iter()
        .map(|seq| NodeOrder::new(seq).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn topological_orders_are_ordered(seed in any::<u64>(), nodes in 1usize..=8) {
        let g = random_dag(&mut seeded_rng(seed), nodes, 0.4);
        let order = topological_order(&g).unwrap();
        prop_assert!(is_ordered(&g, &order).unwrap());
    }

    #[test]
    fn fill_in_is_perfect_superset_idempotent_and_minimal(
        seed in any::<u64>(),
        nodes in 1usize..=7,
        prob in 0.1f64..0.7,
    ) {
        let mut rng = seeded_rng(seed);
        let u = random_undirected(&mut rng, nodes, prob);
        let order = random_order(&mut rng, nodes);
        let filled = fill_in(&u, &order).unwrap();

        prop_assert!(is_perfect(&filled, &order).unwrap());
        for (a, b) in u.edges() {
            prop_assert!(filled.has_edge(a, b));
        }
        prop_assert_eq!(fill_in(&filled, &order).unwrap(), filled.clone());

        // Dropping any single added edge breaks perfectness.
        for (a, b) in filled.edges() {
            if u.has_edge(a, b) {
                continue;
            }
            let mut weakened = filled.clone();
            weakened.remove_edge(a, b).unwrap();
            prop_assert!(!is_perfect(&weakened, &order).unwrap());
        }
    }

    #[test]
    fn mcs_finds_a_perfect_list_on_chordal_graphs(
        seed in any::<u64>(),
        nodes in 1usize..=8,
        prob in 0.1f64..0.7,
    ) {
        let mut rng = seeded_rng(seed);
        let base = random_undirected(&mut rng, nodes, prob);
        let chordal = fill_in(&base, &random_order(&mut rng, nodes)).unwrap();
        prop_assert!(is_chordal(&chordal));
        let tiebreak = random_order(&mut rng, nodes);
        let found = max_cardinality_search(&chordal, &tiebreak).unwrap();
        prop_assert!(is_perfect(&chordal, &found).unwrap());
    }

    #[test]
    fn non_chordal_graphs_admit_no_perfect_list(seed in any::<u64>(), nodes in 4usize..=6) {
        let mut rng = seeded_rng(seed);
        let u = random_undirected(&mut rng, nodes, 0.45);
        if is_chordal(&u) {
            // Only non-chordal draws are interesting here.
            return Ok(());
        }
        prop_assert!(!all_permutations(nodes)
            .iter()
            .any(|o| is_perfect(&u, o).unwrap()));
    }

    #[test]
    fn chordality_test_agrees_with_exhaustive_search(seed in any::<u64>(), nodes in 1usize..=6) {
        let u = random_undirected(&mut seeded_rng(seed), nodes, 0.45);
        let any_perfect = all_permutations(nodes)
            .iter()
            .any(|o| is_perfect(&u, o).unwrap());
        prop_assert_eq!(is_chordal(&u), any_perfect);
    }

    #[test]
    fn decomposable_structures_have_perfect_skeleton_orders(
        seed in any::<u64>(),
        nodes in 1usize..=8,
    ) {
        let mut rng = seeded_rng(seed);
        let g = random_dag(&mut rng, nodes, 0.4);
        let order = topological_order(&g).unwrap();
        prop_assert_eq!(
            structure_decomposable(&g),
            is_perfect(&skeleton(&g), &order).unwrap()
        );
        // A decomposable structure needs no marriages, so its topological
        // order is perfect on the moral graph as well.
        if structure_decomposable(&g) {
            prop_assert!(is_perfect(&moral_graph(&g), &order).unwrap());
        }
        // The bare-structure check agrees with the diagram-level one.
        let p = pid_with_random_tables(&mut rng, g.clone(), 3);
        prop_assert_eq!(structure_decomposable(&g), p.is_decomposable());
    }

    #[test]
    fn orienting_a_chordal_graph_by_a_perfect_list_is_decomposable(
        seed in any::<u64>(),
        nodes in 1usize..=8,
        prob in 0.1f64..0.7,
    ) {
        let mut rng = seeded_rng(seed);
        let chordal = fill_in(
            &random_undirected(&mut rng, nodes, prob),
            &random_order(&mut rng, nodes),
        )
        .unwrap();
        let perfect = max_cardinality_search(&chordal, &random_order(&mut rng, nodes)).unwrap();
        let oriented = orient_by_order(&chordal, &perfect).unwrap();
        prop_assert!(oriented.is_acyclic());
        prop_assert!(is_ordered(&oriented, &perfect).unwrap());
        prop_assert!(structure_decomposable(&oriented));
    }

    #[test]
    fn clique_extraction_matches_exhaustive_enumeration(
        seed in any::<u64>(),
        nodes in 1usize..=8,
        prob in 0.1f64..0.7,
    ) {
        let mut rng = seeded_rng(seed);
        let chordal = fill_in(
            &random_undirected(&mut rng, nodes, prob),
            &random_order(&mut rng, nodes),
        )
        .unwrap();
        let perfect = max_cardinality_search(&chordal, &NodeOrder::identity(nodes)).unwrap();
        let cliques = maximal_cliques(&chordal, &perfect).unwrap();

        prop_assert_eq!(&cliques, &brute_force_maximal_cliques(&chordal));
        for (a, b) in chordal.edges() {
            prop_assert!(cliques.iter().any(|c| c.contains(&a) && c.contains(&b)));
        }
        for (k, c) in cliques.iter().enumerate() {
            for d in &cliques[k + 1..] {
                prop_assert!(!c.iter().all(|v| d.contains(v)));
                prop_assert!(!d.iter().all(|v| c.contains(v)));
            }
        }
    }

    #[test]
    fn every_family_of_a_decomposable_structure_sits_in_a_clique(
        seed in any::<u64>(),
        nodes in 1usize..=8,
        prob in 0.1f64..0.7,
    ) {
        let mut rng = seeded_rng(seed);
        let chordal = fill_in(
            &random_undirected(&mut rng, nodes, prob),
            &random_order(&mut rng, nodes),
        )
        .unwrap();
        let perfect = max_cardinality_search(&chordal, &NodeOrder::identity(nodes)).unwrap();
        let oriented = orient_by_order(&chordal, &perfect).unwrap();
        let cliques = maximal_cliques(&chordal, &perfect).unwrap();
        for v in oriented.nodes() {
            let mut family = oriented.parents(v).to_vec();
            family.push(v);
            prop_assert!(cliques
                .iter()
                .any(|c| family.iter().all(|m| c.contains(m))));
        }
    }
}

#[test]
fn moral_perfectness_does_not_imply_decomposability() {
    // Marrying the collider's parents makes its moral graph a triangle, so
    // the topological order is perfect there even though the structure is
    // not decomposable. The skeleton tells them apart.
    let p = collider();
    let g = p.graph();
    let order = topological_order(g).unwrap();
    assert!(is_perfect(&moral_graph(g), &order).unwrap());
    assert!(!is_perfect(&skeleton(g), &order).unwrap());
    assert!(!p.is_decomposable());
}

#[test]
fn four_cycle_fill_in_adds_exactly_one_chord() {
    let filled = fill_in(&cycle4(), &NodeOrder::identity(4)).unwrap();
    let mut expected = cycle4();
    expected.add_edge(n(0), n(2)).unwrap();
    assert_eq!(filled, expected);
}

#[test]
fn dense_directed_graphs_round_trip_through_adjacency() {
    let g = DirectedGraph::from_arcs(4, &[(n(0), n(1)), (n(0), n(2)), (n(1), n(3)), (n(2), n(3))])
        .unwrap();
    assert_eq!(
        adjacency_pairs(&g),
        vec![(n(0), n(1)), (n(0), n(2)), (n(1), n(3)), (n(2), n(3))]
    );
    let u: UndirectedGraph = skeleton(&g);
    assert_eq!(u.edge_count(), 4);
}
