//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use dredge::graph::{DirectedGraph, NodeId, UndirectedGraph};
use dredge::pid::{Cpt, Pid};

pub fn n(i: usize) -> NodeId {
    NodeId(i)
}

pub fn binary() -> Vec<String> {
    vec!["0".into(), "1".into()]
}

/// X -> Y with P(X=1)=0.3, P(Y=1|X=0)=0.2, P(Y=1|X=1)=0.9.
pub fn chain2() -> Pid {
    let g = DirectedGraph::from_arcs(2, &[(n(0), n(1))]).unwrap();
    Pid::new(
        vec!["X".into(), "Y".into()],
        vec![binary(), binary()],
        g,
        vec![
            Cpt::conditional(n(0), vec![], vec![], 2, vec![0.7, 0.3]).unwrap(),
            Cpt::conditional(n(1), vec![n(0)], vec![2], 2, vec![0.8, 0.2, 0.1, 0.9]).unwrap(),
        ],
    )
    .unwrap()
}

pub fn chain3() -> Pid {
    let g = DirectedGraph::from_arcs(3, &[(n(0), n(1)), (n(1), n(2))]).unwrap();
    Pid::new(
        vec!["A".into(), "B".into(), "C".into()],
        vec![binary(), binary(), binary()],
        g,
        vec![
            Cpt::conditional(n(0), vec![], vec![], 2, vec![0.6, 0.4]).unwrap(),
            Cpt::conditional(n(1), vec![n(0)], vec![2], 2, vec![0.7, 0.3, 0.2, 0.8]).unwrap(),
            Cpt::conditional(n(2), vec![n(1)], vec![2], 2, vec![0.9, 0.1, 0.5, 0.5]).unwrap(),
        ],
    )
    .unwrap()
}

pub fn collider() -> Pid {
    let g = DirectedGraph::from_arcs(3, &[(n(0), n(2)), (n(1), n(2))]).unwrap();
    Pid::new(
        vec!["X1".into(), "X2".into(), "X3".into()],
        vec![binary(), binary(), binary()],
        g,
        vec![
            Cpt::conditional(n(0), vec![], vec![], 2, vec![0.6, 0.4]).unwrap(),
            Cpt::conditional(n(1), vec![], vec![], 2, vec![0.3, 0.7]).unwrap(),
            Cpt::conditional(
                n(2),
                vec![n(0), n(1)],
                vec![2, 2],
                2,
                vec![0.9, 0.1, 0.6, 0.4, 0.2, 0.8, 0.5, 0.5],
            )
            .unwrap(),
        ],
    )
    .unwrap()
}

/// The undirected 4-cycle A-B-C-D-A.
pub fn cycle4() -> UndirectedGraph {
    UndirectedGraph::from_edges(4, &[(n(0), n(1)), (n(1), n(2)), (n(2), n(3)), (n(3), n(0))])
        .unwrap()
}

/// Maximal cliques by exhaustive subset enumeration; the independent
/// oracle for the perfect-list-based extraction. Only for small graphs.
pub fn brute_force_maximal_cliques(u: &UndirectedGraph) -> Vec<Vec<NodeId>> {
    let nodes = u.node_count();
    assert!(nodes <= 16, "exhaustive clique search is for small graphs");
    let mut cliques: Vec<Vec<NodeId>> = Vec::new();
    for mask in 1u32..(1 << nodes) {
        let members: Vec<NodeId> = (0..nodes)
            .filter(|&v| mask & (1 << v) != 0)
            .map(NodeId)
            .collect();
        if u.is_clique(&members) {
            cliques.push(members);
        }
    }
    let mut maximal: Vec<Vec<NodeId>> = cliques
        .iter()
        .filter(|c| {
            !cliques
                .iter()
                .any(|d| d.len() > c.len() && c.iter().all(|v| d.contains(v)))
        })
        .cloned()
        .collect();
    maximal.sort();
    maximal
}

/// Undirected adjacency pairs of a directed graph, for arc-set
/// comparisons that ignore direction.
pub fn adjacency_pairs(g: &DirectedGraph) -> Vec<(NodeId, NodeId)> {
    let mut pairs: Vec<(NodeId, NodeId)> = g
        .arcs()
        .into_iter()
        .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
        .collect();
    pairs.sort();
    pairs.dedup();
    pairs
}
