//! Seeded random diagrams and an end-to-end pipeline spot check.
//!
//! Everything here is driven by a ChaCha stream cipher RNG so identical
//! seeds reproduce identical diagrams and identical check outcomes, both
//! in the test suites and in the `random-test` command.

use crate::error::Result;
use crate::graph::{
    fill_in, moral_graph, orient_by_order, DirectedGraph, NodeId, NodeOrder, UndirectedGraph,
};
use crate::infer::{complexity_report, evidence_probability, joint_oracle, posterior_marginal};
use crate::pid::{Cpt, Pid};
use crate::reduce::{absorb_evidence, pre_reverse_to_target, propagate_all, ReversalTrace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic RNG for a seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random DAG on `n` nodes: each forward pair `(i, j)`, `i < j`, carries an
/// arc with probability `arc_prob`, so the node list is always an ordered
/// list for the result.
pub fn random_dag(rng: &mut ChaCha8Rng, n: usize, arc_prob: f64) -> DirectedGraph {
    let mut g = DirectedGraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(arc_prob) {
                g.add_arc(NodeId(i), NodeId(j))
                    .expect("forward arcs are unique");
            }
        }
    }
    g
}

/// Random undirected graph with independent edges.
pub fn random_undirected(rng: &mut ChaCha8Rng, n: usize, edge_prob: f64) -> UndirectedGraph {
    let mut u = UndirectedGraph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(edge_prob) {
                u.add_edge(NodeId(a), NodeId(b)).expect("pairs are unique");
            }
        }
    }
    u
}

/// Random permutation of `0..n`.
pub fn random_order(rng: &mut ChaCha8Rng, n: usize) -> NodeOrder {
    let mut seq: Vec<NodeId> = (0..n).map(NodeId).collect();
    seq.shuffle(rng);
    NodeOrder::new(seq).expect("a shuffle has no duplicates")
}

/// Wraps a structure in a diagram with random strictly positive tables.
/// Cardinalities are drawn from `2..=max_card` per node.
pub fn pid_with_random_tables(rng: &mut ChaCha8Rng, graph: DirectedGraph, max_card: usize) -> Pid {
    let n = graph.node_count();
    let cards: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=max_card)).collect();
    let names: Vec<String> = (0..n).map(|v| format!("V{v}")).collect();
    let outcomes: Vec<Vec<String>> = cards
        .iter()
        .map(|&c| (0..c).map(|o| o.to_string()).collect())
        .collect();
    let mut tables = Vec::with_capacity(n);
    for v in graph.nodes() {
        let parents = graph.parents(v).to_vec();
        let parent_cards: Vec<usize> = parents.iter().map(|p| cards[p.0]).collect();
        let child_card = cards[v.0];
        let configs: usize = parent_cards.iter().product();
        let mut values = Vec::with_capacity(configs * child_card);
        for _ in 0..configs {
            let weights: Vec<f64> = (0..child_card).map(|_| rng.gen_range(0.05..1.0)).collect();
            let total: f64 = weights.iter().sum();
            values.extend(weights.iter().map(|w| w / total));
        }
        tables.push(
            Cpt::conditional(v, parents, parent_cards, child_card, values)
                .expect("random table dimensions are consistent"),
        );
    }
    Pid::new(names, outcomes, graph, tables).expect("random diagram parts are consistent")
}

/// Random diagram: up to `max_nodes` nodes, cardinalities up to 3.
pub fn random_pid(rng: &mut ChaCha8Rng, max_nodes: usize) -> Pid {
    let n = rng.gen_range(2..=max_nodes);
    let g = random_dag(rng, n, 0.4);
    pid_with_random_tables(rng, g, 3)
}

/// Like [`random_pid`] but with hard zeros sprinkled into the tables
/// (each configuration keeps at least one positive outcome), to exercise
/// the zero-probability paths of the reduction calculus.
pub fn random_pid_sparse(rng: &mut ChaCha8Rng, max_nodes: usize) -> Pid {
    let n = rng.gen_range(2..=max_nodes);
    let graph = random_dag(rng, n, 0.4);
    let cards: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
    let names: Vec<String> = (0..n).map(|v| format!("V{v}")).collect();
    let outcomes: Vec<Vec<String>> = cards
        .iter()
        .map(|&c| (0..c).map(|o| o.to_string()).collect())
        .collect();
    let mut tables = Vec::with_capacity(n);
    for v in graph.nodes() {
        let parents = graph.parents(v).to_vec();
        let parent_cards: Vec<usize> = parents.iter().map(|p| cards[p.0]).collect();
        let child_card = cards[v.0];
        let configs: usize = parent_cards.iter().product();
        let mut values = Vec::with_capacity(configs * child_card);
        for _ in 0..configs {
            let keep = rng.gen_range(0..child_card);
            let weights: Vec<f64> = (0..child_card)
                .map(|o| {
                    if o != keep && rng.gen_bool(0.3) {
                        0.0
                    } else {
                        rng.gen_range(0.05..1.0)
                    }
                })
                .collect();
            let total: f64 = weights.iter().sum();
            values.extend(weights.iter().map(|w| w / total));
        }
        tables.push(
            Cpt::conditional(v, parents, parent_cards, child_card, values)
                .expect("random table dimensions are consistent"),
        );
    }
    Pid::new(names, outcomes, graph, tables).expect("random diagram parts are consistent")
}

/// Random diagram whose structure is decomposable: a random DAG is
/// moralized, filled in for a random order, and oriented by it.
pub fn random_dpid(rng: &mut ChaCha8Rng, max_nodes: usize) -> Pid {
    let n = rng.gen_range(2..=max_nodes);
    let g = random_dag(rng, n, 0.4);
    let order = random_order(rng, n);
    let filled = fill_in(&moral_graph(&g), &order).expect("order covers the graph");
    let oriented = orient_by_order(&filled, &order).expect("order covers the graph");
    pid_with_random_tables(rng, oriented, 3)
}

/// Outcome of one randomized pipeline run checked against the joint
/// enumeration oracle and the clique bound.
#[derive(Clone, Debug)]
pub struct PipelineCheck {
    pub node_count: usize,
    pub evidence_count: usize,
    pub reversal_steps: usize,
    /// |pipeline evidence probability - oracle evidence probability|.
    pub evidence_probability_dev: f64,
    /// Largest |pipeline posterior - oracle posterior| over all
    /// unobserved nodes and outcomes, folded together with each
    /// posterior's deviation from summing to one.
    pub max_marginal_dev: f64,
    /// Largest per-entry deviation of the final table product from the
    /// oracle's sliced joint.
    pub joint_dev: f64,
    pub clique_containment: bool,
    pub max_table_cells: usize,
    pub max_clique_cells: usize,
}

/// Draws a random diagram, target order and exact evidence, runs the full
/// reduction pipeline (pre-reverse, absorb, propagate), and measures it
/// against the brute-force oracle built from the untouched original.
pub fn random_pipeline_check(rng: &mut ChaCha8Rng) -> Result<PipelineCheck> {
    let original = random_pid(rng, 8);
    let n = original.slot_count();
    let target = random_order(rng, n);

    let mut nodes: Vec<NodeId> = (0..n).map(NodeId).collect();
    nodes.shuffle(rng);
    let evidence_count = rng.gen_range(0..=3.min(n));
    let evidence: Vec<(NodeId, usize)> = nodes[..evidence_count]
        .iter()
        .map(|&v| (v, rng.gen_range(0..original.cardinality(v))))
        .collect();

    // Oracle: enumerate the prior joint from the original tables and slice
    // at the observed values. No reduction code touches this path.
    let mut oracle = joint_oracle(&original)?;
    for &(v, x) in &evidence {
        oracle = oracle.condition(v, x)?;
    }

    let mut p = original.clone();
    let mut trace = ReversalTrace::new();
    pre_reverse_to_target(&mut p, &target, &mut trace)?;
    for &(v, x) in &evidence {
        absorb_evidence(&mut p, v, x, &mut trace)?;
    }
    propagate_all(&mut p, &target, &mut trace)?;

    let evprob = evidence_probability(&p)?;
    let oracle_evprob = oracle.sum();
    let mut max_marginal_dev: f64 = 0.0;
    for v in p.latent_nodes() {
        let got = posterior_marginal(&p, v)?;
        let want = oracle.normalized_marginal(v)?;
        for (a, b) in got.iter().zip(want.iter()) {
            max_marginal_dev = max_marginal_dev.max((a - b).abs());
        }
        // Posteriors must come out normalized without renormalizing.
        max_marginal_dev = max_marginal_dev.max((got.iter().sum::<f64>() - 1.0).abs());
    }
    let joint_dev = joint_oracle(&p)?.max_abs_diff(&oracle)?;
    let report = complexity_report(&trace, &original, &target)?;

    Ok(PipelineCheck {
        node_count: n,
        evidence_count,
        reversal_steps: trace.len(),
        evidence_probability_dev: (evprob - oracle_evprob).abs(),
        max_marginal_dev,
        joint_dev,
        clique_containment: report.clique_containment
            && report.max_table_cells <= report.max_clique_cells,
        max_table_cells: report.max_table_cells,
        max_clique_cells: report.max_clique_cells,
    })
}
