//! The integrated reduction pipeline behind the inference commands:
//! resolve a target order, pre-reverse to it, absorb the evidence file,
//! and run one propagation sweep in reverse target order.

use crate::format::EvidenceFile;
use crate::CliError;
use dredge::graph::{max_cardinality_search, moral_graph, NodeId, NodeOrder};
use dredge::pid::Pid;
use dredge::reduce::{pre_reverse_to_target, propagate_all, ReversalTrace};

/// One finished pipeline run.
pub struct PipelineRun {
    pub diagram: Pid,
    pub trace: ReversalTrace,
    pub target: NodeOrder,
}

/// Default target order: maximum cardinality search on the moral graph,
/// ties broken by the network file's node order.
pub fn default_target(p: &Pid) -> NodeOrder {
    let tiebreak = NodeOrder::identity(p.slot_count());
    max_cardinality_search(&moral_graph(p.graph()), &tiebreak)
        .expect("identity tiebreak covers the graph")
}

/// Parses a `--order` argument (comma-separated node ids) against the
/// diagram's nodes.
pub fn parse_order_arg(p: &Pid, text: &str) -> Result<NodeOrder, CliError> {
    let mut seq = Vec::new();
    for label in text.split(',') {
        let label = label.trim();
        let v = p
            .node_by_name(label)
            .ok_or_else(|| CliError::Usage(format!("unknown node {label:?} in --order")))?;
        seq.push(v);
    }
    let order = NodeOrder::new(seq).map_err(|e| CliError::Usage(format!("bad --order: {e}")))?;
    if !order.is_permutation_of(&p.live_nodes()) {
        return Err(CliError::Usage(
            "--order must list every node exactly once".into(),
        ));
    }
    Ok(order)
}

pub fn resolve_target(p: &Pid, order_arg: Option<&str>) -> Result<NodeOrder, CliError> {
    match order_arg {
        Some(text) => parse_order_arg(p, text),
        None => Ok(default_target(p)),
    }
}

/// Runs pre-reversal, evidence application and the propagation sweep.
/// The sweep follows the target order with any virtual evidence nodes
/// appended at the end.
pub fn run_pipeline(
    original: &Pid,
    evidence: Option<&EvidenceFile>,
    target: &NodeOrder,
) -> Result<PipelineRun, CliError> {
    let mut diagram = original.clone();
    let mut trace = ReversalTrace::new();
    pre_reverse_to_target(&mut diagram, target, &mut trace)?;
    if let Some(ev) = evidence {
        crate::format::apply_evidence(&mut diagram, ev, &mut trace)?;
    }
    let mut sweep: Vec<NodeId> = target.as_slice().to_vec();
    sweep.extend(
        diagram
            .live_nodes()
            .into_iter()
            .filter(|v| v.index() >= original.slot_count()),
    );
    let sweep = NodeOrder::new(sweep).expect("virtual ids are fresh");
    propagate_all(&mut diagram, &sweep, &mut trace)?;
    Ok(PipelineRun {
        diagram,
        trace,
        target: target.clone(),
    })
}
