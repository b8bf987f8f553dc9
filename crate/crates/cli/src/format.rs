//! Network and evidence file formats.
//!
//! Both are JSON. A network lists nodes with outcome labels, parent ids
//! and a flat table laid out with the parents most significant in their
//! listed order and the child outcome varying fastest. Parsing
//! canonicalizes parent order, so parse -> serialize -> parse is the
//! identity on the canonical form.

use crate::CliError;
use dredge::graph::{DirectedGraph, NodeId};
use dredge::pid::{Cpt, Pid, ValidationReport};
use dredge::reduce::{absorb_evidence, add_likelihood_node, ReversalTrace};
use serde::{Deserialize, Serialize};

pub const NETWORK_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NetworkFile {
    pub version: u32,
    pub nodes: Vec<NodeSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: String,
    pub outcomes: Vec<String>,
    #[serde(default)]
    pub parents: Vec<String>,
    pub table: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvidenceFile {
    /// Exact observations, absorbed in listed order.
    #[serde(default)]
    pub observations: Vec<Observation>,
    /// Virtual likelihood nodes, inserted after the observations.
    #[serde(default)]
    pub likelihoods: Vec<LikelihoodSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Observation {
    pub node: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LikelihoodSpec {
    pub id: String,
    pub parents: Vec<String>,
    /// Laid out with `parents` most significant in listed order.
    pub table: Vec<f64>,
}

fn check_name(id: &str) -> Result<(), CliError> {
    if id.is_empty() || id.contains(',') || id.chars().any(char::is_whitespace) {
        return Err(CliError::Parse(format!(
            "node id {id:?} must be non-empty without commas or whitespace"
        )));
    }
    Ok(())
}

/// Parses a network file into a diagram plus its validation report.
/// Structural problems are parse errors; value-level findings are left to
/// the caller, which may treat them as fatal or display them.
pub fn parse_network(text: &str) -> Result<(Pid, ValidationReport), CliError> {
    let file: NetworkFile = serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))?;
    if file.version != NETWORK_VERSION {
        return Err(CliError::Parse(format!(
            "unsupported network version {} (expected {})",
            file.version, NETWORK_VERSION
        )));
    }

    let names: Vec<String> = file.nodes.iter().map(|n| n.id.clone()).collect();
    for (k, name) in names.iter().enumerate() {
        check_name(name)?;
        if names[..k].contains(name) {
            return Err(CliError::Parse(format!("duplicate node id {name:?}")));
        }
    }
    let lookup = |id: &str| -> Result<NodeId, CliError> {
        names
            .iter()
            .position(|n| n == id)
            .map(NodeId)
            .ok_or_else(|| CliError::Parse(format!("unknown node id {id:?}")))
    };

    let mut outcomes = Vec::with_capacity(file.nodes.len());
    for spec in &file.nodes {
        if spec.outcomes.is_empty() {
            return Err(CliError::Parse(format!(
                "node {}: outcome list is empty",
                spec.id
            )));
        }
        for (k, o) in spec.outcomes.iter().enumerate() {
            if spec.outcomes[..k].contains(o) {
                return Err(CliError::Parse(format!(
                    "node {}: duplicate outcome label {o:?}",
                    spec.id
                )));
            }
        }
        outcomes.push(spec.outcomes.clone());
    }

    let mut graph = DirectedGraph::new(file.nodes.len());
    let mut tables = Vec::with_capacity(file.nodes.len());
    for (k, spec) in file.nodes.iter().enumerate() {
        let child = NodeId(k);
        let mut parents = Vec::with_capacity(spec.parents.len());
        for pid in &spec.parents {
            let p = lookup(pid).map_err(|_| {
                CliError::Parse(format!("node {}: unknown parent {pid:?}", spec.id))
            })?;
            parents.push(p);
        }
        for &p in &parents {
            graph
                .add_arc(p, child)
                .map_err(|e| CliError::Parse(format!("node {}: {e}", spec.id)))?;
        }
        let parent_cards: Vec<usize> = parents.iter().map(|p| outcomes[p.index()].len()).collect();
        let table = Cpt::conditional_from_layout(
            child,
            &parents,
            &parent_cards,
            spec.outcomes.len(),
            spec.table.clone(),
        )
        .map_err(|e| CliError::Parse(format!("node {}: {e}", spec.id)))?;
        tables.push(table);
    }

    let pid =
        Pid::new(names, outcomes, graph, tables).map_err(|e| CliError::Parse(e.to_string()))?;
    if dredge::graph::topological_order(pid.graph()).is_err() {
        return Err(CliError::Engine(dredge::Error::Structural(format!(
            "directed cycle: {}",
            describe_cycle(&pid)
        ))));
    }
    let report = pid.validate();
    Ok((pid, report))
}

/// Names one directed cycle: peel source nodes until only the cyclic core
/// remains, then walk parent links within it until a node repeats.
fn describe_cycle(p: &Pid) -> String {
    let mut core: Vec<NodeId> = p.live_nodes();
    loop {
        let keep: Vec<NodeId> = core
            .iter()
            .copied()
            .filter(|&v| p.graph().parents(v).iter().any(|q| core.contains(q)))
            .collect();
        if keep.len() == core.len() {
            break;
        }
        core = keep;
    }
    let start = core[0];
    let mut path = vec![start];
    let mut cur = start;
    loop {
        let next = *p
            .graph()
            .parents(cur)
            .iter()
            .find(|q| core.contains(q))
            .expect("core nodes keep a parent in the core");
        if let Some(k) = path.iter().position(|&v| v == next) {
            // Parent links run against the arcs, so the cycle reads in
            // reverse path order, closed by its own first node.
            let mut cycle: Vec<&str> = path[k..].iter().rev().map(|&v| p.name(v)).collect();
            cycle.push(cycle[0]);
            return cycle.join(" -> ");
        }
        path.push(next);
        cur = next;
    }
}

/// [`parse_network`] that refuses diagrams with error-severity findings.
pub fn parse_network_strict(text: &str) -> Result<Pid, CliError> {
    let (pid, report) = parse_network(text)?;
    if !report.ok() {
        return Err(CliError::Validation(crate::render_findings(&pid, &report)));
    }
    Ok(pid)
}

/// Canonical serialization of a network (latent nodes with conditional
/// tables only). Output is stable byte-for-byte for a given diagram.
pub fn serialize_network(p: &Pid) -> String {
    let nodes: Vec<NodeSpec> = p
        .live_nodes()
        .into_iter()
        .map(|v| {
            let t = p.table(v);
            NodeSpec {
                id: p.name(v).to_string(),
                outcomes: p.outcomes(v).to_vec(),
                parents: t.parents.iter().map(|&q| p.name(q).to_string()).collect(),
                table: t.values.clone(),
            }
        })
        .collect();
    let file = NetworkFile {
        version: NETWORK_VERSION,
        nodes,
    };
    let mut text = serde_json::to_string_pretty(&file).expect("network files serialize");
    text.push('\n');
    text
}

pub fn parse_evidence(text: &str) -> Result<EvidenceFile, CliError> {
    serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))
}

/// Applies an evidence file: observations are absorbed in listed order,
/// then virtual likelihood nodes are inserted in listed order.
pub fn apply_evidence(
    p: &mut Pid,
    evidence: &EvidenceFile,
    trace: &mut ReversalTrace,
) -> Result<(), CliError> {
    for obs in &evidence.observations {
        let v = p
            .node_by_name(&obs.node)
            .ok_or_else(|| CliError::Parse(format!("unknown evidence node {:?}", obs.node)))?;
        let x = p
            .outcomes(v)
            .iter()
            .position(|o| *o == obs.value)
            .ok_or_else(|| {
                CliError::Parse(format!(
                    "node {}: unknown outcome label {:?}",
                    obs.node, obs.value
                ))
            })?;
        absorb_evidence(p, v, x, trace).map_err(CliError::Engine)?;
    }
    for spec in &evidence.likelihoods {
        check_name(&spec.id)?;
        let mut parents = Vec::with_capacity(spec.parents.len());
        for pid in &spec.parents {
            let q = p.node_by_name(pid).ok_or_else(|| {
                CliError::Parse(format!("likelihood {}: unknown parent {pid:?}", spec.id))
            })?;
            parents.push(q);
        }
        add_likelihood_node(p, &spec.id, &parents, spec.table.clone(), trace)
            .map_err(CliError::Engine)?;
    }
    Ok(())
}
