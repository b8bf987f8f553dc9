//! JSON shapes for machine-readable reports. Node ids are rendered as
//! their labels; field order is fixed so identical runs serialize to
//! identical bytes.

use dredge::graph::NodeId;
use dredge::infer::ComplexityReport;
use dredge::pid::{Pid, Status, TableKind};
use dredge::reduce::{ReversalTrace, TraceStep};
use serde::Serialize;

pub fn label(p: &Pid, v: NodeId) -> String {
    p.name(v).to_string()
}

pub fn labels(p: &Pid, ids: &[NodeId]) -> Vec<String> {
    ids.iter().map(|&v| label(p, v)).collect()
}

#[derive(Serialize)]
pub struct DiagramNodeJson {
    pub id: String,
    pub outcomes: Vec<String>,
    pub parents: Vec<String>,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<String>,
    pub table: Vec<f64>,
}

#[derive(Serialize)]
pub struct DiagramJson {
    pub nodes: Vec<DiagramNodeJson>,
}

pub fn diagram_json(p: &Pid) -> DiagramJson {
    let nodes = p
        .live_nodes()
        .into_iter()
        .map(|v| {
            let t = p.table(v);
            DiagramNodeJson {
                id: label(p, v),
                outcomes: p.outcomes(v).to_vec(),
                parents: labels(p, &t.parents),
                kind: match t.kind {
                    TableKind::Conditional => "conditional".into(),
                    TableKind::Likelihood => "likelihood".into(),
                },
                observed: match p.status(v) {
                    Status::Evidence(Some(x)) => Some(p.outcomes(v)[x].clone()),
                    _ => None,
                },
                table: t.values.clone(),
            }
        })
        .collect();
    DiagramJson { nodes }
}

#[derive(Serialize)]
pub struct InsertedJson {
    pub name: String,
    pub parents: Vec<String>,
    pub values: Vec<f64>,
}

#[derive(Serialize)]
pub struct ChildScopeJson {
    pub node: String,
    pub scope: Vec<String>,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceStepJson {
    ArcReversal {
        i: String,
        j: String,
        parents_i: Vec<String>,
        parents_j: Vec<String>,
        product_scope: Vec<String>,
        scope_i: Vec<String>,
        scope_j: Vec<String>,
        arcs_added: usize,
    },
    EvidenceReversal {
        i: String,
        j: String,
        parents_i: Vec<String>,
        parents_j: Vec<String>,
        product_scope: Vec<String>,
        scope_i: Vec<String>,
        scope_j: Vec<String>,
        arcs_added: usize,
    },
    Absorption {
        node: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        value: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        inserted: Option<InsertedJson>,
        likelihood_scope: Vec<String>,
        child_scopes: Vec<ChildScopeJson>,
    },
    Combination {
        survivor: String,
        removed: Vec<String>,
        parents: Vec<String>,
    },
}

pub fn trace_json(p: &Pid, trace: &ReversalTrace) -> Vec<TraceStepJson> {
    trace
        .steps
        .iter()
        .map(|step| match step {
            TraceStep::ArcReversal {
                i,
                j,
                parents_i,
                parents_j,
                product_scope,
                scope_i,
                scope_j,
                arcs_added,
            } => TraceStepJson::ArcReversal {
                i: label(p, *i),
                j: label(p, *j),
                parents_i: labels(p, parents_i),
                parents_j: labels(p, parents_j),
                product_scope: labels(p, product_scope),
                scope_i: labels(p, scope_i),
                scope_j: labels(p, scope_j),
                arcs_added: *arcs_added,
            },
            TraceStep::EvidenceReversal {
                i,
                j,
                parents_i,
                parents_j,
                product_scope,
                scope_i,
                scope_j,
                arcs_added,
            } => TraceStepJson::EvidenceReversal {
                i: label(p, *i),
                j: label(p, *j),
                parents_i: labels(p, parents_i),
                parents_j: labels(p, parents_j),
                product_scope: labels(p, product_scope),
                scope_i: labels(p, scope_i),
                scope_j: labels(p, scope_j),
                arcs_added: *arcs_added,
            },
            TraceStep::Absorption {
                node,
                value,
                inserted,
                likelihood_scope,
                child_scopes,
            } => TraceStepJson::Absorption {
                node: label(p, *node),
                value: value.map(|x| p.outcomes(*node)[x].clone()),
                inserted: inserted.as_ref().map(|ins| InsertedJson {
                    name: ins.name.clone(),
                    parents: labels(p, &ins.parents),
                    values: ins.values.clone(),
                }),
                likelihood_scope: labels(p, likelihood_scope),
                child_scopes: child_scopes
                    .iter()
                    .map(|(k, scope)| ChildScopeJson {
                        node: label(p, *k),
                        scope: labels(p, scope),
                    })
                    .collect(),
            },
            TraceStep::Combination {
                survivor,
                removed,
                parents,
            } => TraceStepJson::Combination {
                survivor: label(p, *survivor),
                removed: labels(p, removed),
                parents: labels(p, parents),
            },
        })
        .collect()
}

#[derive(Serialize)]
pub struct ComplexityJson {
    pub max_table_scope: Vec<String>,
    pub max_table_cells: usize,
    pub max_clique_cells: usize,
    pub clique_containment: bool,
    pub added_arc_count: usize,
    pub step_scopes: Vec<Vec<Vec<String>>>,
}

pub fn complexity_json(p: &Pid, report: &ComplexityReport) -> ComplexityJson {
    ComplexityJson {
        max_table_scope: labels(p, &report.max_table_scope),
        max_table_cells: report.max_table_cells,
        max_clique_cells: report.max_clique_cells,
        clique_containment: report.clique_containment,
        added_arc_count: report.added_arc_count,
        step_scopes: report
            .step_scopes
            .iter()
            .map(|scopes| scopes.iter().map(|s| labels(p, s)).collect())
            .collect(),
    }
}
