//! The reduction calculus: arc reversal, pre-reversal toward a target
//! order, evidence absorption, likelihood-node insertion, evidence
//! reversal, and evidence propagation.
//!
//! Every operation mutates one diagram in place, appends a step to a
//! [`ReversalTrace`], and finishes with a loud validation pass: a diagram
//! that stops validating after an operation is a bug, not a condition to
//! renormalize away.

use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeOrder};
use crate::pid::{Cpt, Pid, Status};

/// Definition of a likelihood node inserted to carry soft evidence,
/// recorded so a trace can be replayed from the starting diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct InsertedLikelihood {
    pub name: String,
    /// Parents in canonical order; `values` uses the canonical layout.
    pub parents: Vec<NodeId>,
    pub values: Vec<f64>,
}

/// One recorded reduction step. Each step carries the operation's inputs
/// (enough to replay it) plus the parent sets and the scope of every table
/// built, including the transient product formed inside a reversal.
#[derive(Clone, Debug, PartialEq)]
pub enum TraceStep {
    ArcReversal {
        i: NodeId,
        j: NodeId,
        parents_i: Vec<NodeId>,
        parents_j: Vec<NodeId>,
        product_scope: Vec<NodeId>,
        scope_i: Vec<NodeId>,
        scope_j: Vec<NodeId>,
        arcs_added: usize,
    },
    EvidenceReversal {
        i: NodeId,
        j: NodeId,
        parents_i: Vec<NodeId>,
        parents_j: Vec<NodeId>,
        product_scope: Vec<NodeId>,
        scope_i: Vec<NodeId>,
        scope_j: Vec<NodeId>,
        arcs_added: usize,
    },
    Absorption {
        node: NodeId,
        /// Observed outcome index for exact evidence; `None` when the step
        /// inserted a virtual likelihood node.
        value: Option<usize>,
        inserted: Option<InsertedLikelihood>,
        likelihood_scope: Vec<NodeId>,
        child_scopes: Vec<(NodeId, Vec<NodeId>)>,
    },
    Combination {
        survivor: NodeId,
        removed: Vec<NodeId>,
        parents: Vec<NodeId>,
    },
}

impl TraceStep {
    /// Scopes of all tables this step materialized.
    pub fn scopes(&self) -> Vec<Vec<NodeId>> {
        match self {
            TraceStep::ArcReversal {
                product_scope,
                scope_i,
                scope_j,
                ..
            }
            | TraceStep::EvidenceReversal {
                product_scope,
                scope_i,
                scope_j,
                ..
            } => vec![product_scope.clone(), scope_j.clone(), scope_i.clone()],
            TraceStep::Absorption {
                likelihood_scope,
                child_scopes,
                ..
            } => {
                let mut out = vec![likelihood_scope.clone()];
                out.extend(child_scopes.iter().map(|(_, s)| s.clone()));
                out
            }
            TraceStep::Combination { parents, .. } => vec![parents.clone()],
        }
    }

    /// New adjacencies between unobserved nodes this step created. Arcs
    /// into evidence nodes are scaffolding that later reversals absorb
    /// again, so they are not counted.
    pub fn arcs_added(&self) -> usize {
        match self {
            TraceStep::ArcReversal { arcs_added, .. }
            | TraceStep::EvidenceReversal { arcs_added, .. } => *arcs_added,
            TraceStep::Absorption { .. } | TraceStep::Combination { .. } => 0,
        }
    }
}

/// Append-only log of reduction steps.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReversalTrace {
    pub steps: Vec<TraceStep>,
}

impl ReversalTrace {
    pub fn new() -> Self {
        ReversalTrace::default()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn arcs_added_total(&self) -> usize {
        self.steps.iter().map(|s| s.arcs_added()).sum()
    }
}

fn validate_after(p: &Pid, what: &str) -> Result<()> {
    let report = p.validate();
    if report.ok() {
        return Ok(());
    }
    let first = report
        .findings
        .iter()
        .find(|f| f.severity == crate::pid::Severity::Error)
        .expect("a failing report has an error finding");
    Err(Error::Internal(format!(
        "diagram invalid after {what}: {}: {}",
        first.subject, first.message
    )))
}

fn require_live(p: &Pid, v: NodeId) -> Result<()> {
    if !p.is_alive(v) {
        return Err(Error::Input(format!("unknown or removed node {}", v)));
    }
    Ok(())
}

/// True iff `(i, j)` is the only directed path from `i` to `j`, so the arc
/// can be reversed without creating a cycle.
pub fn is_reversible(p: &Pid, i: NodeId, j: NodeId) -> Result<bool> {
    require_live(p, i)?;
    require_live(p, j)?;
    if !p.graph().has_arc(i, j) {
        return Err(Error::Input(format!(
            "({}, {}) is not an arc of the diagram",
            p.name(i),
            p.name(j)
        )));
    }
    for &c in p.graph().children(i) {
        if c != j && p.graph().has_path(c, j) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reverses the arc `(i, j)`. Both endpoints inherit each other's parents
/// and the joint distribution over all variables is unchanged:
/// the new table of `j` sums the product table over the outcomes of `i`,
/// and the new table of `i` is the product divided by it.
pub fn reverse_arc(p: &mut Pid, i: NodeId, j: NodeId, trace: &mut ReversalTrace) -> Result<()> {
    require_live(p, i)?;
    require_live(p, j)?;
    if !p.graph().has_arc(i, j) {
        return Err(Error::Input(format!(
            "({}, {}) is not an arc of the diagram",
            p.name(i),
            p.name(j)
        )));
    }
    if p.is_evidence(i) || p.is_evidence(j) {
        return Err(Error::Input(format!(
            "arc ({}, {}) touches an evidence node; use evidence reversal",
            p.name(i),
            p.name(j)
        )));
    }
    if !is_reversible(p, i, j)? {
        return Err(Error::Structural(format!(
            "arc ({}, {}) is not reversible: another directed path exists",
            p.name(i),
            p.name(j)
        )));
    }

    let product = p.table_factor(i).product(&p.table_factor(j));
    let product_scope = product.scope().to_vec();
    let new_j = product.sum_out(i);
    let new_i = product.divide_with_uniform(&new_j, i);

    let parents_j: Vec<NodeId> = product_scope
        .iter()
        .copied()
        .filter(|&v| v != i && v != j)
        .collect();
    let parents_i: Vec<NodeId> = product_scope.iter().copied().filter(|&v| v != i).collect();

    let mut arcs_added = 0;
    for &u in &parents_j {
        if !p.graph().adjacent(u, j) {
            arcs_added += 1;
        }
    }
    for &u in &parents_i {
        if u != j && !p.graph().adjacent(u, i) {
            arcs_added += 1;
        }
    }

    p.set_parents(j, &parents_j);
    p.set_parents(i, &parents_i);
    p.set_table(j, Cpt::from_factor_conditional(j, &new_j));
    p.set_table(i, Cpt::from_factor_conditional(i, &new_i));

    trace.steps.push(TraceStep::ArcReversal {
        i,
        j,
        parents_i: parents_i.clone(),
        parents_j: parents_j.clone(),
        product_scope,
        scope_i: p.table(i).scope(),
        scope_j: p.table(j).scope(),
        arcs_added,
    });
    validate_after(p, "arc reversal")
}

/// Reverses arcs until `target` is an ordered list for the diagram,
/// visiting each node in reverse target order and reversing its arcs into
/// target-earlier children. Among pending children, arcs are taken in the
/// diagram's current partial order, ties broken by target position; the
/// result stays inside the minimal decomposable structure for `target`.
pub fn pre_reverse_to_target(
    p: &mut Pid,
    target: &NodeOrder,
    trace: &mut ReversalTrace,
) -> Result<()> {
    if !p.evidence_nodes().is_empty() {
        return Err(Error::Input(
            "pre-reversal requires a diagram without evidence nodes".into(),
        ));
    }
    if !target.is_permutation_of(&p.live_nodes()) {
        return Err(Error::Input(
            "target is not a permutation of the diagram's nodes".into(),
        ));
    }
    for &k in target.as_slice().iter().rev() {
        let pk = target.position(k).expect("target covers live nodes");
        let mut pending: Vec<NodeId> = p
            .graph()
            .children(k)
            .iter()
            .copied()
            .filter(|&j| target.position(j).expect("target covers live nodes") < pk)
            .collect();
        pending.sort_by_key(|&j| target.position(j));
        while !pending.is_empty() {
            let next = pending
                .iter()
                .copied()
                .find(|&j| pending.iter().all(|&o| o == j || !p.graph().has_path(o, j)))
                .ok_or_else(|| {
                    Error::Internal("pending reversals are cyclically dependent".into())
                })?;
            reverse_arc(p, k, next, trace)?;
            pending.retain(|&x| x != next);
        }
    }
    Ok(())
}

/// Records the exact observation of `j` at outcome `x`: its table becomes
/// a likelihood over its parents and the arc to each child is absorbed by
/// slicing the child's table at the observed value.
pub fn absorb_evidence(p: &mut Pid, j: NodeId, x: usize, trace: &mut ReversalTrace) -> Result<()> {
    require_live(p, j)?;
    if p.is_evidence(j) {
        return Err(Error::Input(format!(
            "{} is already an evidence node",
            p.name(j)
        )));
    }
    if x >= p.cardinality(j) {
        return Err(Error::Input(format!(
            "outcome index {} out of range for {} ({} outcomes)",
            x,
            p.name(j),
            p.cardinality(j)
        )));
    }

    let own = p.table_factor(j).slice(j, x);
    let likelihood_scope = own.scope().to_vec();
    p.set_table(j, Cpt::from_factor_likelihood(j, &own));
    p.set_status(j, Status::Evidence(Some(x)));

    let mut child_scopes = Vec::new();
    for k in p.graph().children(j).to_vec() {
        let sliced = p.table_factor(k).slice(j, x);
        let parents: Vec<NodeId> = p
            .graph()
            .parents(k)
            .iter()
            .copied()
            .filter(|&v| v != j)
            .collect();
        p.set_parents(k, &parents);
        let cpt = if p.is_evidence(k) {
            Cpt::from_factor_likelihood(k, &sliced)
        } else {
            Cpt::from_factor_conditional(k, &sliced)
        };
        p.set_table(k, cpt);
        child_scopes.push((k, p.table(k).scope()));
    }

    trace.steps.push(TraceStep::Absorption {
        node: j,
        value: Some(x),
        inserted: None,
        likelihood_scope,
        child_scopes,
    });
    validate_after(p, "evidence absorption")
}

/// Appends a childless virtual node carrying soft evidence about
/// `parents`. The node is created already absorbed: its table is a
/// likelihood function of the parents (laid out with `parents` most
/// significant in the given order) and it joins the evidence set.
pub fn add_likelihood_node(
    p: &mut Pid,
    name: &str,
    parents: &[NodeId],
    values: Vec<f64>,
    trace: &mut ReversalTrace,
) -> Result<NodeId> {
    let mut seen = Vec::new();
    for &v in parents {
        require_live(p, v)?;
        if p.is_evidence(v) {
            return Err(Error::Input(format!(
                "likelihood parent {} is already observed",
                p.name(v)
            )));
        }
        if seen.contains(&v) {
            return Err(Error::Input(format!(
                "duplicate likelihood parent {}",
                p.name(v)
            )));
        }
        seen.push(v);
    }
    let cards: Vec<usize> = parents.iter().map(|&v| p.cardinality(v)).collect();
    let expect: usize = cards.iter().product();
    if values.len() != expect {
        return Err(Error::Input(format!(
            "likelihood table for {name:?} has {} values, expected {}",
            values.len(),
            expect
        )));
    }
    if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::Input(format!(
            "likelihood table for {name:?} has a negative or non-finite value"
        )));
    }

    let factor = crate::factor::Factor::new(parents.to_vec(), cards, values);
    let k = p.push_node(name.to_string(), vec!["observed".to_string()])?;
    let mut canonical = parents.to_vec();
    canonical.sort_unstable();
    p.set_parents(k, &canonical);
    p.set_table(k, Cpt::from_factor_likelihood(k, &factor));
    p.set_status(k, Status::Evidence(None));

    let table = p.table(k);
    trace.steps.push(TraceStep::Absorption {
        node: k,
        value: None,
        inserted: Some(InsertedLikelihood {
            name: name.to_string(),
            parents: table.parents.clone(),
            values: table.values.clone(),
        }),
        likelihood_scope: table.parents.clone(),
        child_scopes: Vec::new(),
    });
    validate_after(p, "likelihood node insertion")?;
    Ok(k)
}

/// Reversal specialized to an evidence successor `j`: the arc `(i, j)` is
/// removed and no return arc is created. Afterwards `i` and `j` share the
/// parent set `(C(i) ∪ C(j)) \ {i}`; the new likelihood of `j` sums the
/// product table over the outcomes of `i`, and `i`'s new table is the
/// product divided by it (uniform where the likelihood is zero).
pub fn evidence_reverse(
    p: &mut Pid,
    i: NodeId,
    j: NodeId,
    trace: &mut ReversalTrace,
) -> Result<()> {
    require_live(p, i)?;
    require_live(p, j)?;
    if !p.is_evidence(j) {
        return Err(Error::Input(format!(
            "{} is not an evidence node",
            p.name(j)
        )));
    }
    if p.is_evidence(i) {
        return Err(Error::Input(format!(
            "{} is an evidence node; evidence reversal expects an unobserved parent",
            p.name(i)
        )));
    }
    if !p.graph().has_arc(i, j) {
        return Err(Error::Input(format!(
            "({}, {}) is not an arc of the diagram",
            p.name(i),
            p.name(j)
        )));
    }
    for &c in p.graph().children(i) {
        if c != j && p.graph().has_path(c, j) {
            return Err(Error::Structural(format!(
                "arc ({}, {}) is not reversible: another directed path exists",
                p.name(i),
                p.name(j)
            )));
        }
    }

    let product = p.table_factor(i).product(&p.table_factor(j));
    let product_scope = product.scope().to_vec();
    let new_j = product.sum_out(i);
    let new_i = product.divide_with_uniform(&new_j, i);

    let parents: Vec<NodeId> = new_j.scope().to_vec();
    let mut arcs_added = 0;
    for &u in &parents {
        if !p.graph().adjacent(u, i) {
            arcs_added += 1;
        }
    }

    p.set_parents(j, &parents);
    p.set_parents(i, &parents);
    p.set_table(j, Cpt::from_factor_likelihood(j, &new_j));
    p.set_table(i, Cpt::from_factor_conditional(i, &new_i));

    trace.steps.push(TraceStep::EvidenceReversal {
        i,
        j,
        parents_i: parents.clone(),
        parents_j: parents.clone(),
        product_scope,
        scope_i: p.table(i).scope(),
        scope_j: p.table(j).scope(),
        arcs_added,
    });
    validate_after(p, "evidence reversal")
}

/// Disconnects the evidence node `j` by reversing the arc from each of its
/// unobserved ancestors, taken in reverse order of the diagram's ordered
/// list. Afterwards `j` has neither parents nor children and its table is
/// a scalar.
pub fn propagate_evidence(p: &mut Pid, j: NodeId, trace: &mut ReversalTrace) -> Result<()> {
    require_live(p, j)?;
    if !p.is_evidence(j) {
        return Err(Error::Input(format!(
            "{} is not an evidence node",
            p.name(j)
        )));
    }
    let order = p
        .ordered_list()
        .map_err(|_| Error::Structural("diagram has a directed cycle; cannot propagate".into()))?;
    let mut guard = p.live_count() + 1;
    while !p.graph().parents(j).is_empty() {
        guard = guard
            .checked_sub(1)
            .filter(|&g| g > 0)
            .ok_or_else(|| Error::Internal("evidence propagation failed to terminate".into()))?;
        let i = p
            .graph()
            .parents(j)
            .iter()
            .copied()
            .max_by_key(|&v| order.position(v))
            .expect("parent list is non-empty");
        evidence_reverse(p, i, j, trace)?;
    }
    Ok(())
}

/// Merges several childless evidence nodes into one by multiplying their
/// likelihood functions over the union of their parent sets. The node with
/// the smallest id survives; the others are removed from the diagram.
pub fn combine_evidence_children(
    p: &mut Pid,
    children: &[NodeId],
    trace: &mut ReversalTrace,
) -> Result<NodeId> {
    if children.is_empty() {
        return Err(Error::Input("no evidence nodes to combine".into()));
    }
    let mut sorted = children.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != children.len() {
        return Err(Error::Input(
            "duplicate node in evidence combination".into(),
        ));
    }
    for &c in &sorted {
        require_live(p, c)?;
        if !p.is_evidence(c) {
            return Err(Error::Input(format!(
                "{} is not an evidence node",
                p.name(c)
            )));
        }
        if !p.graph().children(c).is_empty() {
            return Err(Error::Input(format!(
                "evidence node {} still has children",
                p.name(c)
            )));
        }
    }
    if sorted.len() == 1 {
        return Ok(sorted[0]);
    }

    let survivor = sorted[0];
    let mut product = p.table_factor(survivor);
    for &c in &sorted[1..] {
        product = product.product(&p.table_factor(c));
    }
    let parents = product.scope().to_vec();

    let removed: Vec<NodeId> = sorted[1..].to_vec();
    for &c in &removed {
        p.remove_node(c);
    }
    p.set_parents(survivor, &parents);
    p.set_table(survivor, Cpt::from_factor_likelihood(survivor, &product));

    trace.steps.push(TraceStep::Combination {
        survivor,
        removed,
        parents,
    });
    validate_after(p, "evidence combination")?;
    Ok(survivor)
}

/// Propagates all absorbed evidence in one sweep: every unobserved node is
/// visited once in reverse `order`; a node with one evidence child gets an
/// evidence reversal, a node with several gets them combined first.
/// `order` must be an ordered list for the diagram when the sweep starts.
/// Afterwards every evidence node is a disconnected scalar.
pub fn propagate_all(p: &mut Pid, order: &NodeOrder, trace: &mut ReversalTrace) -> Result<()> {
    if !p.is_ordered_for(order)? {
        return Err(Error::Input(
            "order is not an ordered list for the diagram".into(),
        ));
    }
    for &v in order.as_slice().iter().rev() {
        if !p.is_alive(v) || p.is_evidence(v) {
            continue;
        }
        let evidence_children: Vec<NodeId> = p
            .graph()
            .children(v)
            .iter()
            .copied()
            .filter(|&c| p.is_evidence(c))
            .collect();
        match evidence_children.len() {
            0 => {}
            1 => evidence_reverse(p, v, evidence_children[0], trace)?,
            _ => {
                let merged = combine_evidence_children(p, &evidence_children, trace)?;
                evidence_reverse(p, v, merged, trace)?;
            }
        }
    }
    for e in p.evidence_nodes() {
        if !p.graph().parents(e).is_empty() || !p.graph().children(e).is_empty() {
            return Err(Error::Internal(format!(
                "evidence node {} is still connected after propagation",
                p.name(e)
            )));
        }
    }
    Ok(())
}

/// Replays a trace against the diagram it was recorded from, reproducing
/// the final diagram exactly.
pub fn replay(base: &Pid, trace: &ReversalTrace) -> Result<Pid> {
    let mut p = base.clone();
    let mut scratch = ReversalTrace::new();
    for step in &trace.steps {
        match step {
            TraceStep::ArcReversal { i, j, .. } => reverse_arc(&mut p, *i, *j, &mut scratch)?,
            TraceStep::EvidenceReversal { i, j, .. } => {
                evidence_reverse(&mut p, *i, *j, &mut scratch)?
            }
            TraceStep::Absorption {
                node,
                value: Some(x),
                ..
            } => absorb_evidence(&mut p, *node, *x, &mut scratch)?,
            TraceStep::Absorption {
                node,
                value: None,
                inserted: Some(spec),
                ..
            } => {
                let k = add_likelihood_node(
                    &mut p,
                    &spec.name,
                    &spec.parents,
                    spec.values.clone(),
                    &mut scratch,
                )?;
                if k != *node {
                    return Err(Error::Internal(
                        "replayed likelihood node got a different id".into(),
                    ));
                }
            }
            TraceStep::Absorption {
                value: None,
                inserted: None,
                ..
            } => {
                return Err(Error::Input("malformed absorption step in trace".into()));
            }
            TraceStep::Combination {
                survivor, removed, ..
            } => {
                let mut children = removed.clone();
                children.push(*survivor);
                children.sort_unstable();
                let s = combine_evidence_children(&mut p, &children, &mut scratch)?;
                if s != *survivor {
                    return Err(Error::Internal(
                        "replayed combination kept a different survivor".into(),
                    ));
                }
            }
        }
    }
    Ok(p)
}
