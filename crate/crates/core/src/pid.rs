//! The probabilistic influence diagram: a DAG whose nodes carry dense
//! conditional tables, plus evidence bookkeeping, validation, and the
//! decomposability machinery.
//!
//! Table layout is canonical everywhere: parents appear in ascending
//! node-list order as the most significant axes and the child outcome
//! varies fastest. Operations that change a node's parent set rebuild its
//! table in that layout, so serialized output is stable.

use crate::error::{Error, Result};
use crate::factor::Factor;
use crate::graph::{
    self, fill_in, moral_graph, orient_by_order, topological_order, DirectedGraph, NodeId,
    NodeOrder,
};

/// Absolute tolerance for every per-configuration normalization check.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Whether a table is a conditional distribution over its child or a
/// likelihood function of its parents (child axis of length one).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    Conditional,
    Likelihood,
}

/// Dense probability table attached to one node.
#[derive(Clone, Debug, PartialEq)]
pub struct Cpt {
    pub child: NodeId,
    /// Parents in ascending node-list order.
    pub parents: Vec<NodeId>,
    /// Outcome count of the child axis; 1 for likelihood tables.
    pub child_card: usize,
    pub parent_cards: Vec<usize>,
    /// Flat values: parents most significant in listed order, child fastest.
    pub values: Vec<f64>,
    pub kind: TableKind,
}

impl Cpt {
    pub fn conditional(
        child: NodeId,
        parents: Vec<NodeId>,
        parent_cards: Vec<usize>,
        child_card: usize,
        values: Vec<f64>,
    ) -> Result<Cpt> {
        let cpt = Cpt {
            child,
            parents,
            child_card,
            parent_cards,
            values,
            kind: TableKind::Conditional,
        };
        cpt.check_shape()?;
        Ok(cpt)
    }

    pub fn likelihood(
        child: NodeId,
        parents: Vec<NodeId>,
        parent_cards: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Cpt> {
        let cpt = Cpt {
            child,
            parents,
            child_card: 1,
            parent_cards,
            values,
            kind: TableKind::Likelihood,
        };
        cpt.check_shape()?;
        Ok(cpt)
    }

    /// Builds a conditional table from values laid out with `parents` most
    /// significant in the *given* order (child fastest), permuting the
    /// axes into canonical parent order.
    pub fn conditional_from_layout(
        child: NodeId,
        parents: &[NodeId],
        parent_cards: &[usize],
        child_card: usize,
        values: Vec<f64>,
    ) -> Result<Cpt> {
        if parents.len() != parent_cards.len() {
            return Err(Error::Input(format!(
                "node {}: parent list and cardinality list differ in length",
                child
            )));
        }
        let mut distinct = parents.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != parents.len() || parents.contains(&child) {
            return Err(Error::Input(format!(
                "node {}: parent list repeats a node or lists the child",
                child
            )));
        }
        let expect = child_card * parent_cards.iter().product::<usize>();
        if values.len() != expect {
            return Err(Error::Input(format!(
                "node {}: table has {} values, expected {}",
                child,
                values.len(),
                expect
            )));
        }
        let mut scope = parents.to_vec();
        scope.push(child);
        let mut cards = parent_cards.to_vec();
        cards.push(child_card);
        let factor = Factor::new(scope, cards, values);
        Ok(Cpt::from_factor_conditional(child, &factor))
    }

    fn check_shape(&self) -> Result<()> {
        if self.parents.len() != self.parent_cards.len() {
            return Err(Error::Input(format!(
                "node {}: parent list and cardinality list differ in length",
                self.child
            )));
        }
        let expect = self.child_card * self.parent_cards.iter().product::<usize>();
        if self.values.len() != expect {
            return Err(Error::Input(format!(
                "node {}: table has {} values, expected {}",
                self.child,
                self.values.len(),
                expect
            )));
        }
        Ok(())
    }

    pub fn parent_config_count(&self) -> usize {
        self.parent_cards.iter().product()
    }

    /// Variables the table ranges over: parents, plus the child for
    /// conditional tables. Sorted by node-list position.
    pub fn scope(&self) -> Vec<NodeId> {
        let mut s = self.parents.clone();
        if self.kind == TableKind::Conditional {
            s.push(self.child);
            s.sort_unstable();
        }
        s
    }

    pub(crate) fn to_factor(&self) -> Factor {
        match self.kind {
            TableKind::Conditional => {
                let mut scope = self.parents.clone();
                scope.push(self.child);
                let mut cards = self.parent_cards.clone();
                cards.push(self.child_card);
                Factor::new(scope, cards, self.values.clone())
            }
            TableKind::Likelihood => Factor::new(
                self.parents.clone(),
                self.parent_cards.clone(),
                self.values.clone(),
            ),
        }
    }

    /// Rebuilds a conditional table from a factor whose scope contains the
    /// child; remaining variables become the canonical parent list.
    pub(crate) fn from_factor_conditional(child: NodeId, f: &Factor) -> Cpt {
        let mut parents: Vec<NodeId> = f.scope().iter().copied().filter(|&v| v != child).collect();
        parents.sort_unstable();
        let mut layout = parents.clone();
        layout.push(child);
        let g = f.reorder(&layout);
        let child_card = *g.cards().last().expect("child axis present");
        Cpt {
            child,
            parent_cards: g.cards()[..parents.len()].to_vec(),
            parents,
            child_card,
            values: g.values().to_vec(),
            kind: TableKind::Conditional,
        }
    }

    /// Rebuilds a likelihood table from a factor over the parent set.
    pub(crate) fn from_factor_likelihood(child: NodeId, f: &Factor) -> Cpt {
        let mut parents = f.scope().to_vec();
        parents.sort_unstable();
        let g = f.reorder(&parents);
        Cpt {
            child,
            parent_cards: g.cards().to_vec(),
            parents,
            child_card: 1,
            values: g.values().to_vec(),
            kind: TableKind::Likelihood,
        }
    }
}

/// Observation state of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// Ordinary uncertain variable.
    Latent,
    /// Evidence node: `Some(x)` records an exact observation at outcome
    /// index `x`; `None` marks a virtual node inserted to carry soft
    /// evidence about its parents.
    Evidence(Option<usize>),
}

impl Status {
    pub fn is_evidence(self) -> bool {
        matches!(self, Status::Evidence(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// One validation finding: severity, the node or arc concerned, message.
#[derive(Clone, Debug)]
pub struct Finding {
    pub severity: Severity,
    pub subject: String,
    pub message: String,
}

/// Outcome of [`Pid::validate`]; `ok` iff no error-severity finding.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.findings.iter().all(|f| f.severity != Severity::Error)
    }

    fn error(&mut self, subject: impl Into<String>, message: impl Into<String>) {
        self.findings.push(Finding {
            severity: Severity::Error,
            subject: subject.into(),
            message: message.into(),
        });
    }

    fn warning(&mut self, subject: impl Into<String>, message: impl Into<String>) {
        self.findings.push(Finding {
            severity: Severity::Warning,
            subject: subject.into(),
            message: message.into(),
        });
    }
}

/// A probabilistic influence diagram.
///
/// Node ids are stable for the life of the diagram: nodes removed by
/// evidence combination stay as dead slots with no arcs and are skipped by
/// every operation.
#[derive(Clone, Debug, PartialEq)]
pub struct Pid {
    names: Vec<String>,
    outcomes: Vec<Vec<String>>,
    graph: DirectedGraph,
    tables: Vec<Cpt>,
    status: Vec<Status>,
    alive: Vec<bool>,
}

impl Pid {
    /// Builds a diagram from its parts. Only shape-level consistency is
    /// enforced here; semantic problems (bad normalization, mismatched
    /// parent lists, cycles) are surfaced by [`Pid::validate`].
    pub fn new(
        names: Vec<String>,
        outcomes: Vec<Vec<String>>,
        graph: DirectedGraph,
        tables: Vec<Cpt>,
    ) -> Result<Pid> {
        let n = names.len();
        if outcomes.len() != n || graph.node_count() != n || tables.len() != n {
            return Err(Error::Input(
                "names, outcomes, graph and tables must agree on the node count".into(),
            ));
        }
        for (k, name) in names.iter().enumerate() {
            if names[..k].contains(name) {
                return Err(Error::Input(format!("duplicate node name {name:?}")));
            }
        }
        for (k, o) in outcomes.iter().enumerate() {
            if o.is_empty() {
                return Err(Error::Input(format!(
                    "node {} has an empty outcome list",
                    names[k]
                )));
            }
        }
        Ok(Pid {
            status: vec![Status::Latent; n],
            alive: vec![true; n],
            names,
            outcomes,
            graph,
            tables,
        })
    }

    pub fn slot_count(&self) -> usize {
        self.names.len()
    }

    pub fn is_alive(&self, v: NodeId) -> bool {
        v.0 < self.slot_count() && self.alive[v.0]
    }

    /// Live nodes in node-list order.
    pub fn live_nodes(&self) -> Vec<NodeId> {
        (0..self.slot_count())
            .map(NodeId)
            .filter(|&v| self.alive[v.0])
            .collect()
    }

    pub fn live_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    fn check_live(&self, v: NodeId) -> Result<()> {
        if !self.is_alive(v) {
            return Err(Error::Input(format!("unknown or removed node {}", v)));
        }
        Ok(())
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v.0]
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(NodeId)
            .filter(|&v| self.alive[v.0])
    }

    pub fn outcomes(&self, v: NodeId) -> &[String] {
        &self.outcomes[v.0]
    }

    /// Outcome count of the node's variable (not of its table axis).
    pub fn cardinality(&self, v: NodeId) -> usize {
        self.outcomes[v.0].len()
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn table(&self, v: NodeId) -> &Cpt {
        &self.tables[v.0]
    }

    pub fn status(&self, v: NodeId) -> Status {
        self.status[v.0]
    }

    pub fn is_evidence(&self, v: NodeId) -> bool {
        self.status[v.0].is_evidence()
    }

    /// Live evidence nodes in node-list order.
    pub fn evidence_nodes(&self) -> Vec<NodeId> {
        self.live_nodes()
            .into_iter()
            .filter(|&v| self.is_evidence(v))
            .collect()
    }

    /// Live unobserved nodes in node-list order.
    pub fn latent_nodes(&self) -> Vec<NodeId> {
        self.live_nodes()
            .into_iter()
            .filter(|&v| !self.is_evidence(v))
            .collect()
    }

    // ----- mutation surface used by the reduction operations -----

    pub(crate) fn set_table(&mut self, v: NodeId, cpt: Cpt) {
        debug_assert_eq!(cpt.child, v);
        self.tables[v.0] = cpt;
    }

    pub(crate) fn set_status(&mut self, v: NodeId, s: Status) {
        self.status[v.0] = s;
    }

    /// Replaces v's parent set in the graph, keeping child arcs untouched.
    pub(crate) fn set_parents(&mut self, v: NodeId, parents: &[NodeId]) {
        for p in self.graph.parents(v).to_vec() {
            if !parents.contains(&p) {
                self.graph.remove_arc(p, v).expect("arc exists");
            }
        }
        for &p in parents {
            if !self.graph.has_arc(p, v) {
                self.graph.add_arc(p, v).expect("nodes exist");
            }
        }
    }

    /// Appends a fresh node. The caller installs its table and status.
    pub(crate) fn push_node(&mut self, name: String, outcomes: Vec<String>) -> Result<NodeId> {
        if self.names.contains(&name) {
            return Err(Error::Input(format!("duplicate node name {name:?}")));
        }
        let v = self.graph.add_node();
        self.names.push(name);
        let card = outcomes.len();
        self.outcomes.push(outcomes);
        self.tables.push(
            Cpt::conditional(
                v,
                Vec::new(),
                Vec::new(),
                card,
                vec![1.0 / card as f64; card],
            )
            .expect("uniform placeholder table is well-formed"),
        );
        self.status.push(Status::Latent);
        self.alive.push(true);
        Ok(v)
    }

    /// Marks a node dead and removes its remaining arcs.
    pub(crate) fn remove_node(&mut self, v: NodeId) {
        for p in self.graph.parents(v).to_vec() {
            self.graph.remove_arc(p, v).expect("arc exists");
        }
        for c in self.graph.children(v).to_vec() {
            self.graph.remove_arc(v, c).expect("arc exists");
        }
        self.alive[v.0] = false;
    }

    pub(crate) fn table_factor(&self, v: NodeId) -> Factor {
        self.tables[v.0].to_factor()
    }

    // ----- queries -----

    /// Checks every diagram invariant and reports findings; never fails.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if !self.graph.is_acyclic() {
            report.error("graph", "directed cycle present");
        }
        for v in (0..self.slot_count()).map(NodeId) {
            let subject = self.names[v.0].clone();
            if !self.alive[v.0] {
                if !self.graph.parents(v).is_empty() || !self.graph.children(v).is_empty() {
                    report.error(subject, "removed node still has arcs");
                }
                continue;
            }
            let t = &self.tables[v.0];
            if t.child != v {
                report.error(subject, "table attached to the wrong node");
                continue;
            }
            if t.parents != self.graph.parents(v) {
                report.error(
                    subject,
                    format!(
                        "parents mismatch: table lists [{}], graph has [{}]",
                        join_names(self, &t.parents),
                        join_names(self, self.graph.parents(v))
                    ),
                );
                continue;
            }
            let cards_ok = t
                .parents
                .iter()
                .zip(t.parent_cards.iter())
                .all(|(&p, &c)| self.is_alive(p) && self.cardinality(p) == c);
            if !cards_ok {
                report.error(subject, "parent cardinalities disagree with outcome lists");
                continue;
            }
            if t.check_shape().is_err() {
                report.error(subject, "table length disagrees with its dimensions");
                continue;
            }
            if t.values.iter().any(|x| !x.is_finite()) {
                report.error(subject.clone(), "table contains a non-finite value");
            }
            if t.values.iter().any(|&x| x < 0.0) {
                report.error(subject.clone(), "table contains a negative value");
            }
            match self.status[v.0] {
                Status::Latent => {
                    if t.kind != TableKind::Conditional {
                        report.error(
                            subject.clone(),
                            "unobserved node carries a likelihood table",
                        );
                    } else if t.child_card != self.cardinality(v) {
                        report.error(subject.clone(), "child axis disagrees with outcome list");
                    } else {
                        for cfg in 0..t.parent_config_count() {
                            let base = cfg * t.child_card;
                            let sum: f64 = t.values[base..base + t.child_card].iter().sum();
                            if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
                                report.error(
                                    subject.clone(),
                                    format!("normalization: configuration {} sums to {}", cfg, sum),
                                );
                            }
                        }
                    }
                }
                Status::Evidence(observed) => {
                    if t.kind != TableKind::Likelihood {
                        report.error(subject.clone(), "evidence node lacks a likelihood table");
                    } else if t.child_card != 1 {
                        report.error(subject.clone(), "likelihood table keeps a child axis");
                    }
                    if let Some(x) = observed {
                        if x >= self.cardinality(v) {
                            report.error(
                                subject.clone(),
                                format!("observed outcome index {} out of range", x),
                            );
                        }
                    }
                    if !self.graph.children(v).is_empty() {
                        report.error(subject.clone(), "evidence node still has children");
                    }
                }
            }
        }
        // Non-decomposability is worth surfacing but is not a defect.
        for v in self.live_nodes() {
            let ps = self.graph.parents(v);
            for (k, &a) in ps.iter().enumerate() {
                for &b in &ps[k + 1..] {
                    if !self.graph.adjacent(a, b) {
                        report.warning(
                            self.names[v.0].clone(),
                            format!(
                                "not decomposable: parents {} and {} are not adjacent",
                                self.names[a.0], self.names[b.0]
                            ),
                        );
                    }
                }
            }
        }
        report
    }

    /// Ancestors of `j` plus `j` itself, in node-list order.
    pub fn ancestral_set(&self, j: NodeId) -> Result<Vec<NodeId>> {
        self.check_live(j)?;
        let mut seen = vec![false; self.slot_count()];
        seen[j.0] = true;
        let mut stack = vec![j];
        while let Some(v) = stack.pop() {
            for &p in self.graph.parents(v) {
                if !seen[p.0] {
                    seen[p.0] = true;
                    stack.push(p);
                }
            }
        }
        Ok((0..self.slot_count())
            .map(NodeId)
            .filter(|v| seen[v.0])
            .collect())
    }

    /// True iff every two parents of any live node are adjacent.
    pub fn is_decomposable(&self) -> bool {
        self.decomposable_within(&self.live_nodes())
    }

    /// Decomposability of the subgraph induced by `j`'s ancestral set.
    pub fn is_decomposable_wrt(&self, j: NodeId) -> Result<bool> {
        Ok(self.decomposable_within(&self.ancestral_set(j)?))
    }

    fn decomposable_within(&self, nodes: &[NodeId]) -> bool {
        for &v in nodes {
            let ps: Vec<NodeId> = self
                .graph
                .parents(v)
                .iter()
                .copied()
                .filter(|p| nodes.contains(p))
                .collect();
            for (k, &a) in ps.iter().enumerate() {
                for &b in &ps[k + 1..] {
                    if !self.graph.adjacent(a, b) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The unique ordered list of `j`'s ancestral set. Requires the
    /// diagram to be decomposable with respect to `j`; with that in place
    /// exactly one node is ready at every step, and a tie means the
    /// decomposability machinery is broken.
    pub fn unique_ordered_list(&self, j: NodeId) -> Result<Vec<NodeId>> {
        if !self.is_decomposable_wrt(j)? {
            return Err(Error::Input(format!(
                "diagram is not decomposable with respect to {}",
                self.names[j.0]
            )));
        }
        let set = self.ancestral_set(j)?;
        let in_set = |v: NodeId| set.binary_search(&v).is_ok();
        let mut remaining: Vec<NodeId> = set.clone();
        let mut emitted = vec![false; self.slot_count()];
        let mut out = Vec::with_capacity(set.len());
        while !remaining.is_empty() {
            let ready: Vec<NodeId> = remaining
                .iter()
                .copied()
                .filter(|&v| {
                    self.graph
                        .parents(v)
                        .iter()
                        .all(|&p| !in_set(p) || emitted[p.0])
                })
                .collect();
            if ready.len() != 1 {
                return Err(Error::Internal(format!(
                    "ordered list for the ancestral set of {} is not unique ({} ready nodes)",
                    self.names[j.0],
                    ready.len()
                )));
            }
            let v = ready[0];
            emitted[v.0] = true;
            out.push(v);
            remaining.retain(|&w| w != v);
        }
        Ok(out)
    }

    /// The unique minimal decomposable structure for a target order:
    /// moralize, fill in for the target, then orient by it.
    pub fn minimal_dpid_graph(&self, target: &NodeOrder) -> Result<DirectedGraph> {
        let full = self.extend_order(target)?;
        let filled = fill_in(&moral_graph(&self.graph), &full)?;
        orient_by_order(&filled, &full)
    }

    /// Topological order of the live nodes, ties broken by node list.
    pub fn ordered_list(&self) -> Result<NodeOrder> {
        let full = topological_order(&self.graph)?;
        NodeOrder::new(full.iter().filter(|&v| self.alive[v.0]).collect())
    }

    /// True iff `order` ranks every arc's tail before its head. The order
    /// must cover exactly the live nodes.
    pub fn is_ordered_for(&self, order: &NodeOrder) -> Result<bool> {
        if !order.is_permutation_of(&self.live_nodes()) {
            return Err(Error::Input(
                "order is not a permutation of the diagram's nodes".into(),
            ));
        }
        for (i, j) in self.graph.arcs() {
            if order.position(i) > order.position(j) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Extends an order over the live nodes to all slots by appending dead
    /// ones, so it can drive the pure graph algorithms.
    pub(crate) fn extend_order(&self, order: &NodeOrder) -> Result<NodeOrder> {
        if !order.is_permutation_of(&self.live_nodes()) {
            return Err(Error::Input(
                "order is not a permutation of the diagram's nodes".into(),
            ));
        }
        let mut seq: Vec<NodeId> = order.as_slice().to_vec();
        seq.extend(
            (0..self.slot_count())
                .map(NodeId)
                .filter(|v| !self.alive[v.0]),
        );
        NodeOrder::new(seq)
    }

    /// Scales a likelihood table by a positive constant. Posterior
    /// quantities are invariant to this; only the evidence scalar moves.
    pub fn scale_likelihood(&mut self, j: NodeId, c: f64) -> Result<()> {
        self.check_live(j)?;
        if !self.is_evidence(j) {
            return Err(Error::Input(format!(
                "{} is not an evidence node",
                self.names[j.0]
            )));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Input("scale factor must be positive".into()));
        }
        for v in &mut self.tables[j.0].values {
            *v *= c;
        }
        Ok(())
    }

    /// Undirected view of the live structure without marrying parents.
    pub fn skeleton(&self) -> graph::UndirectedGraph {
        graph::skeleton(&self.graph)
    }
}

fn join_names(p: &Pid, ids: &[NodeId]) -> String {
    ids.iter()
        .map(|v| p.name(*v).to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
