//! Ground truth and queries: a brute-force joint oracle, posterior
//! marginals by elimination over ancestral sets, the evidence scalar, and
//! the clique-containment report that bounds every table the reduction
//! pipeline materializes.

use crate::error::{Error, Result};
use crate::factor::Factor;
use crate::graph::{fill_in, maximal_cliques, moral_graph, NodeId, NodeOrder};
use crate::pid::{Pid, Status};
use crate::reduce::ReversalTrace;

/// Default cap on oracle joint size, in table cells.
pub const ORACLE_CELL_CAP: usize = 1 << 20;

/// Full table over the unobserved variables of a diagram. Indexing is
/// mixed-radix with earlier-listed variables most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct JointTable {
    pub variables: Vec<NodeId>,
    pub cards: Vec<usize>,
    pub values: Vec<f64>,
}

impl JointTable {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    fn to_factor(&self) -> Factor {
        Factor::new(
            self.variables.clone(),
            self.cards.clone(),
            self.values.clone(),
        )
    }

    /// Unnormalized marginal over one variable.
    pub fn marginal(&self, var: NodeId) -> Result<Vec<f64>> {
        if !self.variables.contains(&var) {
            return Err(Error::Input(format!("{} is not a joint variable", var)));
        }
        let mut f = self.to_factor();
        for &v in &self.variables.clone() {
            if v != var {
                f = f.sum_out(v);
            }
        }
        Ok(f.values().to_vec())
    }

    /// Fixes one variable to an observed value, dropping it from the table.
    pub fn condition(&self, var: NodeId, value: usize) -> Result<JointTable> {
        let axis = self
            .variables
            .iter()
            .position(|&v| v == var)
            .ok_or_else(|| Error::Input(format!("{} is not a joint variable", var)))?;
        if value >= self.cards[axis] {
            return Err(Error::Input(format!(
                "outcome index {} out of range for {}",
                value, var
            )));
        }
        let f = self.to_factor().slice(var, value);
        Ok(JointTable {
            variables: f.scope().to_vec(),
            cards: f.cards().to_vec(),
            values: f.values().to_vec(),
        })
    }

    /// Marginal normalized to sum 1.
    pub fn normalized_marginal(&self, var: NodeId) -> Result<Vec<f64>> {
        let raw = self.marginal(var)?;
        let total: f64 = raw.iter().sum();
        if total == 0.0 {
            return Err(Error::Input(
                "joint table sums to zero; no normalized marginal exists".into(),
            ));
        }
        Ok(raw.iter().map(|v| v / total).collect())
    }

    /// Largest absolute difference against another joint over the same
    /// variable set.
    pub fn max_abs_diff(&self, other: &JointTable) -> Result<f64> {
        if self.variables.len() != other.variables.len()
            || !self.variables.iter().all(|v| other.variables.contains(v))
        {
            return Err(Error::Input(
                "joint tables range over different variable sets".into(),
            ));
        }
        Ok(self.to_factor().max_abs_diff(&other.to_factor()))
    }
}

/// Brute-force joint: the pointwise product of every table in the diagram
/// over all unobserved variables. For an evidence-free diagram this is the
/// prior joint; with absorbed evidence it sums to the evidence probability.
pub fn joint_oracle(p: &Pid) -> Result<JointTable> {
    joint_oracle_with_cap(p, ORACLE_CELL_CAP)
}

/// [`joint_oracle`] with an explicit cell cap.
pub fn joint_oracle_with_cap(p: &Pid, cap: usize) -> Result<JointTable> {
    let latent = p.latent_nodes();
    let mut cells: usize = 1;
    for &v in &latent {
        cells = cells
            .checked_mul(p.cardinality(v))
            .filter(|&c| c <= cap)
            .ok_or_else(|| {
                Error::Resource(format!("joint table exceeds the cap of {} cells", cap))
            })?;
    }
    let mut product = Factor::scalar(1.0);
    for v in p.live_nodes() {
        product = product.product(&p.table_factor(v));
    }
    Ok(JointTable {
        variables: product.scope().to_vec(),
        cards: product.cards().to_vec(),
        values: product.values().to_vec(),
    })
}

fn require_propagated(p: &Pid) -> Result<()> {
    for e in p.evidence_nodes() {
        if !p.graph().parents(e).is_empty() || !p.graph().children(e).is_empty() {
            return Err(Error::Input(format!(
                "evidence at {} has not been propagated",
                p.name(e)
            )));
        }
    }
    Ok(())
}

/// Posterior distribution over the outcomes of `i` given all propagated
/// evidence, computed by multiply-and-sum over the ancestral set of `i`
/// in the diagram's ordered list — the full joint is never built.
pub fn posterior_marginal(p: &Pid, i: NodeId) -> Result<Vec<f64>> {
    if !p.is_alive(i) {
        return Err(Error::Input(format!("unknown or removed node {}", i)));
    }
    require_propagated(p)?;
    match p.status(i) {
        Status::Evidence(Some(x)) => {
            let mut point = vec![0.0; p.cardinality(i)];
            point[x] = 1.0;
            return Ok(point);
        }
        Status::Evidence(None) => {
            return Err(Error::Input(format!(
                "{} is a virtual evidence node with no outcome distribution",
                p.name(i)
            )));
        }
        Status::Latent => {}
    }

    let set = p.ancestral_set(i)?;
    let order = p.ordered_list()?;
    let mut elimination: Vec<NodeId> = order
        .iter()
        .filter(|v| set.binary_search(v).is_ok() && *v != i)
        .collect();
    elimination.reverse();

    let mut factors: Vec<Factor> = set.iter().map(|&v| p.table_factor(v)).collect();
    for v in elimination {
        let (touching, rest): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.scope().contains(&v));
        let mut product = Factor::scalar(1.0);
        for f in &touching {
            product = product.product(f);
        }
        factors = rest;
        factors.push(product.sum_out(v));
    }
    let mut result = Factor::scalar(1.0);
    for f in &factors {
        result = result.product(f);
    }
    debug_assert_eq!(result.scope(), [i]);
    Ok(result.values().to_vec())
}

/// Probability of all recorded evidence: the product of the scalar tables
/// left on the disconnected evidence nodes. 1.0 when there is none.
pub fn evidence_probability(p: &Pid) -> Result<f64> {
    require_propagated(p)?;
    let mut prob = 1.0;
    for e in p.evidence_nodes() {
        let t = p.table(e);
        debug_assert_eq!(t.values.len(), 1);
        prob *= t.values[0];
    }
    Ok(prob)
}

/// How large the reduction pipeline's tables got, and whether every scope
/// stayed inside a maximal clique of the target chordal graph.
#[derive(Clone, Debug)]
pub struct ComplexityReport {
    /// Scope of the largest table materialized (by cell count).
    pub max_table_scope: Vec<NodeId>,
    pub max_table_cells: usize,
    /// Scopes of the tables built by each trace step, in step order.
    pub step_scopes: Vec<Vec<Vec<NodeId>>>,
    /// True iff every scope above is a subset of some maximal clique.
    pub clique_containment: bool,
    /// Arcs created by reversal and combination steps.
    pub added_arc_count: usize,
    /// Cells of the largest maximal-clique state space, for comparison.
    pub max_clique_cells: usize,
}

/// Builds the target chordal graph for the original diagram (moral graph
/// plus fill-in for `target`), extracts its maximal cliques, and checks
/// every table scope recorded in `trace` against them.
pub fn complexity_report(
    trace: &ReversalTrace,
    original: &Pid,
    target: &NodeOrder,
) -> Result<ComplexityReport> {
    let full = original.extend_order(target)?;
    let chordal = fill_in(&moral_graph(original.graph()), &full)?;
    let cliques = maximal_cliques(&chordal, &full)?;

    let cells_of = |scope: &[NodeId]| -> Result<usize> {
        let mut cells = 1usize;
        for &v in scope {
            if v.index() >= original.slot_count() {
                return Err(Error::Input(format!(
                    "trace scope references node {} outside the original diagram",
                    v
                )));
            }
            cells *= original.cardinality(v);
        }
        Ok(cells)
    };
    let max_clique_cells = cliques
        .iter()
        .map(|c| cells_of(c))
        .try_fold(0usize, |acc, c| c.map(|c| acc.max(c)))?;

    let mut step_scopes = Vec::with_capacity(trace.steps.len());
    let mut containment = true;
    let mut max_cells = 0usize;
    let mut max_scope = Vec::new();
    for step in &trace.steps {
        let scopes = step.scopes();
        for scope in &scopes {
            let inside = cliques
                .iter()
                .any(|c| scope.iter().all(|v| c.binary_search(v).is_ok()));
            containment &= inside;
            let cells = cells_of(scope)?;
            if cells > max_cells {
                max_cells = cells;
                max_scope = scope.clone();
            }
        }
        step_scopes.push(scopes);
    }

    Ok(ComplexityReport {
        max_table_scope: max_scope,
        max_table_cells: max_cells,
        step_scopes,
        clique_containment: containment,
        added_arc_count: trace.arcs_added_total(),
        max_clique_cells,
    })
}
