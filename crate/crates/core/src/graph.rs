//! Directed and undirected graphs over small node sets, plus the order-based
//! algorithms the reduction engine is built on: topological orders, moral
//! graphs, perfect lists, maximum cardinality search, fill-in and clique
//! extraction.
//!
//! Nodes are identified by their position in the owning structure's node
//! list. All iteration follows that stored order and every returned set is
//! sorted by it, so outputs are deterministic.

use crate::error::{Error, Result};
use std::fmt;

/// Index of a node in its diagram's node list.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A permutation of node ids. Depending on context it may cover a whole
/// graph or only the live nodes of a diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeOrder {
    seq: Vec<NodeId>,
    /// Position lookup indexed by node id; `usize::MAX` when absent.
    pos: Vec<usize>,
}

impl NodeOrder {
    /// Builds an order from a sequence. Fails on duplicates.
    pub fn new(seq: Vec<NodeId>) -> Result<Self> {
        let max = seq.iter().map(|v| v.0).max().map_or(0, |m| m + 1);
        let mut pos = vec![usize::MAX; max];
        for (k, v) in seq.iter().enumerate() {
            if pos[v.0] != usize::MAX {
                return Err(Error::Input(format!("duplicate node {} in order", v)));
            }
            pos[v.0] = k;
        }
        Ok(NodeOrder { seq, pos })
    }

    /// Identity order over `0..n`.
    pub fn identity(n: usize) -> Self {
        NodeOrder::new((0..n).map(NodeId).collect()).expect("identity order is duplicate-free")
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.seq
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.seq.iter().copied()
    }

    /// Position of `v` in the order, if present.
    #[inline]
    pub fn position(&self, v: NodeId) -> Option<usize> {
        match self.pos.get(v.0) {
            Some(&p) if p != usize::MAX => Some(p),
            _ => None,
        }
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.position(v).is_some()
    }

    /// True iff the order covers exactly `0..n`.
    pub fn is_permutation_of_range(&self, n: usize) -> bool {
        self.seq.len() == n && (0..n).all(|i| self.contains(NodeId(i)))
    }

    /// True iff the order covers exactly the given node set.
    pub fn is_permutation_of(&self, nodes: &[NodeId]) -> bool {
        self.seq.len() == nodes.len() && nodes.iter().all(|&v| self.contains(v))
    }
}

/// Directed graph with arcs stored as sorted parent and child lists.
///
/// Acyclicity is not enforced on insertion; callers that require a DAG go
/// through [`topological_order`] or [`DirectedGraph::is_acyclic`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    parents: Vec<Vec<NodeId>>,
    children: Vec<Vec<NodeId>>,
}

impl DirectedGraph {
    pub fn new(n: usize) -> Self {
        DirectedGraph {
            parents: vec![Vec::new(); n],
            children: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an arc list.
    pub fn from_arcs(n: usize, arcs: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut g = DirectedGraph::new(n);
        for &(i, j) in arcs {
            g.add_arc(i, j)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.parents.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count()).map(NodeId)
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if v.0 >= self.node_count() {
            return Err(Error::Input(format!("unknown node {}", v)));
        }
        Ok(())
    }

    /// Appends an isolated node and returns its id.
    pub fn add_node(&mut self) -> NodeId {
        self.parents.push(Vec::new());
        self.children.push(Vec::new());
        NodeId(self.node_count() - 1)
    }

    pub fn add_arc(&mut self, tail: NodeId, head: NodeId) -> Result<()> {
        self.check_node(tail)?;
        self.check_node(head)?;
        if tail == head {
            return Err(Error::Input(format!("self-arc on node {}", tail)));
        }
        if self.has_arc(tail, head) {
            return Err(Error::Input(format!("duplicate arc ({}, {})", tail, head)));
        }
        let cs = &mut self.children[tail.0];
        cs.insert(cs.binary_search(&head).unwrap_err(), head);
        let ps = &mut self.parents[head.0];
        ps.insert(ps.binary_search(&tail).unwrap_err(), tail);
        Ok(())
    }

    pub fn remove_arc(&mut self, tail: NodeId, head: NodeId) -> Result<()> {
        self.check_node(tail)?;
        self.check_node(head)?;
        let cs = &mut self.children[tail.0];
        match cs.binary_search(&head) {
            Ok(k) => {
                cs.remove(k);
            }
            Err(_) => return Err(Error::Input(format!("no arc ({}, {})", tail, head))),
        }
        let ps = &mut self.parents[head.0];
        let k = ps.binary_search(&tail).expect("parent list out of sync");
        ps.remove(k);
        Ok(())
    }

    #[inline]
    pub fn has_arc(&self, tail: NodeId, head: NodeId) -> bool {
        tail.0 < self.node_count() && self.children[tail.0].binary_search(&head).is_ok()
    }

    /// True iff an arc runs between the two nodes in either direction.
    #[inline]
    pub fn adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.has_arc(a, b) || self.has_arc(b, a)
    }

    pub fn parents(&self, v: NodeId) -> &[NodeId] {
        &self.parents[v.0]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v.0]
    }

    /// All arcs in node-list order of the tail, then of the head.
    pub fn arcs(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for v in self.nodes() {
            for &c in self.children(v) {
                out.push((v, c));
            }
        }
        out
    }

    pub fn arc_count(&self) -> usize {
        self.children.iter().map(|c| c.len()).sum()
    }

    /// True iff a directed path `from -> ... -> to` exists (length >= 1).
    pub fn has_path(&self, from: NodeId, to: NodeId) -> bool {
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for &c in self.children(v) {
                if c == to {
                    return true;
                }
                if !seen[c.0] {
                    seen[c.0] = true;
                    stack.push(c);
                }
            }
        }
        false
    }

    pub fn is_acyclic(&self) -> bool {
        topological_order(self).is_ok()
    }
}

/// Undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    adj: Vec<Vec<NodeId>>,
}

impl UndirectedGraph {
    pub fn new(n: usize) -> Self {
        UndirectedGraph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut u = UndirectedGraph::new(n);
        for &(a, b) in edges {
            u.add_edge(a, b)?;
        }
        Ok(u)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count()).map(NodeId)
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<()> {
        if a.0 >= self.node_count() || b.0 >= self.node_count() {
            return Err(Error::Input(format!("unknown node in edge ({}, {})", a, b)));
        }
        if a == b {
            return Err(Error::Input(format!("self-loop on node {}", a)));
        }
        if self.has_edge(a, b) {
            return Err(Error::Input(format!("duplicate edge ({}, {})", a, b)));
        }
        let la = &mut self.adj[a.0];
        la.insert(la.binary_search(&b).unwrap_err(), b);
        let lb = &mut self.adj[b.0];
        lb.insert(lb.binary_search(&a).unwrap_err(), a);
        Ok(())
    }

    pub fn remove_edge(&mut self, a: NodeId, b: NodeId) -> Result<()> {
        let la = &mut self.adj[a.0];
        match la.binary_search(&b) {
            Ok(k) => {
                la.remove(k);
            }
            Err(_) => return Err(Error::Input(format!("no edge ({}, {})", a, b))),
        }
        let lb = &mut self.adj[b.0];
        let k = lb.binary_search(&a).expect("adjacency out of sync");
        lb.remove(k);
        Ok(())
    }

    #[inline]
    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        a.0 < self.node_count() && self.adj[a.0].binary_search(&b).is_ok()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v.0]
    }

    /// All edges as `(low, high)` pairs in node-list order.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for v in self.nodes() {
            for &w in self.neighbors(v) {
                if v < w {
                    out.push((v, w));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    /// True iff all the given nodes are pairwise adjacent.
    pub fn is_clique(&self, nodes: &[NodeId]) -> bool {
        for (k, &a) in nodes.iter().enumerate() {
            for &b in &nodes[k + 1..] {
                if !self.has_edge(a, b) {
                    return false;
                }
            }
        }
        true
    }
}

/// Topological order of a DAG. Among ready nodes the one earliest in the
/// node list is emitted first, so the result is deterministic.
pub fn topological_order(g: &DirectedGraph) -> Result<NodeOrder> {
    let n = g.node_count();
    let mut remaining: Vec<usize> = g.nodes().map(|v| g.parents(v).len()).collect();
    let mut emitted = vec![false; n];
    let mut seq = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n).find(|&v| !emitted[v] && remaining[v] == 0);
        let Some(v) = next else {
            return Err(Error::Structural(format!(
                "cycle detected: {}",
                describe_cycle(g, &emitted)
            )));
        };
        emitted[v] = true;
        seq.push(NodeId(v));
        for &c in g.children(NodeId(v)) {
            remaining[c.0] -= 1;
        }
    }
    NodeOrder::new(seq)
}

/// Walks parent links among the stuck nodes until one repeats, which
/// exhibits a directed cycle for the error message.
fn describe_cycle(g: &DirectedGraph, emitted: &[bool]) -> String {
    let start = (0..g.node_count())
        .map(NodeId)
        .find(|v| !emitted[v.0])
        .expect("a stuck node exists when ordering fails");
    let mut path = vec![start];
    let mut cur = start;
    loop {
        let p = *g
            .parents(cur)
            .iter()
            .find(|p| !emitted[p.0])
            .expect("stuck nodes keep an unemitted parent");
        if let Some(k) = path.iter().position(|&v| v == p) {
            // Parent links run against the arcs, so the cycle reads in
            // reverse path order, closed by its own first node.
            let mut cycle: Vec<String> = path[k..].iter().rev().map(|v| v.to_string()).collect();
            cycle.push(cycle[0].clone());
            return cycle.join(" -> ");
        }
        path.push(p);
        cur = p;
    }
}

/// True iff no parent follows its child in the list.
pub fn is_ordered(g: &DirectedGraph, order: &NodeOrder) -> Result<bool> {
    if !order.is_permutation_of_range(g.node_count()) {
        return Err(Error::Input(
            "order is not a permutation of the graph's nodes".into(),
        ));
    }
    for (i, j) in g.arcs() {
        if order.position(i) > order.position(j) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Moral graph: drop arc directions and join every pair of nodes that
/// share a child.
pub fn moral_graph(g: &DirectedGraph) -> UndirectedGraph {
    let mut u = UndirectedGraph::new(g.node_count());
    for v in g.nodes() {
        let ps = g.parents(v);
        for &p in ps {
            if !u.has_edge(p, v) {
                u.add_edge(p, v).expect("nodes exist");
            }
        }
        for (k, &a) in ps.iter().enumerate() {
            for &b in &ps[k + 1..] {
                if !u.has_edge(a, b) {
                    u.add_edge(a, b).expect("nodes exist");
                }
            }
        }
    }
    u
}

/// Skeleton: drop arc directions without marrying parents.
pub fn skeleton(g: &DirectedGraph) -> UndirectedGraph {
    let mut u = UndirectedGraph::new(g.node_count());
    for v in g.nodes() {
        for &p in g.parents(v) {
            if !u.has_edge(p, v) {
                u.add_edge(p, v).expect("nodes exist");
            }
        }
    }
    u
}

/// True iff every node's earlier neighbors form a clique.
pub fn is_perfect(u: &UndirectedGraph, order: &NodeOrder) -> Result<bool> {
    if !order.is_permutation_of_range(u.node_count()) {
        return Err(Error::Input(
            "order is not a permutation of the graph's nodes".into(),
        ));
    }
    for v in u.nodes() {
        let pv = order.position(v).expect("order covers all nodes");
        let earlier: Vec<NodeId> = u
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| order.position(w).expect("order covers all nodes") < pv)
            .collect();
        if !u.is_clique(&earlier) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Chordality test: run maximum cardinality search and check the result
/// is a perfect list. A graph is chordal exactly when that succeeds.
pub fn is_chordal(u: &UndirectedGraph) -> bool {
    let order = max_cardinality_search(u, &NodeOrder::identity(u.node_count()))
        .expect("identity tiebreak is a permutation");
    is_perfect(u, &order).expect("mcs output is a permutation")
}

/// Maximum cardinality search: repeatedly pick an unnumbered node with the
/// most already-numbered neighbors, breaking ties by earliest position in
/// `tiebreak`.
pub fn max_cardinality_search(u: &UndirectedGraph, tiebreak: &NodeOrder) -> Result<NodeOrder> {
    let n = u.node_count();
    if !tiebreak.is_permutation_of_range(n) {
        return Err(Error::Input(
            "tiebreak is not a permutation of the graph's nodes".into(),
        ));
    }
    let mut numbered = vec![false; n];
    let mut count = vec![0usize; n];
    let mut seq = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<NodeId> = None;
        for &v in tiebreak.as_slice() {
            if numbered[v.0] {
                continue;
            }
            match best {
                Some(b) if count[b.0] >= count[v.0] => {}
                _ => best = Some(v),
            }
        }
        let v = best.expect("unnumbered node remains");
        numbered[v.0] = true;
        seq.push(v);
        for &w in u.neighbors(v) {
            if !numbered[w.0] {
                count[w.0] += 1;
            }
        }
    }
    NodeOrder::new(seq)
}

/// Adds exactly the edges needed to make `order` perfect: nodes are
/// processed from last to first and each node's earlier neighbors are
/// joined pairwise. Added edges are inserted immediately so the steps for
/// earlier nodes see them.
pub fn fill_in(u: &UndirectedGraph, order: &NodeOrder) -> Result<UndirectedGraph> {
    if !order.is_permutation_of_range(u.node_count()) {
        return Err(Error::Input(
            "order is not a permutation of the graph's nodes".into(),
        ));
    }
    let mut out = u.clone();
    for &v in order.as_slice().iter().rev() {
        let pv = order.position(v).expect("order covers all nodes");
        let earlier: Vec<NodeId> = out
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| order.position(w).expect("order covers all nodes") < pv)
            .collect();
        for (k, &a) in earlier.iter().enumerate() {
            for &b in &earlier[k + 1..] {
                if !out.has_edge(a, b) {
                    out.add_edge(a, b).expect("nodes exist");
                }
            }
        }
    }
    Ok(out)
}

/// Maximal cliques of a graph with a perfect list: each node together with
/// its earlier neighbors is a candidate; candidates strictly contained in
/// another are dropped. Every edge lies inside some returned clique.
pub fn maximal_cliques(u: &UndirectedGraph, perfect: &NodeOrder) -> Result<Vec<Vec<NodeId>>> {
    if !is_perfect(u, perfect)? {
        return Err(Error::Input("order is not perfect for the graph".into()));
    }
    let mut candidates: Vec<Vec<NodeId>> = Vec::with_capacity(u.node_count());
    for &v in perfect.as_slice() {
        let pv = perfect.position(v).expect("order covers all nodes");
        let mut c: Vec<NodeId> = u
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| perfect.position(w).expect("order covers all nodes") < pv)
            .collect();
        c.push(v);
        c.sort_unstable();
        candidates.push(c);
    }
    let mut out: Vec<Vec<NodeId>> = Vec::new();
    for c in &candidates {
        let maximal = !candidates
            .iter()
            .any(|d| d.len() > c.len() && c.iter().all(|v| d.binary_search(v).is_ok()));
        if maximal {
            out.push(c.clone());
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Directs every edge from the earlier node to the later one. If the order
/// was perfect, the result's structure is decomposable.
pub fn orient_by_order(u: &UndirectedGraph, order: &NodeOrder) -> Result<DirectedGraph> {
    if !order.is_permutation_of_range(u.node_count()) {
        return Err(Error::Input(
            "order is not a permutation of the graph's nodes".into(),
        ));
    }
    let mut g = DirectedGraph::new(u.node_count());
    for (a, b) in u.edges() {
        let (tail, head) = if order.position(a) < order.position(b) {
            (a, b)
        } else {
            (b, a)
        };
        g.add_arc(tail, head).expect("edges are unique");
    }
    Ok(g)
}
