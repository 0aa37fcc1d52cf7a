//! Dual-cost multigraphs and exact tree metrics.
//!
//! Every edge carries two nonnegative integer costs: `c` (construction) and
//! `d` (delay). Edge ids are positions in the edge list, so parallel edges stay
//! distinguishable and ids never shift once a graph is built.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;
pub type Cost = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CostKind {
    C,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub u: NodeId,
    pub v: NodeId,
    pub c: Cost,
    pub d: Cost,
}

impl Edge {
    pub fn cost(&self, kind: CostKind) -> Cost {
        match kind {
            CostKind::C => self.c,
            CostKind::D => self.d,
        }
    }

    pub fn other(&self, node: NodeId) -> NodeId {
        if node == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Unvalidated edge as read from input; costs are signed so that negative
/// values can be reported instead of failing to parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeSpec {
    pub u: usize,
    pub v: usize,
    pub c: i64,
    pub d: i64,
}

impl EdgeSpec {
    pub fn new(u: usize, v: usize, c: i64, d: i64) -> Self {
        EdgeSpec { u, v, c, d }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoNodes,
    SelfLoop { edge: EdgeId, node: NodeId },
    NegativeCost { edge: EdgeId },
    DanglingEndpoint { edge: EdgeId, node: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoNodes => write!(f, "graph has no nodes"),
            Violation::SelfLoop { edge, node } => {
                write!(f, "self-loop: edge {edge} at node {node}")
            }
            Violation::NegativeCost { edge } => write!(f, "negative cost: edge {edge}"),
            Violation::DanglingEndpoint { edge, node } => {
                write!(f, "dangling endpoint: edge {edge} references node {node}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks raw input against the multigraph invariants. Never fails; the
/// report carries every violation found.
pub fn validate(node_count: usize, edges: &[EdgeSpec]) -> ValidationReport {
    let mut violations = Vec::new();
    if node_count == 0 {
        violations.push(Violation::NoNodes);
    }
    for (id, e) in edges.iter().enumerate() {
        if e.u == e.v {
            violations.push(Violation::SelfLoop {
                edge: id,
                node: e.u,
            });
        }
        if e.c < 0 || e.d < 0 {
            violations.push(Violation::NegativeCost { edge: id });
        }
        for node in [e.u, e.v] {
            if node >= node_count {
                violations.push(Violation::DanglingEndpoint { edge: id, node });
            }
        }
    }
    ValidationReport { violations }
}

/// Undirected multigraph with two edge-cost functions. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BiGraph {
    node_count: usize,
    edges: Vec<Edge>,
}

impl BiGraph {
    pub fn new(node_count: usize, specs: &[EdgeSpec]) -> Result<Self> {
        let report = validate(node_count, specs);
        if !report.is_valid() {
            return Err(Error::InvalidGraph(report));
        }
        let edges = specs
            .iter()
            .enumerate()
            .map(|(id, s)| Edge {
                id,
                u: s.u,
                v: s.v,
                c: s.c as Cost,
                d: s.d as Cost,
            })
            .collect();
        Ok(BiGraph { node_count, edges })
    }

    /// Convenience constructor from `(u, v, c, d)` tuples.
    pub fn from_tuples(node_count: usize, edges: &[(usize, usize, Cost, Cost)]) -> Result<Self> {
        let mut specs = Vec::with_capacity(edges.len());
        for &(u, v, c, d) in edges {
            let c = i64::try_from(c).map_err(|_| Error::Overflow)?;
            let d = i64::try_from(d).map_err(|_| Error::Overflow)?;
            specs.push(EdgeSpec::new(u, v, c, d));
        }
        Self::new(node_count, &specs)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edges.get(id).ok_or(Error::UnknownEdge(id))
    }

    /// `adjacency()[v]` lists `(neighbour, edge id)` in increasing edge id.
    pub fn adjacency(&self) -> Vec<Vec<(NodeId, EdgeId)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for e in &self.edges {
            adj[e.u].push((e.v, e.id));
            adj[e.v].push((e.u, e.id));
        }
        adj
    }

    pub fn total(&self, kind: CostKind) -> Result<Cost> {
        self.edges
            .iter()
            .try_fold(0u64, |acc, e| acc.checked_add(e.cost(kind)))
            .ok_or(Error::Overflow)
    }

    pub fn max_cost(&self, kind: CostKind) -> Cost {
        self.edges.iter().map(|e| e.cost(kind)).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == self.node_count
    }
}

/// Nonempty set of terminal nodes `K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TerminalSet(BTreeSet<NodeId>);

impl TerminalSet {
    pub fn new(graph: &BiGraph, nodes: impl IntoIterator<Item = NodeId>) -> Result<Self> {
        let set: BTreeSet<NodeId> = nodes.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidTerminals("terminal set is empty".into()));
        }
        if let Some(&bad) = set.iter().find(|&&v| v >= graph.node_count()) {
            return Err(Error::InvalidTerminals(format!(
                "terminal {bad} is not a node of a {}-node graph",
                graph.node_count()
            )));
        }
        Ok(TerminalSet(set))
    }

    /// Every node of the graph: the spanning-tree case.
    pub fn all(graph: &BiGraph) -> Self {
        TerminalSet((0..graph.node_count()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.0.contains(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.0.iter().copied()
    }

    pub fn is_spanning(&self, graph: &BiGraph) -> bool {
        self.0.len() == graph.node_count()
    }
}

/// A tree given by its edge ids, with exact cached metrics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeSolution {
    pub edge_ids: BTreeSet<EdgeId>,
    pub total_c: Cost,
    pub diameter_d: Cost,
    pub node_set: BTreeSet<NodeId>,
}

impl TreeSolution {
    /// The edgeless tree on one node.
    pub fn single_node(v: NodeId) -> Self {
        TreeSolution {
            edge_ids: BTreeSet::new(),
            total_c: 0,
            diameter_d: 0,
            node_set: BTreeSet::from([v]),
        }
    }

    pub fn value(&self, graph: &BiGraph, measure: Measure) -> Result<Cost> {
        match measure {
            Measure::TOTAL_C => Ok(self.total_c),
            Measure::DIAMETER_D => Ok(self.diameter_d),
            m => m.eval(graph, &self.edge_ids),
        }
    }
}

/// Objective type of a criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    TotalCost,
    Diameter,
}

/// An objective evaluated under one of the two cost functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Measure {
    pub objective: Objective,
    pub cost: CostKind,
}

impl Measure {
    pub const TOTAL_C: Measure = Measure {
        objective: Objective::TotalCost,
        cost: CostKind::C,
    };
    pub const TOTAL_D: Measure = Measure {
        objective: Objective::TotalCost,
        cost: CostKind::D,
    };
    pub const DIAMETER_C: Measure = Measure {
        objective: Objective::Diameter,
        cost: CostKind::C,
    };
    pub const DIAMETER_D: Measure = Measure {
        objective: Objective::Diameter,
        cost: CostKind::D,
    };

    /// Value of this measure on a tree given by edge ids (assumed a tree).
    pub fn eval(&self, graph: &BiGraph, edge_ids: &BTreeSet<EdgeId>) -> Result<Cost> {
        match self.objective {
            Objective::TotalCost => edge_ids.iter().try_fold(0u64, |acc, &id| {
                acc.checked_add(graph.edge(id)?.cost(self.cost))
                    .ok_or(Error::Overflow)
            }),
            Objective::Diameter => {
                let weights: Vec<u128> = graph
                    .edges()
                    .iter()
                    .map(|e| e.cost(self.cost) as u128)
                    .collect();
                let diam = tree_diameter(graph, edge_ids, &weights)?;
                Cost::try_from(diam).map_err(|_| Error::Overflow)
            }
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let obj = match self.objective {
            Objective::TotalCost => "total",
            Objective::Diameter => "diameter",
        };
        let cost = match self.cost {
            CostKind::C => "c",
            CostKind::D => "d",
        };
        write!(f, "{obj}_{cost}")
    }
}

type Adjacency = Vec<Vec<(NodeId, EdgeId)>>;

/// Adjacency of a tree restricted to `edge_ids`, after checking that the
/// edges form a single acyclic connected component.
fn tree_adjacency(
    graph: &BiGraph,
    edge_ids: &BTreeSet<EdgeId>,
) -> Result<(BTreeSet<NodeId>, Adjacency)> {
    let mut nodes = BTreeSet::new();
    let mut adj = vec![Vec::new(); graph.node_count()];
    for &id in edge_ids {
        let e = graph.edge(id)?;
        nodes.insert(e.u);
        nodes.insert(e.v);
        adj[e.u].push((e.v, id));
        adj[e.v].push((e.u, id));
    }
    if edge_ids.is_empty() {
        return Ok((nodes, adj));
    }
    if edge_ids.len() + 1 != nodes.len() {
        return Err(Error::NotATree(format!(
            "{} edges over {} nodes",
            edge_ids.len(),
            nodes.len()
        )));
    }
    let start = *nodes.iter().next().unwrap();
    let mut seen = vec![false; graph.node_count()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut reached = 1;
    while let Some(x) = stack.pop() {
        for &(y, _) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                reached += 1;
                stack.push(y);
            }
        }
    }
    if reached != nodes.len() {
        return Err(Error::NotATree("edge set is disconnected".into()));
    }
    Ok((nodes, adj))
}

fn farthest_from(
    adj: &[Vec<(NodeId, EdgeId)>],
    weights: &[u128],
    start: NodeId,
) -> Result<(NodeId, u128)> {
    let mut best = (start, 0u128);
    let mut stack = vec![(start, usize::MAX, 0u128)];
    while let Some((x, via, dist)) = stack.pop() {
        if dist > best.1 || (dist == best.1 && x < best.0) {
            best = (x, dist);
        }
        for &(y, id) in &adj[x] {
            if id != via {
                let next = dist.checked_add(weights[id]).ok_or(Error::Overflow)?;
                stack.push((y, id, next));
            }
        }
    }
    Ok(best)
}

/// Weighted diameter of the tree `edge_ids` under per-edge `weights`
/// (indexed by edge id). Two-sweep traversal, valid for nonnegative weights.
pub fn tree_diameter(
    graph: &BiGraph,
    edge_ids: &BTreeSet<EdgeId>,
    weights: &[u128],
) -> Result<u128> {
    let (nodes, adj) = tree_adjacency(graph, edge_ids)?;
    let Some(&start) = nodes.iter().next() else {
        return Ok(0);
    };
    let (far, _) = farthest_from(&adj, weights, start)?;
    let (_, diam) = farthest_from(&adj, weights, far)?;
    Ok(diam)
}

/// Exact `total_c` and `diameter_d` of a tree. Rejects cyclic or
/// disconnected edge sets.
pub fn evaluate_tree(
    graph: &BiGraph,
    edge_ids: impl IntoIterator<Item = EdgeId>,
) -> Result<TreeSolution> {
    let edge_ids: BTreeSet<EdgeId> = edge_ids.into_iter().collect();
    let (node_set, adj) = tree_adjacency(graph, &edge_ids)?;
    let total_c = edge_ids.iter().try_fold(0u64, |acc, &id| {
        acc.checked_add(graph.edges()[id].c).ok_or(Error::Overflow)
    })?;
    let diameter_d = match node_set.iter().next() {
        None => 0,
        Some(&start) => {
            let weights: Vec<u128> = graph.edges().iter().map(|e| e.d as u128).collect();
            let (far, _) = farthest_from(&adj, &weights, start)?;
            let (_, diam) = farthest_from(&adj, &weights, far)?;
            Cost::try_from(diam).map_err(|_| Error::Overflow)?
        }
    };
    Ok(TreeSolution {
        edge_ids,
        total_c,
        diameter_d,
        node_set,
    })
}

/// Metrics of a Steiner tree: diameter is taken over every tree node, not
/// only the terminals. Fails if a terminal is not covered.
pub fn steiner_metrics(
    graph: &BiGraph,
    tree: &TreeSolution,
    terminals: &TerminalSet,
) -> Result<(Cost, Cost)> {
    if let Some(missing) = terminals.iter().find(|v| !tree.node_set.contains(v)) {
        return Err(Error::MissingTerminal(missing));
    }
    let fresh = if tree.edge_ids.is_empty() {
        tree.clone()
    } else {
        evaluate_tree(graph, tree.edge_ids.iter().copied())?
    };
    Ok((fresh.total_c, fresh.diameter_d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> BiGraph {
        BiGraph::from_tuples(4, &[(0, 1, 2, 1), (1, 2, 2, 1), (2, 3, 2, 1)]).unwrap()
    }

    #[test]
    fn minimal_graph_is_valid() {
        assert!(validate(2, &[EdgeSpec::new(0, 1, 1, 1)]).is_valid());
    }

    #[test]
    fn self_loop_reported() {
        let report = validate(1, &[EdgeSpec::new(0, 0, 1, 1)]);
        assert_eq!(
            report.violations,
            vec![Violation::SelfLoop { edge: 0, node: 0 }]
        );
        assert!(report.to_string().contains("self-loop"));
    }

    #[test]
    fn dangling_endpoint_reported() {
        let report = validate(3, &[EdgeSpec::new(0, 5, 1, 1)]);
        assert_eq!(
            report.violations,
            vec![Violation::DanglingEndpoint { edge: 0, node: 5 }]
        );
        assert!(report.to_string().contains("dangling endpoint"));
    }

    #[test]
    fn negative_cost_reported() {
        let report = validate(2, &[EdgeSpec::new(0, 1, -1, 1)]);
        assert_eq!(report.violations, vec![Violation::NegativeCost { edge: 0 }]);
        assert!(BiGraph::new(2, &[EdgeSpec::new(0, 1, -1, 1)]).is_err());
    }

    #[test]
    fn path_metrics() {
        let t = evaluate_tree(&path3(), [0, 1, 2]).unwrap();
        assert_eq!((t.diameter_d, t.total_c), (3, 6));
        assert_eq!(t.node_set.len(), 4);
    }

    #[test]
    fn single_edge_metrics() {
        let g = BiGraph::from_tuples(2, &[(0, 1, 5, 7)]).unwrap();
        let t = evaluate_tree(&g, [0]).unwrap();
        assert_eq!((t.diameter_d, t.total_c), (7, 5));
    }

    #[test]
    fn star_metrics() {
        let g = BiGraph::from_tuples(5, &[(0, 1, 1, 1), (0, 2, 1, 1), (0, 3, 1, 1), (0, 4, 1, 1)])
            .unwrap();
        let t = evaluate_tree(&g, 0..4).unwrap();
        assert_eq!((t.diameter_d, t.total_c), (2, 4));
    }

    #[test]
    fn rejects_cycles_and_disconnected_sets() {
        let tri = BiGraph::from_tuples(3, &[(0, 1, 1, 1), (1, 2, 1, 1), (0, 2, 1, 1)]).unwrap();
        assert!(matches!(
            evaluate_tree(&tri, [0, 1, 2]),
            Err(Error::NotATree(_))
        ));
        let two = BiGraph::from_tuples(4, &[(0, 1, 1, 1), (2, 3, 1, 1)]).unwrap();
        assert!(matches!(
            evaluate_tree(&two, [0, 1]),
            Err(Error::NotATree(_))
        ));
        // parallel pair is a 2-cycle
        let par = BiGraph::from_tuples(2, &[(0, 1, 1, 1), (0, 1, 2, 2)]).unwrap();
        assert!(evaluate_tree(&par, [0, 1]).is_err());
    }

    #[test]
    fn unknown_edge_rejected() {
        assert!(matches!(
            evaluate_tree(&path3(), [9]),
            Err(Error::UnknownEdge(9))
        ));
    }

    #[test]
    fn steiner_metrics_single_edge_between_terminals() {
        let g = BiGraph::from_tuples(3, &[(0, 1, 4, 3), (1, 2, 1, 1)]).unwrap();
        let k = TerminalSet::new(&g, [0, 1]).unwrap();
        let t = evaluate_tree(&g, [0]).unwrap();
        assert_eq!(steiner_metrics(&g, &t, &k).unwrap(), (4, 3));
    }

    #[test]
    fn steiner_metrics_missing_terminal() {
        let g = BiGraph::from_tuples(3, &[(0, 1, 4, 3), (1, 2, 1, 1)]).unwrap();
        let k = TerminalSet::new(&g, [0, 2]).unwrap();
        let t = evaluate_tree(&g, [0]).unwrap();
        assert!(matches!(
            steiner_metrics(&g, &t, &k),
            Err(Error::MissingTerminal(2))
        ));
    }

    #[test]
    fn steiner_diameter_spans_all_tree_nodes() {
        // terminals 0, 3, 4; Steiner nodes 1, 2. The longest path runs 4-2-1-3,
        // ending at a terminal but passing through Steiner nodes; additionally
        // a Steiner leaf would not be excluded.
        let g = BiGraph::from_tuples(5, &[(0, 1, 1, 1), (1, 2, 1, 2), (1, 3, 1, 3), (2, 4, 1, 4)])
            .unwrap();
        let k = TerminalSet::new(&g, [0, 3, 4]).unwrap();
        let t = evaluate_tree(&g, 0..4).unwrap();
        // brute-force all-pairs over the tree
        let dist = [
            [0, 1, 3, 4, 7],
            [1, 0, 2, 3, 6],
            [3, 2, 0, 5, 4],
            [4, 3, 5, 0, 9],
            [7, 6, 4, 9, 0],
        ];
        let brute = dist.iter().flatten().copied().max().unwrap();
        assert_eq!(steiner_metrics(&g, &t, &k).unwrap(), (4, brute));
    }

    #[test]
    fn terminal_set_validation() {
        let g = path3();
        assert!(TerminalSet::new(&g, []).is_err());
        assert!(TerminalSet::new(&g, [7]).is_err());
        assert_eq!(TerminalSet::all(&g).len(), 4);
    }

    #[test]
    fn measure_eval_other_cost() {
        let g = BiGraph::from_tuples(3, &[(0, 1, 5, 1), (1, 2, 6, 2)]).unwrap();
        let ids = BTreeSet::from([0, 1]);
        assert_eq!(Measure::DIAMETER_C.eval(&g, &ids).unwrap(), 11);
        assert_eq!(Measure::TOTAL_D.eval(&g, &ids).unwrap(), 3);
    }

    #[test]
    fn total_overflow_is_an_error() {
        let g = BiGraph::from_tuples(
            3,
            &[
                (0, 1, i64::MAX as u64, 0),
                (1, 2, i64::MAX as u64, 0),
                (0, 2, i64::MAX as u64, 0),
            ],
        )
        .unwrap();
        assert!(matches!(g.total(CostKind::C), Err(Error::Overflow)));
    }
}
