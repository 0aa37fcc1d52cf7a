//! Exhaustive ground truth for desk-scale instances: every tree spanning a
//! terminal set, and exact Pareto fronts over two measures.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    evaluate_tree, BiGraph, Cost, EdgeId, Measure, NodeId, TerminalSet, TreeSolution,
};
use crate::rational::Rational;
use crate::transforms::BicriteriaSolver;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub max_nodes: usize,
    pub max_edges: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_nodes: 12,
            max_edges: 20,
        }
    }
}

impl OracleCaps {
    pub fn check(&self, graph: &BiGraph) -> Result<()> {
        if graph.node_count() > self.max_nodes {
            return Err(Error::CapExceeded {
                what: "nodes",
                actual: graph.node_count(),
                cap: self.max_nodes,
            });
        }
        if graph.edge_count() > self.max_edges {
            return Err(Error::CapExceeded {
                what: "edges",
                actual: graph.edge_count(),
                cap: self.max_edges,
            });
        }
        Ok(())
    }
}

struct SpanningEnumerator<'a> {
    graph: &'a BiGraph,
    edges: Vec<EdgeId>,
    nodes: Vec<NodeId>,
}

impl SpanningEnumerator<'_> {
    fn spans_with(&self, comp: &[usize], rest: &[EdgeId]) -> bool {
        let mut label = comp.to_vec();
        fn find(label: &mut [usize], mut x: usize) -> usize {
            while label[x] != x {
                label[x] = label[label[x]];
                x = label[x];
            }
            x
        }
        let mut roots: Vec<usize> = Vec::new();
        for &id in rest {
            let e = &self.graph.edges()[id];
            let (a, b) = (find(&mut label, e.u), find(&mut label, e.v));
            if a != b {
                label[a] = b;
            }
        }
        for &v in &self.nodes {
            let r = find(&mut label, v);
            if !roots.contains(&r) {
                roots.push(r);
                if roots.len() > 1 {
                    return false;
                }
            }
        }
        true
    }

    fn recurse(
        &self,
        idx: usize,
        comp: &mut Vec<usize>,
        chosen: &mut Vec<EdgeId>,
        visit: &mut dyn FnMut(&[EdgeId]),
    ) {
        let need = self.nodes.len() - 1;
        if chosen.len() == need {
            visit(chosen);
            return;
        }
        if self.edges.len() - idx < need - chosen.len() {
            return;
        }
        let id = self.edges[idx];
        let e = &self.graph.edges()[id];
        let (cu, cv) = (comp[e.u], comp[e.v]);
        if cu != cv {
            let saved = comp.clone();
            for x in comp.iter_mut() {
                if *x == cv {
                    *x = cu;
                }
            }
            chosen.push(id);
            self.recurse(idx + 1, comp, chosen, visit);
            chosen.pop();
            *comp = saved;
        }
        if self.spans_with(comp, &self.edges[idx + 1..]) {
            self.recurse(idx + 1, comp, chosen, visit);
        }
    }
}

/// Streams every spanning tree of the subgraph induced by `nodes`, each as
/// a sorted edge-id slice, exactly once.
fn for_each_spanning_tree(graph: &BiGraph, nodes: &[NodeId], visit: &mut dyn FnMut(&[EdgeId])) {
    if nodes.len() <= 1 {
        visit(&[]);
        return;
    }
    let mut inside = vec![false; graph.node_count()];
    for &v in nodes {
        inside[v] = true;
    }
    let edges: Vec<EdgeId> = graph
        .edges()
        .iter()
        .filter(|e| inside[e.u] && inside[e.v])
        .map(|e| e.id)
        .collect();
    let en = SpanningEnumerator {
        graph,
        edges,
        nodes: nodes.to_vec(),
    };
    let mut comp: Vec<usize> = (0..graph.node_count()).collect();
    if !en.spans_with(&comp, &en.edges) {
        return;
    }
    en.recurse(0, &mut comp, &mut Vec::new(), visit);
}

/// Streams every inclusion-minimal tree spanning `terminals` (all leaves are
/// terminals), once each. Non-minimal trees are never better in either
/// objective, so fronts over this stream are exact.
pub fn for_each_tree(
    graph: &BiGraph,
    terminals: &TerminalSet,
    caps: OracleCaps,
    mut visit: impl FnMut(&[EdgeId]),
) -> Result<()> {
    caps.check(graph)?;
    let steiner: Vec<NodeId> = (0..graph.node_count())
        .filter(|&v| !terminals.contains(v))
        .collect();
    for subset in 0u64..(1u64 << steiner.len()) {
        let mut nodes: Vec<NodeId> = terminals.iter().collect();
        nodes.extend(
            steiner
                .iter()
                .enumerate()
                .filter(|(i, _)| subset & (1 << i) != 0)
                .map(|(_, &v)| v),
        );
        nodes.sort_unstable();
        let mut degree = vec![0usize; graph.node_count()];
        for_each_spanning_tree(graph, &nodes, &mut |tree| {
            if subset != 0 {
                degree.iter_mut().for_each(|x| *x = 0);
                for &id in tree {
                    let e = &graph.edges()[id];
                    degree[e.u] += 1;
                    degree[e.v] += 1;
                }
                if nodes
                    .iter()
                    .any(|&v| degree[v] == 1 && !terminals.contains(v))
                {
                    return;
                }
            }
            visit(tree);
        });
    }
    Ok(())
}

pub fn enumerate_trees(
    graph: &BiGraph,
    terminals: &TerminalSet,
    caps: OracleCaps,
) -> Result<Vec<Vec<EdgeId>>> {
    let mut out = Vec::new();
    for_each_tree(graph, terminals, caps, |t| out.push(t.to_vec()))?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrontPoint {
    pub x: Cost,
    pub y: Cost,
    pub witness: BTreeSet<EdgeId>,
}

/// Nondominated `(x, y)` pairs over all trees, sorted by `x` ascending
/// (hence `y` strictly descending).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParetoFront {
    pub x: Measure,
    pub y: Measure,
    pub points: Vec<FrontPoint>,
}

impl ParetoFront {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Least value of the other measure among points whose `budget_on`
    /// value is at most `value`; `None` when no point qualifies.
    pub fn opt_given_budget(&self, budget_on: Measure, value: Cost) -> Result<Option<&FrontPoint>> {
        if budget_on == self.x {
            Ok(self.points.iter().rev().find(|p| p.x <= value))
        } else if budget_on == self.y {
            Ok(self.points.iter().find(|p| p.y <= value))
        } else {
            Err(Error::InvalidParameter(format!(
                "front is over ({}, {}), not {budget_on}",
                self.x, self.y
            )))
        }
    }

    /// Least `x + y` over all trees (attained on the front).
    pub fn min_sum(&self) -> Option<&FrontPoint> {
        self.points.iter().min_by_key(|p| p.x as u128 + p.y as u128)
    }
}

/// Front over (diameter under d, total cost under c) with default caps.
pub fn pareto_front(graph: &BiGraph, terminals: &TerminalSet) -> Result<ParetoFront> {
    pareto_front_by(
        graph,
        terminals,
        OracleCaps::default(),
        Measure::DIAMETER_D,
        Measure::TOTAL_C,
    )
}

pub fn pareto_front_by(
    graph: &BiGraph,
    terminals: &TerminalSet,
    caps: OracleCaps,
    x: Measure,
    y: Measure,
) -> Result<ParetoFront> {
    let mut all: Vec<(Cost, Cost, Vec<EdgeId>)> = Vec::new();
    let mut err = None;
    for_each_tree(graph, terminals, caps, |tree| {
        let ids: BTreeSet<EdgeId> = tree.iter().copied().collect();
        match (x.eval(graph, &ids), y.eval(graph, &ids)) {
            (Ok(a), Ok(b)) => all.push((a, b, tree.to_vec())),
            (Err(e), _) | (_, Err(e)) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    // stable: among equal points the first enumerated witness survives
    all.sort_by_key(|p| (p.0, p.1));
    let mut points: Vec<FrontPoint> = Vec::new();
    for (a, b, witness) in all {
        if points.last().is_none_or(|last| b < last.y) {
            points.push(FrontPoint {
                x: a,
                y: b,
                witness: witness.into_iter().collect(),
            });
        }
    }
    Ok(ParetoFront { x, y, points })
}

/// Exact `(1, 1)` bicriteria solver backed by a precomputed front. Bound to
/// the instance it was built for.
#[derive(Debug, Clone)]
pub struct OracleSolver {
    front: ParetoFront,
    fallback: NodeId,
    edge_count: usize,
}

impl OracleSolver {
    pub fn new(
        graph: &BiGraph,
        terminals: &TerminalSet,
        budgeted: Measure,
        minimized: Measure,
        caps: OracleCaps,
    ) -> Result<Self> {
        let front = pareto_front_by(graph, terminals, caps, budgeted, minimized)?;
        let fallback = terminals
            .iter()
            .next()
            .ok_or_else(|| Error::InvalidTerminals("empty terminal set".into()))?;
        Ok(OracleSolver {
            front,
            fallback,
            edge_count: graph.edge_count(),
        })
    }

    pub fn front(&self) -> &ParetoFront {
        &self.front
    }
}

impl BicriteriaSolver for OracleSolver {
    fn budgeted(&self) -> Measure {
        self.front.x
    }

    fn minimized(&self) -> Measure {
        self.front.y
    }

    fn guarantee(&self, _: &BiGraph, _: &TerminalSet) -> (Rational, Rational) {
        (Rational::from_integer(1), Rational::from_integer(1))
    }

    fn solve(
        &self,
        graph: &BiGraph,
        _: &TerminalSet,
        budget: Cost,
    ) -> Result<Option<TreeSolution>> {
        if graph.edge_count() != self.edge_count {
            return Err(Error::InvalidParameter(
                "oracle solver used on a different graph".into(),
            ));
        }
        match self.front.opt_given_budget(self.front.x, budget)? {
            None => Ok(None),
            Some(p) if p.witness.is_empty() => Ok(Some(TreeSolution::single_node(self.fallback))),
            Some(p) => evaluate_tree(graph, p.witness.iter().copied()).map(Some),
        }
    }
}
