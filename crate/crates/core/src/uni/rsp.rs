//! Restricted shortest paths: minimum c-cost s–t path whose d-length is at
//! most a budget.

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::dijkstra;
use crate::error::{Error, Result};
use crate::graph::{BiGraph, Cost, EdgeId, NodeId};
use crate::rational::{positive, to_big, BigRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub edge_ids: Vec<EdgeId>,
    pub cost_c: Cost,
    pub length_d: Cost,
}

impl Path {
    fn trivial(s: NodeId) -> Self {
        Path {
            nodes: vec![s],
            edge_ids: Vec::new(),
            cost_c: 0,
            length_d: 0,
        }
    }

    /// Builds a simple path from a walk by erasing loops; both costs can
    /// only decrease.
    pub(crate) fn from_walk(graph: &BiGraph, start: NodeId, walk: &[EdgeId]) -> Result<Self> {
        let mut nodes = vec![start];
        let mut edge_ids: Vec<EdgeId> = Vec::new();
        for &id in walk {
            let e = graph.edge(id)?;
            let cur = *nodes.last().unwrap();
            let next = e.other(cur);
            if let Some(pos) = nodes.iter().position(|&v| v == next) {
                nodes.truncate(pos + 1);
                edge_ids.truncate(pos);
            } else {
                nodes.push(next);
                edge_ids.push(id);
            }
        }
        let mut cost_c: Cost = 0;
        let mut length_d: Cost = 0;
        for &id in &edge_ids {
            let e = &graph.edges()[id];
            cost_c = cost_c.checked_add(e.c).ok_or(Error::Overflow)?;
            length_d = length_d.checked_add(e.d).ok_or(Error::Overflow)?;
        }
        Ok(Path {
            nodes,
            edge_ids,
            cost_c,
            length_d,
        })
    }
}

/// `best[b][v]`: least objective weight of an s→v walk whose budget weights
/// sum to exactly `b`. Back pointers record `(previous layer, edge)`.
struct Layers {
    best: Vec<Vec<Option<u128>>>,
    back: Vec<Vec<Option<(usize, EdgeId)>>>,
}

impl Layers {
    fn walk_to(&self, graph: &BiGraph, mut layer: usize, mut v: NodeId) -> Vec<EdgeId> {
        let mut walk = Vec::new();
        while let Some((prev_layer, id)) = self.back[layer][v] {
            walk.push(id);
            v = graph.edges()[id].other(v);
            layer = prev_layer;
        }
        walk.reverse();
        walk
    }
}

fn layered(
    graph: &BiGraph,
    s: NodeId,
    budget_w: &[usize],
    objective_w: &[u128],
    max_budget: usize,
) -> Layers {
    let n = graph.node_count();
    let adj = graph.adjacency();
    let mut best = vec![vec![None; n]; max_budget + 1];
    let mut back = vec![vec![None; n]; max_budget + 1];
    for b in 0..=max_budget {
        let mut sources: Vec<(NodeId, u128)> = Vec::new();
        if b == 0 {
            sources.push((s, 0));
        }
        // entries arriving from lower layers over budget-consuming edges
        let mut seed: Vec<Option<(u128, usize, EdgeId)>> = vec![None; n];
        for e in graph.edges() {
            let k = budget_w[e.id];
            if k == 0 || k > b {
                continue;
            }
            for (x, y) in [(e.u, e.v), (e.v, e.u)] {
                if let Some(ox) = best[b - k][x] {
                    let cand = ox + objective_w[e.id];
                    if seed[y].is_none_or(|(cur, _, _)| cand < cur) {
                        seed[y] = Some((cand, b - k, e.id));
                    }
                }
            }
        }
        for (v, entry) in seed.iter().enumerate() {
            if let Some((val, _, _)) = entry {
                sources.push((v, *val));
            }
        }
        if sources.is_empty() {
            continue;
        }
        let sp = dijkstra(graph, &adj, objective_w, &sources, |id| budget_w[id] == 0);
        for v in 0..n {
            let Some(dv) = sp.dist[v] else { continue };
            best[b][v] = Some(dv);
            back[b][v] = match sp.pred[v] {
                Some(id) => Some((b, id)),
                None => seed[v].map(|(_, layer, id)| (layer, id)),
            };
        }
    }
    Layers { best, back }
}

fn check_nodes(graph: &BiGraph, s: NodeId, t: NodeId) -> Result<()> {
    for v in [s, t] {
        if v >= graph.node_count() {
            return Err(Error::InvalidParameter(format!("node {v} out of range")));
        }
    }
    Ok(())
}

fn no_path(s: NodeId, t: NodeId, budget: Cost) -> Error {
    Error::Infeasible(format!("no {budget}-bounded path between {s} and {t}"))
}

/// Exact pseudopolynomial DP over (node, d-budget used). Among optimal
/// paths the one with the smallest d-length is returned.
pub fn restricted_shortest_path_exact(
    graph: &BiGraph,
    s: NodeId,
    t: NodeId,
    budget: Cost,
) -> Result<Path> {
    check_nodes(graph, s, t)?;
    if s == t {
        return Ok(Path::trivial(s));
    }
    let max_budget = usize::try_from(budget).map_err(|_| Error::Overflow)?;
    let budget_w: Vec<usize> = graph
        .edges()
        .iter()
        .map(|e| usize::try_from(e.d).unwrap_or(usize::MAX))
        .collect();
    let objective_w: Vec<u128> = graph.edges().iter().map(|e| e.c as u128).collect();
    let layers = layered(graph, s, &budget_w, &objective_w, max_budget);
    let best = (0..=max_budget)
        .filter_map(|b| layers.best[b][t].map(|c| (c, b)))
        .min()
        .ok_or_else(|| no_path(s, t, budget))?;
    Path::from_walk(graph, s, &layers.walk_to(graph, best.1, t))
}

/// `floor(c·(n−1)/(λ·ε))`, clamped to `cap + 1` (anything beyond the cap is
/// unusable).
pub(crate) fn round_costs(
    costs: impl Iterator<Item = Cost>,
    scale_num: usize,
    lambda_eps: &BigRational,
    cap: usize,
) -> Vec<usize> {
    costs
        .map(|c| {
            let q = BigRational::from_integer((c as u128 * scale_num as u128).into()) / lambda_eps;
            q.floor()
                .to_integer()
                .to_usize()
                .map_or(cap + 1, |k| k.min(cap + 1))
        })
        .collect()
}

/// Rounding-and-scaling approximation: d-length at most `budget` and c-cost
/// at most `(1 + eps)` times the optimum.
pub fn restricted_shortest_path_fptas(
    graph: &BiGraph,
    s: NodeId,
    t: NodeId,
    budget: Cost,
    eps: Rational,
) -> Result<Path> {
    check_nodes(graph, s, t)?;
    let eps = positive("epsilon", eps)?;
    if s == t {
        return Ok(Path::trivial(s));
    }
    let adj = graph.adjacency();
    let d_w: Vec<u128> = graph.edges().iter().map(|e| e.d as u128).collect();
    let shortest = dijkstra(graph, &adj, &d_w, &[(s, 0)], |_| true);
    if shortest.dist[t].is_none_or(|d| d > budget as u128) {
        return Err(no_path(s, t, budget));
    }
    let free = dijkstra(graph, &adj, &d_w, &[(s, 0)], |id| graph.edges()[id].c == 0);
    if free.dist[t].is_some_and(|d| d <= budget as u128) {
        let walk = walk_from_pred(graph, &free.pred, t);
        return Path::from_walk(graph, s, &walk);
    }

    // optimum is now an integer >= 1
    let steps = graph.node_count().saturating_sub(1).max(1);
    let eps_big = to_big(eps);
    let search_eps = to_big(eps.min(Rational::new(1, 4)));
    let two = BigRational::from_integer(2u32.into());
    let mut lb = BigRational::one();
    let mut ub = BigRational::from_integer(graph.total(crate::graph::CostKind::C)?.into());

    let feasible_within = |lambda_eps: &BigRational, cap: usize| -> Layers {
        let rounded = round_costs(graph.edges().iter().map(|e| e.c), steps, lambda_eps, cap);
        layered(graph, s, &rounded, &d_w, cap)
    };

    while ub >= &two * &lb {
        let lambda = (&lb + &ub) / &two;
        let lambda_eps = &lambda * &search_eps;
        let cap = floor_usize(&(BigRational::from_integer(steps.into()) / &search_eps));
        let layers = feasible_within(&lambda_eps, cap);
        let low = (0..=cap).any(|k| layers.best[k][t].is_some_and(|d| d <= budget as u128));
        if low {
            ub = lambda * (BigRational::one() + &search_eps);
        } else {
            lb = lambda;
        }
    }

    let lambda_eps = &lb * &eps_big;
    let cap = floor_usize(&(BigRational::from_integer((2 * steps).into()) / &eps_big));
    let layers = feasible_within(&lambda_eps, cap);
    let mut best: Option<Path> = None;
    for k in 0..=cap {
        if layers.best[k][t].is_some_and(|d| d <= budget as u128) {
            let path = Path::from_walk(graph, s, &layers.walk_to(graph, k, t))?;
            if best.as_ref().is_none_or(|b| path.cost_c < b.cost_c) {
                best = Some(path);
            }
        }
    }
    best.ok_or_else(|| no_path(s, t, budget))
}

pub(crate) fn floor_usize(x: &BigRational) -> usize {
    if x.is_zero() {
        return 0;
    }
    x.floor().to_integer().to_usize().unwrap_or(usize::MAX)
}

fn walk_from_pred(graph: &BiGraph, pred: &[Option<EdgeId>], t: NodeId) -> Vec<EdgeId> {
    let mut walk = Vec::new();
    let mut v = t;
    while let Some(id) = pred[v] {
        walk.push(id);
        v = graph.edges()[id].other(v);
    }
    walk.reverse();
    walk
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn two_parallel() -> BiGraph {
        BiGraph::from_tuples(2, &[(0, 1, 10, 1), (0, 1, 1, 5)]).unwrap()
    }

    #[test]
    fn only_feasible_edge_is_used() {
        let p = restricted_shortest_path_exact(&two_parallel(), 0, 1, 3).unwrap();
        assert_eq!((p.cost_c, p.edge_ids.clone()), (10, vec![0]));
    }

    #[test]
    fn cheaper_edge_wins_when_both_fit() {
        let p = restricted_shortest_path_exact(&two_parallel(), 0, 1, 5).unwrap();
        assert_eq!((p.cost_c, p.length_d), (1, 5));
    }

    #[test]
    fn identity_path() {
        let p = restricted_shortest_path_exact(&two_parallel(), 1, 1, 0).unwrap();
        assert_eq!(p.cost_c, 0);
        assert!(p.edge_ids.is_empty());
        assert_eq!(p.nodes, vec![1]);
    }

    #[test]
    fn infeasible_budget() {
        let err = restricted_shortest_path_exact(&two_parallel(), 0, 1, 0).unwrap_err();
        assert!(err.is_infeasible());
        let err = restricted_shortest_path_fptas(&two_parallel(), 0, 1, 0, int(1)).unwrap_err();
        assert!(err.is_infeasible());
    }

    #[test]
    fn fptas_two_parallel_edges() {
        for eps in [int(1), ratio(1, 2), ratio(1, 10), int(3)] {
            let p = restricted_shortest_path_fptas(&two_parallel(), 0, 1, 5, eps).unwrap();
            assert_eq!(p.cost_c, 1);
        }
    }

    #[test]
    fn zero_d_edges_inside_a_layer() {
        // 0 -(c5,d0)- 1 -(c0,d0)- 2 versus direct 0-2 (c9, d0)
        let g = BiGraph::from_tuples(3, &[(0, 1, 5, 0), (1, 2, 0, 0), (0, 2, 9, 0)]).unwrap();
        let p = restricted_shortest_path_exact(&g, 0, 2, 0).unwrap();
        assert_eq!((p.cost_c, p.nodes.clone()), (5, vec![0, 1, 2]));
    }

    #[test]
    fn zero_cost_path_short_circuits() {
        let g = BiGraph::from_tuples(3, &[(0, 1, 0, 2), (1, 2, 0, 2), (0, 2, 3, 1)]).unwrap();
        let p = restricted_shortest_path_fptas(&g, 0, 2, 4, ratio(1, 2)).unwrap();
        assert_eq!(p.cost_c, 0);
        let p = restricted_shortest_path_fptas(&g, 0, 2, 3, ratio(1, 2)).unwrap();
        assert_eq!(p.cost_c, 3);
    }

    #[test]
    fn loop_erasure_keeps_a_simple_path() {
        let g = BiGraph::from_tuples(3, &[(0, 1, 1, 1), (1, 2, 1, 1)]).unwrap();
        let p = Path::from_walk(&g, 0, &[0, 1, 1]).unwrap();
        assert_eq!(p.nodes, vec![0, 1]);
        assert_eq!(p.edge_ids, vec![0]);
    }
}
