//! Unicriterion building blocks: minimum spanning trees, all-pairs shortest
//! paths, minimum-diameter spanning trees, restricted shortest paths and
//! small minimum-weight matchings.

mod dijkstra;
pub mod matching;
pub mod rsp;

use std::collections::BTreeSet;

use num_integer::Integer;
use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::graph::{evaluate_tree, tree_diameter, BiGraph, CostKind, EdgeId, NodeId, TreeSolution};
use crate::rational::Rational;

pub(crate) use dijkstra::dijkstra;
pub use matching::{min_weight_matching, min_weight_matching_with_threshold, MatchingResult};
pub use rsp::{restricted_shortest_path_exact, restricted_shortest_path_fptas, Path};

/// Which per-edge cost a unicriterion solver sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostSelector {
    C,
    D,
    /// `a·c(e) + b·d(e)`.
    Composite {
        a: Rational,
        b: Rational,
    },
}

/// Per-edge weights of a selector over a common denominator: the true
/// weight of edge `e` is `weights[e] / scale`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectorWeights {
    pub weights: Vec<u128>,
    pub scale: u128,
}

impl SelectorWeights {
    pub fn value(&self, scaled: u128) -> Rational {
        Rational::new(scaled, self.scale)
    }
}

impl CostSelector {
    pub fn composite(a: Rational, b: Rational) -> Self {
        CostSelector::Composite { a, b }
    }

    pub fn weights(&self, graph: &BiGraph) -> Result<SelectorWeights> {
        let plain = |kind: CostKind| SelectorWeights {
            weights: graph.edges().iter().map(|e| e.cost(kind) as u128).collect(),
            scale: 1,
        };
        match *self {
            CostSelector::C => Ok(plain(CostKind::C)),
            CostSelector::D => Ok(plain(CostKind::D)),
            CostSelector::Composite { a, b } => {
                let scale = a.denom().lcm(b.denom());
                let ka = a
                    .numer()
                    .checked_mul(scale / a.denom())
                    .ok_or(Error::Overflow)?;
                let kb = b
                    .numer()
                    .checked_mul(scale / b.denom())
                    .ok_or(Error::Overflow)?;
                let weights = graph
                    .edges()
                    .iter()
                    .map(|e| {
                        let wc = ka.checked_mul(e.c as u128)?;
                        let wd = kb.checked_mul(e.d as u128)?;
                        wc.checked_add(wd)
                    })
                    .collect::<Option<Vec<u128>>>()
                    .ok_or(Error::Overflow)?;
                Ok(SelectorWeights { weights, scale })
            }
        }
    }
}

/// Total selector weight of a tree, exact.
pub fn tree_total(graph: &BiGraph, tree: &TreeSolution, sel: &CostSelector) -> Result<Rational> {
    let w = sel.weights(graph)?;
    let sum = tree
        .edge_ids
        .iter()
        .try_fold(0u128, |acc, &id| acc.checked_add(w.weights[id]))
        .ok_or(Error::Overflow)?;
    Ok(w.value(sum))
}

/// Selector diameter of a tree, exact.
pub fn tree_diameter_under(
    graph: &BiGraph,
    tree: &TreeSolution,
    sel: &CostSelector,
) -> Result<Rational> {
    let w = sel.weights(graph)?;
    Ok(w.value(tree_diameter(graph, &tree.edge_ids, &w.weights)?))
}

fn spanning_root(graph: &BiGraph) -> Result<Option<TreeSolution>> {
    if graph.node_count() == 1 {
        return Ok(Some(TreeSolution::single_node(0)));
    }
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(None)
}

/// Minimum spanning tree under `sel`; ties go to the smallest edge id.
pub fn mst(graph: &BiGraph, sel: &CostSelector) -> Result<TreeSolution> {
    if let Some(t) = spanning_root(graph)? {
        return Ok(t);
    }
    let w = sel.weights(graph)?;
    let mut order: Vec<EdgeId> = (0..graph.edge_count()).collect();
    order.sort_by_key(|&id| (w.weights[id], id));
    let mut uf = UnionFind::<usize>::new(graph.node_count());
    let mut chosen = Vec::with_capacity(graph.node_count() - 1);
    for id in order {
        let e = &graph.edges()[id];
        if uf.union(e.u, e.v) {
            chosen.push(id);
        }
    }
    evaluate_tree(graph, chosen)
}

/// All-pairs shortest distances in selector units (`dist / scale`);
/// `None` marks unreachable pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    pub scale: u128,
    pub dist: Vec<Vec<Option<u128>>>,
}

impl DistanceMatrix {
    pub fn get(&self, u: NodeId, v: NodeId) -> Option<Rational> {
        self.dist[u][v].map(|d| Rational::new(d, self.scale))
    }
}

pub fn apsp(graph: &BiGraph, sel: &CostSelector) -> Result<DistanceMatrix> {
    let w = sel.weights(graph)?;
    Ok(DistanceMatrix {
        scale: w.scale,
        dist: apsp_weights(graph, &w.weights),
    })
}

#[allow(clippy::needless_range_loop)]
pub(crate) fn apsp_weights(graph: &BiGraph, weights: &[u128]) -> Vec<Vec<Option<u128>>> {
    let n = graph.node_count();
    let mut dist = vec![vec![None; n]; n];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for e in graph.edges() {
        let w = weights[e.id];
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            if dist[a][b].is_none_or(|cur| w < cur) {
                dist[a][b] = Some(w);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = dist[i][k] else { continue };
            for j in 0..n {
                if let Some(kj) = dist[k][j] {
                    let via = ik.saturating_add(kj);
                    if dist[i][j].is_none_or(|cur| via < cur) {
                        dist[i][j] = Some(via);
                    }
                }
            }
        }
    }
    dist
}

/// Where the absolute 1-center sits: on a vertex, or on an edge at doubled
/// offset `twice_offset` from `edge.u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Center {
    Vertex(NodeId),
    OnEdge { edge: EdgeId, twice_offset: u128 },
}

/// Minimum-diameter spanning tree: the shortest-path tree grown from the
/// graph's absolute 1-center. Its diameter equals twice the absolute radius.
pub fn min_diameter_spanning_tree(graph: &BiGraph, sel: &CostSelector) -> Result<TreeSolution> {
    if let Some(t) = spanning_root(graph)? {
        return Ok(t);
    }
    let w = sel.weights(graph)?;
    let dist = apsp_weights(graph, &w.weights);
    let d = |a: NodeId, b: NodeId| dist[a][b].expect("connected");
    let n = graph.node_count();

    // (twice the radius, center); vertices first so they win ties.
    let mut best: Option<(u128, Center)> = None;
    let mut offer = |value: u128, center: Center| {
        if best.is_none_or(|(b, _)| value < b) {
            best = Some((value, center));
        }
    };
    for v in 0..n {
        let ecc = (0..n).map(|z| d(v, z)).max().unwrap_or(0);
        offer(2 * ecc, Center::Vertex(v));
    }
    for e in graph.edges() {
        let len = w.weights[e.id];
        if len == 0 {
            continue;
        }
        // Tents g_z(t) = min(t + du[z], len - t + dv[z]); keep the
        // nondominated ones sorted by du descending (then dv ascending).
        let mut tents: Vec<(u128, u128)> = (0..n).map(|z| (d(e.u, z), d(e.v, z))).collect();
        tents.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)));
        let mut frontier: Vec<(u128, u128)> = Vec::new();
        for t in tents {
            if frontier.last().is_none_or(|last| t.1 > last.1) {
                frontier.push(t);
            }
        }
        for pair in frontier.windows(2) {
            // the envelope dips where the next tent's rising side meets this
            // tent's falling side: t + a = len - t + b.
            let (_, b) = pair[0];
            let (a, _) = pair[1];
            let twice_offset = len + b - a;
            offer(
                len + a + b,
                Center::OnEdge {
                    edge: e.id,
                    twice_offset,
                },
            );
        }
    }
    let (_, center) = best.expect("at least one vertex");

    let doubled: Vec<u128> = w.weights.iter().map(|x| 2 * x).collect();
    let adj = graph.adjacency();
    let sources: Vec<(NodeId, u128)> = match center {
        Center::Vertex(v) => vec![(v, 0)],
        Center::OnEdge { edge, twice_offset } => {
            let e = &graph.edges()[edge];
            vec![(e.u, twice_offset), (e.v, doubled[edge] - twice_offset)]
        }
    };
    let sp = dijkstra(graph, &adj, &doubled, &sources, |_| true);
    let mut chosen: BTreeSet<EdgeId> = sp.pred.iter().flatten().copied().collect();
    if let Center::OnEdge { edge, .. } = center {
        let e = &graph.edges()[edge];
        if sp.pred[e.u].is_none() && sp.pred[e.v].is_none() {
            chosen.insert(edge);
        }
    }
    evaluate_tree(graph, chosen)
}
