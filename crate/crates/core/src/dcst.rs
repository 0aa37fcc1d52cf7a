//! Cluster-merging approximation for the diameter-bounded minimum-cost
//! Steiner tree.
//!
//! Every terminal starts as its own cluster. Each phase connects cluster
//! centers by cheap d-bounded paths, pairs them with a minimum-weight
//! matching and merges the pairs, so the cluster count halves and the
//! radius grows by at most `D`. After `⌈log₂|K|⌉` phases one cluster is
//! left; a d-shortest-path tree of it from its center is the answer.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    evaluate_tree, BiGraph, Cost, EdgeId, Measure, NodeId, TerminalSet, TreeSolution,
};
use crate::rational::{ceil_log2, positive, Rational};
use crate::transforms::BicriteriaSolver;
use crate::uni::matching::DEFAULT_EXACT_THRESHOLD;
use crate::uni::{
    dijkstra, min_weight_matching_with_threshold, restricted_shortest_path_exact,
    restricted_shortest_path_fptas, MatchingResult, Path,
};

/// Budgets up to this value use the exact path DP under [`PathMode::Auto`].
pub const AUTO_EXACT_LIMIT: Cost = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum PathMode {
    Exact,
    Fptas,
    #[default]
    Auto,
}

impl PathMode {
    fn is_exact(self, budget: Cost) -> bool {
        match self {
            PathMode::Exact => true,
            PathMode::Fptas => false,
            PathMode::Auto => budget <= AUTO_EXACT_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cluster {
    pub nodes: BTreeSet<NodeId>,
    pub edge_ids: BTreeSet<EdgeId>,
    pub center: NodeId,
}

impl Cluster {
    pub fn singleton(v: NodeId) -> Self {
        Cluster {
            nodes: BTreeSet::from([v]),
            edge_ids: BTreeSet::new(),
            center: v,
        }
    }

    /// Largest d-distance from the center to a cluster node, using cluster
    /// edges only.
    pub fn radius(&self, graph: &BiGraph) -> Result<Cost> {
        let (dist, _) = cluster_distances(graph, self);
        self.nodes
            .iter()
            .map(|&v| dist[v].ok_or(Error::Disconnected))
            .try_fold(0u128, |acc, d| d.map(|d| acc.max(d)))
            .and_then(|r| Cost::try_from(r).map_err(|_| Error::Overflow))
    }
}

fn cluster_distances(
    graph: &BiGraph,
    cluster: &Cluster,
) -> (Vec<Option<u128>>, Vec<Option<EdgeId>>) {
    let adj = graph.adjacency();
    let d_w: Vec<u128> = graph.edges().iter().map(|e| e.d as u128).collect();
    let sp = dijkstra(graph, &adj, &d_w, &[(cluster.center, 0)], |id| {
        cluster.edge_ids.contains(&id)
    });
    (sp.dist, sp.pred)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhaseState {
    pub phase_index: usize,
    pub clusters: Vec<Cluster>,
}

impl PhaseState {
    pub fn initial(terminals: &TerminalSet) -> Self {
        PhaseState {
            phase_index: 0,
            clusters: terminals.iter().map(Cluster::singleton).collect(),
        }
    }
}

/// Complete graph over cluster centers; `paths[i][j]` (`i < j`) is the
/// chosen d-bounded path between centers `i` and `j`, or `None`.
#[derive(Debug, Clone, Serialize)]
pub struct AuxiliaryGraph {
    pub centers: Vec<NodeId>,
    pub paths: Vec<Vec<Option<Path>>>,
}

impl AuxiliaryGraph {
    pub fn path(&self, i: usize, j: usize) -> Option<&Path> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.paths[a][b].as_ref()
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<Cost> {
        if i == j {
            return Some(0);
        }
        self.path(i, j).map(|p| p.cost_c)
    }

    pub fn infeasible_pairs(&self) -> Vec<(NodeId, NodeId)> {
        let m = self.centers.len();
        let mut out = Vec::new();
        for i in 0..m {
            for j in (i + 1)..m {
                if self.paths[i][j].is_none() {
                    out.push((self.centers[i], self.centers[j]));
                }
            }
        }
        out
    }
}

pub fn build_auxiliary_graph(
    graph: &BiGraph,
    clusters: &[Cluster],
    budget: Cost,
    eps: Rational,
    mode: PathMode,
) -> Result<AuxiliaryGraph> {
    if clusters.len() < 2 {
        return Err(Error::InvalidParameter(
            "auxiliary graph needs at least 2 clusters".into(),
        ));
    }
    let exact = mode.is_exact(budget);
    let centers: Vec<NodeId> = clusters.iter().map(|c| c.center).collect();
    let m = centers.len();
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
        .collect();
    let found: Vec<Option<Path>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (s, t) = (centers[i], centers[j]);
            let res = if exact {
                restricted_shortest_path_exact(graph, s, t, budget)
            } else {
                restricted_shortest_path_fptas(graph, s, t, budget, eps)
            };
            match res {
                Ok(p) => Ok(Some(p)),
                Err(e) if e.is_infeasible() => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let mut paths = vec![vec![None; m]; m];
    for (&(i, j), p) in pairs.iter().zip(found) {
        paths[i][j] = p;
    }
    Ok(AuxiliaryGraph { centers, paths })
}

/// Merges matched clusters along their witness paths. The merged center is
/// the smaller of the two; an unmatched cluster is carried over unchanged.
pub fn merge_phase(
    graph: &BiGraph,
    state: &PhaseState,
    matching: &MatchingResult,
    aux: &AuxiliaryGraph,
) -> Result<PhaseState> {
    let m = state.clusters.len();
    let mut next = Vec::with_capacity(m.div_ceil(2));
    for &(i, j) in &matching.pairs {
        let path = aux.path(i, j).ok_or_else(|| {
            Error::Infeasible(format!(
                "matched centers {} and {} have no bounded path",
                aux.centers[i], aux.centers[j]
            ))
        })?;
        let (a, b) = (&state.clusters[i], &state.clusters[j]);
        let mut nodes = &a.nodes | &b.nodes;
        let mut edge_ids = &a.edge_ids | &b.edge_ids;
        nodes.extend(path.nodes.iter().copied());
        edge_ids.extend(path.edge_ids.iter().copied());
        debug_assert!(path.edge_ids.iter().all(|&id| graph.edge(id).is_ok()));
        next.push(Cluster {
            nodes,
            edge_ids,
            center: a.center.min(b.center),
        });
    }
    for k in matching.unmatched(m) {
        next.push(state.clusters[k].clone());
    }
    next.sort_by_key(|c| c.center);
    Ok(PhaseState {
        phase_index: state.phase_index + 1,
        clusters: next,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhaseRecord {
    pub phase_index: usize,
    pub clusters_before: usize,
    pub clusters_after: usize,
    pub matching_weight: Cost,
    pub matching_exact: bool,
    /// Largest center-to-node d-distance over the clusters after merging.
    pub max_radius: Cost,
}

#[derive(Debug, Clone, Serialize)]
pub struct DcstOutcome {
    pub tree: TreeSolution,
    pub phases: Vec<PhaseRecord>,
    /// The diameter is at most this times `D`.
    #[serde(serialize_with = "crate::rational::serialize")]
    pub diameter_factor: Rational,
    /// The c-cost is at most this times the optimum; doubled when some
    /// phase fell back to a greedy matching.
    #[serde(serialize_with = "crate::rational::serialize")]
    pub cost_factor: Rational,
    pub exact_paths: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DcstConfig {
    pub eps: Rational,
    pub path_mode: PathMode,
    pub matching_threshold: usize,
}

impl DcstConfig {
    pub fn new(eps: Rational, path_mode: PathMode) -> Self {
        DcstConfig {
            eps,
            path_mode,
            matching_threshold: DEFAULT_EXACT_THRESHOLD,
        }
    }
}

/// Phase count for `k` terminals, never below one so that the reported
/// factors stay meaningful.
fn log_factor(k: usize) -> Rational {
    Rational::from_integer(ceil_log2(k).max(1) as u128)
}

pub fn dcst(
    graph: &BiGraph,
    terminals: &TerminalSet,
    budget: Cost,
    eps: Rational,
    path_mode: PathMode,
) -> Result<DcstOutcome> {
    dcst_with(graph, terminals, budget, DcstConfig::new(eps, path_mode))
}

pub fn dcst_with(
    graph: &BiGraph,
    terminals: &TerminalSet,
    budget: Cost,
    config: DcstConfig,
) -> Result<DcstOutcome> {
    let eps = positive("epsilon", config.eps)?;
    let exact_paths = config.path_mode.is_exact(budget);
    let levels = log_factor(terminals.len());
    let path_factor = if exact_paths {
        Rational::from_integer(1)
    } else {
        Rational::from_integer(1) + eps
    };
    let mut state = PhaseState::initial(terminals);
    let mut phases = Vec::new();
    let mut greedy = false;

    while state.clusters.len() > 1 {
        let aux = build_auxiliary_graph(graph, &state.clusters, budget, eps, config.path_mode)?;
        let missing = aux.infeasible_pairs();
        if !missing.is_empty() {
            let listed: Vec<String> = missing.iter().map(|(a, b)| format!("{a}-{b}")).collect();
            return Err(Error::Infeasible(format!(
                "no {budget}-bounded Steiner tree: no {budget}-bounded path between centers {}",
                listed.join(", ")
            )));
        }
        let m = aux.centers.len();
        let weights: Vec<Vec<Cost>> = (0..m)
            .map(|i| (0..m).map(|j| aux.weight(i, j).unwrap_or(0)).collect())
            .collect();
        let matching = min_weight_matching_with_threshold(&weights, config.matching_threshold)?;
        greedy |= !matching.is_exact;
        let next = merge_phase(graph, &state, &matching, &aux)?;
        let max_radius = next
            .clusters
            .iter()
            .map(|c| c.radius(graph))
            .try_fold(0, |acc, r| r.map(|r| acc.max(r)))?;
        phases.push(PhaseRecord {
            phase_index: next.phase_index,
            clusters_before: m,
            clusters_after: next.clusters.len(),
            matching_weight: matching.total_weight,
            matching_exact: matching.is_exact,
            max_radius,
        });
        state = next;
    }

    let last = state
        .clusters
        .pop()
        .ok_or_else(|| Error::InvalidTerminals("empty terminal set".into()))?;
    let tree = if last.edge_ids.is_empty() {
        TreeSolution::single_node(last.center)
    } else {
        let (_, pred) = cluster_distances(graph, &last);
        evaluate_tree(graph, last.nodes.iter().filter_map(|&v| pred[v]))?
    };
    let mut cost_factor = path_factor * levels;
    if greedy {
        cost_factor *= Rational::from_integer(2);
    }
    Ok(DcstOutcome {
        tree,
        phases,
        diameter_factor: Rational::from_integer(2) * levels,
        cost_factor,
        exact_paths,
    })
}

/// DCST as a "budget the diameter, minimize the cost" solver.
#[derive(Debug, Clone, Copy)]
pub struct DcstSolver {
    pub eps: Rational,
    pub path_mode: PathMode,
}

impl BicriteriaSolver for DcstSolver {
    fn budgeted(&self) -> Measure {
        Measure::DIAMETER_D
    }

    fn minimized(&self) -> Measure {
        Measure::TOTAL_C
    }

    fn guarantee(&self, _: &BiGraph, terminals: &TerminalSet) -> (Rational, Rational) {
        let levels = log_factor(terminals.len());
        let mut beta = (Rational::from_integer(1) + self.eps) * levels;
        if terminals.len() > DEFAULT_EXACT_THRESHOLD {
            beta *= Rational::from_integer(2);
        }
        (Rational::from_integer(2) * levels, beta)
    }

    fn solve(
        &self,
        graph: &BiGraph,
        terminals: &TerminalSet,
        budget: Cost,
    ) -> Result<Option<TreeSolution>> {
        match dcst(graph, terminals, budget, self.eps, self.path_mode) {
            Ok(out) => Ok(Some(out.tree)),
            Err(e) if e.is_infeasible() => Ok(None),
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::steiner_metrics;
    use crate::rational::ratio;

    fn star(leaves: usize) -> BiGraph {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v, 1, 1)).collect();
        BiGraph::from_tuples(leaves + 1, &edges).unwrap()
    }

    #[test]
    fn star_with_leaf_terminals() {
        let g = star(4);
        let k = TerminalSet::new(&g, 1..=4).unwrap();
        let out = dcst(&g, &k, 2, ratio(1, 2), PathMode::Exact).unwrap();
        assert_eq!(steiner_metrics(&g, &out.tree, &k).unwrap(), (4, 2));
        assert_eq!(out.phases.len(), 2);
    }

    #[test]
    fn single_terminal_is_empty_tree() {
        let g = star(2);
        let k = TerminalSet::new(&g, [1]).unwrap();
        let out = dcst(&g, &k, 0, ratio(1, 2), PathMode::Exact).unwrap();
        assert!(out.tree.edge_ids.is_empty());
        assert_eq!((out.tree.total_c, out.tree.diameter_d), (0, 0));
    }

    #[test]
    fn two_terminals_give_the_restricted_path() {
        let g = BiGraph::from_tuples(3, &[(0, 2, 10, 1), (0, 1, 1, 3), (1, 2, 1, 3)]).unwrap();
        let k = TerminalSet::new(&g, [0, 2]).unwrap();
        let short = dcst(&g, &k, 5, ratio(1, 2), PathMode::Exact).unwrap();
        assert_eq!(short.tree.total_c, 10);
        let long = dcst(&g, &k, 6, ratio(1, 2), PathMode::Exact).unwrap();
        assert_eq!(long.tree.total_c, 2);
    }

    #[test]
    fn unreachable_centers_are_reported() {
        let g = BiGraph::from_tuples(3, &[(0, 1, 1, 5), (1, 2, 1, 5)]).unwrap();
        let k = TerminalSet::new(&g, [0, 2]).unwrap();
        let err = dcst(&g, &k, 9, ratio(1, 2), PathMode::Exact).unwrap_err();
        assert!(err.is_infeasible());
        assert!(err.to_string().contains("0-2"));
    }

    #[test]
    fn auxiliary_weights_and_merge() {
        let g = BiGraph::from_tuples(4, &[(0, 1, 3, 1), (1, 2, 4, 1), (2, 3, 5, 1)]).unwrap();
        let k = TerminalSet::all(&g);
        let state = PhaseState::initial(&k);
        let aux =
            build_auxiliary_graph(&g, &state.clusters, 3, ratio(1, 2), PathMode::Exact).unwrap();
        assert_eq!(aux.weight(0, 1), Some(3));
        assert_eq!(aux.weight(0, 3), Some(12));
        let tight =
            build_auxiliary_graph(&g, &state.clusters, 2, ratio(1, 2), PathMode::Exact).unwrap();
        assert_eq!(tight.weight(0, 3), None);

        let m = MatchingResult {
            pairs: vec![(0, 1), (2, 3)],
            total_weight: 8,
            is_exact: true,
        };
        let next = merge_phase(&g, &state, &m, &aux).unwrap();
        assert_eq!(next.clusters.len(), 2);
        assert_eq!(next.clusters[0].center, 0);
        assert_eq!(next.clusters[1].center, 2);
    }

    #[test]
    fn odd_cluster_count_carries_one_over() {
        let g = star(3);
        let k = TerminalSet::new(&g, 1..=3).unwrap();
        let out = dcst(&g, &k, 2, int_eps(), PathMode::Exact).unwrap();
        assert_eq!(out.phases[0].clusters_after, 2);
        assert_eq!(out.phases[1].clusters_after, 1);
    }

    fn int_eps() -> Rational {
        ratio(1, 1)
    }
}
