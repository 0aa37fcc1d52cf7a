use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{BiGraph, EdgeId, NodeId};

/// Shortest-path forest from several sources with initial offsets.
pub(crate) struct ShortestPaths {
    pub dist: Vec<Option<u128>>,
    pub pred: Vec<Option<EdgeId>>,
}

/// Dijkstra over `weights` (indexed by edge id), restricted to edges for
/// which `allowed` returns true. Equal-distance ties keep the smaller
/// predecessor edge id.
pub(crate) fn dijkstra(
    graph: &BiGraph,
    adj: &[Vec<(NodeId, EdgeId)>],
    weights: &[u128],
    sources: &[(NodeId, u128)],
    allowed: impl Fn(EdgeId) -> bool,
) -> ShortestPaths {
    let n = graph.node_count();
    let mut dist: Vec<Option<u128>> = vec![None; n];
    let mut pred: Vec<Option<EdgeId>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &(s, offset) in sources {
        if dist[s].is_none_or(|d| offset < d) {
            dist[s] = Some(offset);
            heap.push(Reverse((offset, s)));
        }
    }
    while let Some(Reverse((dx, x))) = heap.pop() {
        if done[x] || dist[x] != Some(dx) {
            continue;
        }
        done[x] = true;
        for &(y, id) in &adj[x] {
            if done[y] || !allowed(id) {
                continue;
            }
            let nd = dx.saturating_add(weights[id]);
            let better = match dist[y] {
                None => true,
                Some(cur) => nd < cur || (nd == cur && pred[y].is_some_and(|p| id < p)),
            };
            if better {
                if dist[y] != Some(nd) {
                    heap.push(Reverse((nd, y)));
                }
                dist[y] = Some(nd);
                pred[y] = Some(id);
            }
        }
    }
    ShortestPaths { dist, pred }
}
