//! Independent reference computations for the integration suites. Nothing
//! here calls the solvers under test.

#![allow(dead_code)]

use std::io::Write;

use bicrit::generators::{random_graph, RandomSpec};
use bicrit::spdp::{SpNode, SpTree};
use bicrit::{BiGraph, Cost, NodeId, TerminalSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One line per criterion, written straight to stderr so it survives output
/// capture.
pub fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    let line = format!(
        "acceptance {criterion} [{}] {name}: {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected random multigraph with `n` nodes and up to `max_m` edges.
pub fn random_instance(seed: u64, n: usize, max_m: usize, cmax: Cost, dmax: Cost) -> BiGraph {
    let mut r = rng(seed ^ 0x5eed);
    let m = if n == 1 {
        0
    } else {
        r.gen_range(n - 1..=max_m.max(n - 1))
    };
    random_graph(&RandomSpec {
        nodes: n,
        edges: m,
        c: 0..=cmax,
        d: 0..=dmax,
        seed,
    })
    .unwrap()
}

pub fn random_terminals(seed: u64, graph: &BiGraph, k: usize) -> TerminalSet {
    let mut nodes: Vec<NodeId> = (0..graph.node_count()).collect();
    nodes.shuffle(&mut rng(seed ^ 0x7e12));
    TerminalSet::new(graph, nodes.into_iter().take(k)).unwrap()
}

/// Minimum c-cost over simple s–t paths with d-length at most `budget`, by
/// exhaustive depth-first search.
pub fn brute_rsp(graph: &BiGraph, s: NodeId, t: NodeId, budget: Cost) -> Option<Cost> {
    if s == t {
        return Some(0);
    }
    let adj = graph.adjacency();
    let mut best = None;
    let mut on_path = vec![false; graph.node_count()];
    #[allow(clippy::too_many_arguments)]
    fn go(
        graph: &BiGraph,
        adj: &[Vec<(NodeId, usize)>],
        at: NodeId,
        t: NodeId,
        c: Cost,
        d: Cost,
        budget: Cost,
        on_path: &mut [bool],
        best: &mut Option<Cost>,
    ) {
        if at == t {
            if best.is_none_or(|b| c < b) {
                *best = Some(c);
            }
            return;
        }
        on_path[at] = true;
        for &(y, id) in &adj[at] {
            let e = &graph.edges()[id];
            if !on_path[y] && d + e.d <= budget {
                go(graph, adj, y, t, c + e.c, d + e.d, budget, on_path, best);
            }
        }
        on_path[at] = false;
    }
    go(graph, &adj, s, t, 0, 0, budget, &mut on_path, &mut best);
    best
}

/// Spanning-tree count by the matrix-tree theorem: determinant of the
/// reduced Laplacian, computed exactly by fraction-free elimination.
pub fn matrix_tree_count(graph: &BiGraph) -> i128 {
    let n = graph.node_count();
    if n == 1 {
        return 1;
    }
    let mut lap = vec![vec![0i128; n]; n];
    for e in graph.edges() {
        lap[e.u][e.u] += 1;
        lap[e.v][e.v] += 1;
        lap[e.u][e.v] -= 1;
        lap[e.v][e.u] -= 1;
    }
    let mut a: Vec<Vec<i128>> = lap[1..].iter().map(|row| row[1..].to_vec()).collect();
    let k = n - 1;
    let mut sign = 1;
    let mut prev = 1i128;
    for i in 0..k {
        if a[i][i] == 0 {
            match (i + 1..k).find(|&r| a[r][i] != 0) {
                Some(r) => {
                    a.swap(i, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for r in i + 1..k {
            for c in i + 1..k {
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) / prev;
            }
        }
        prev = a[i][i];
    }
    sign * a[k - 1][k - 1]
}

/// Whether the items split into two halves of equal sum.
pub fn equal_split(items: &[Cost]) -> bool {
    let total: Cost = items.iter().sum();
    if total % 2 == 1 {
        return false;
    }
    (0u32..1 << items.len()).any(|mask| {
        let part: Cost = items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &t)| t)
            .sum();
        2 * part == total
    })
}

/// Least weight over maximum-cardinality matchings, by recursion on the
/// lowest unmatched index.
pub fn brute_matching(w: &[Vec<Cost>]) -> Cost {
    fn go(w: &[Vec<Cost>], free: &mut Vec<usize>, skips: usize) -> Cost {
        if free.len() <= skips {
            return 0;
        }
        let i = free.remove(0);
        let mut best = Cost::MAX;
        for k in 0..free.len() {
            let j = free.remove(k);
            best = best.min(w[i][j] + go(w, free, skips));
            free.insert(k, j);
        }
        if skips == 1 {
            best = best.min(go(w, free, 0));
        }
        free.insert(0, i);
        best
    }
    let mut free: Vec<usize> = (0..w.len()).collect();
    go(w, &mut free, w.len() % 2)
}

/// Abstract series-parallel shape; leaves are plain edges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Shape {
    Edge,
    Series(Vec<Shape>),
    Parallel(Vec<Shape>),
}

fn compositions(n: usize, min_parts: usize) -> Vec<Vec<usize>> {
    // ordered sequences of positive sizes summing to n
    fn go(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in 1..=n {
            cur.push(k);
            go(n - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out.retain(|c| c.len() >= min_parts);
    out
}

/// Every shape with exactly `n` edges. Series children are never series,
/// parallel children are never parallel and come in canonical order, so each
/// two-terminal series-parallel multigraph appears once per ordering of its
/// series parts.
pub fn shapes(n: usize) -> Vec<Shape> {
    let mut ser: Vec<Vec<Shape>> = vec![Vec::new(); n + 1];
    let mut par: Vec<Vec<Shape>> = vec![Vec::new(); n + 1];
    for k in 2..=n {
        for comp in compositions(k, 2) {
            let non_series: Vec<Vec<Shape>> = comp
                .iter()
                .map(|&sz| {
                    if sz == 1 {
                        vec![Shape::Edge]
                    } else {
                        par[sz].clone()
                    }
                })
                .collect();
            for parts in product(&non_series, &comp, false) {
                ser[k].push(Shape::Series(parts));
            }
            if comp.windows(2).all(|w| w[0] <= w[1]) {
                let non_parallel: Vec<Vec<Shape>> = comp
                    .iter()
                    .map(|&sz| {
                        if sz == 1 {
                            vec![Shape::Edge]
                        } else {
                            ser[sz].clone()
                        }
                    })
                    .collect();
                for parts in product(&non_parallel, &comp, true) {
                    par[k].push(Shape::Parallel(parts));
                }
            }
        }
    }
    if n == 1 {
        return vec![Shape::Edge];
    }
    let mut all = ser[n].clone();
    all.extend(par[n].iter().cloned());
    all
}

/// Cartesian product of the option lists; with `canonical`, equal-size
/// neighbours must be nondecreasing.
fn product(options: &[Vec<Shape>], sizes: &[usize], canonical: bool) -> Vec<Vec<Shape>> {
    let mut acc: Vec<Vec<Shape>> = vec![Vec::new()];
    for (i, opts) in options.iter().enumerate() {
        let mut next = Vec::new();
        for prefix in &acc {
            for o in opts {
                let ok = !canonical
                    || i == 0
                    || sizes[i - 1] != sizes[i]
                    || prefix.last().is_some_and(|last| last <= o);
                if ok {
                    let mut p = prefix.clone();
                    p.push(o.clone());
                    next.push(p);
                }
            }
        }
        acc = next;
    }
    acc
}

/// Realizes a shape with fresh node ids and costs drawn from `r`.
pub fn realize(shape: &Shape, r: &mut ChaCha8Rng, cmax: Cost, dmax: Cost) -> SpTree {
    fn go(
        shape: &Shape,
        s: NodeId,
        t: NodeId,
        next: &mut NodeId,
        r: &mut ChaCha8Rng,
        cmax: Cost,
        dmax: Cost,
    ) -> SpNode {
        match shape {
            Shape::Edge => SpNode::leaf(s, t, r.gen_range(0..=cmax), r.gen_range(0..=dmax)),
            Shape::Parallel(parts) => SpNode::Parallel(
                parts
                    .iter()
                    .map(|p| go(p, s, t, next, r, cmax, dmax))
                    .collect(),
            ),
            Shape::Series(parts) => {
                let mut out = Vec::new();
                let mut at = s;
                for (i, p) in parts.iter().enumerate() {
                    let to = if i + 1 == parts.len() {
                        t
                    } else {
                        *next += 1;
                        *next - 1
                    };
                    out.push(go(p, at, to, next, r, cmax, dmax));
                    at = to;
                }
                SpNode::Series(out)
            }
        }
    }
    let mut next = 2;
    SpTree::new(go(shape, 0, 1, &mut next, r, cmax, dmax)).unwrap()
}
