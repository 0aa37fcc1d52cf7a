//! Instance generators: the PARTITION and set-cover hardness gadgets, and
//! seeded random graphs and series-parallel parse trees.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{BiGraph, Cost, NodeId, TerminalSet};
use crate::rational::Rational;
use crate::spdp::{SpNode, SpTree};

#[derive(Debug, Clone)]
pub struct PartitionGadget {
    pub tree: SpTree,
    /// Half the total, possibly fractional.
    pub half: Rational,
}

/// A chain of parallel pairs: item `t` between nodes `i` and `i+1` becomes
/// an edge with `(c, d) = (t, 0)` and one with `(0, t)`. A spanning tree
/// picks one edge per pair, so its c-cost and d-diameter split the items.
pub fn partition_gadget(items: &[Cost]) -> Result<PartitionGadget> {
    if items.is_empty() {
        return Err(Error::InvalidParameter(
            "PARTITION instance is empty".into(),
        ));
    }
    if items.contains(&0) {
        return Err(Error::InvalidParameter(
            "PARTITION items must be positive".into(),
        ));
    }
    let total = items
        .iter()
        .try_fold(0u128, |acc, &t| acc.checked_add(t as u128))
        .ok_or(Error::Overflow)?;
    let pairs = items
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            SpNode::Parallel(vec![
                SpNode::leaf(i, i + 1, t, 0),
                SpNode::leaf(i, i + 1, 0, t),
            ])
        })
        .collect::<Vec<_>>();
    let root = if pairs.len() == 1 {
        pairs.into_iter().next().unwrap()
    } else {
        SpNode::Series(pairs)
    };
    Ok(PartitionGadget {
        tree: SpTree::new(root)?,
        half: Rational::new(total, 2),
    })
}

#[derive(Debug, Clone)]
pub struct SetCoverGadget {
    pub graph: BiGraph,
    pub terminals: TerminalSet,
    pub enforcer: NodeId,
    /// Node of each set, in input order.
    pub set_nodes: Vec<NodeId>,
    /// Trees within this diameter correspond to covers of equal cost.
    pub diameter_bound: Cost,
}

/// Elements are nodes `0..k`, sets follow, then the enforcer and the two
/// nodes of the path hanging off it. Pairs the construction would price as
/// infinite are simply left out.
pub fn setcover_gadget(elements: usize, sets: &[(Vec<usize>, Cost)]) -> Result<SetCoverGadget> {
    if elements == 0 || sets.is_empty() {
        return Err(Error::InvalidParameter(
            "set cover instance is empty".into(),
        ));
    }
    let mut covered = vec![false; elements];
    for (members, _) in sets {
        for &t in members {
            *covered.get_mut(t).ok_or_else(|| {
                Error::InvalidParameter(format!("set element {t} is outside 0..{elements}"))
            })? = true;
        }
    }
    if let Some(t) = covered.iter().position(|&c| !c) {
        return Err(Error::Infeasible(format!(
            "element {t} is in no set, so no diameter-4 Steiner tree exists"
        )));
    }
    let m = sets.len();
    let enforcer = elements + m;
    let (p1, p2) = (enforcer + 1, enforcer + 2);
    let mut edges = Vec::new();
    for (j, (members, cost)) in sets.iter().enumerate() {
        edges.push((enforcer, elements + j, *cost, 1));
        let mut members = members.clone();
        members.sort_unstable();
        members.dedup();
        for t in members {
            edges.push((t, elements + j, 0, 1));
        }
    }
    edges.push((enforcer, p1, 0, 1));
    edges.push((p1, p2, 0, 1));
    let graph = BiGraph::from_tuples(p2 + 1, &edges)?;
    let terminals = TerminalSet::new(&graph, (0..elements).chain([enforcer, p1, p2]))?;
    Ok(SetCoverGadget {
        graph,
        terminals,
        enforcer,
        set_nodes: (elements..elements + m).collect(),
        diameter_bound: 4,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSpec {
    pub nodes: usize,
    pub edges: usize,
    pub c: RangeInclusive<Cost>,
    pub d: RangeInclusive<Cost>,
    pub seed: u64,
}

/// Connected multigraph: a random spanning tree plus random extra edges
/// (parallel edges allowed). Same spec, same graph.
pub fn random_graph(spec: &RandomSpec) -> Result<BiGraph> {
    let n = spec.nodes;
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one node".into()));
    }
    if spec.edges + 1 < n {
        return Err(Error::InvalidParameter(format!(
            "{} edges cannot connect {n} nodes",
            spec.edges
        )));
    }
    if n == 1 && spec.edges > 0 {
        return Err(Error::InvalidParameter(
            "a single node admits no edges".into(),
        ));
    }
    if spec.c.is_empty() || spec.d.is_empty() {
        return Err(Error::InvalidParameter("empty cost range".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut order: Vec<NodeId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut edges = Vec::with_capacity(spec.edges);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        edges.push((parent, order[i]));
    }
    while edges.len() < spec.edges {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.push((u, v));
        }
    }
    let tuples: Vec<_> = edges
        .into_iter()
        .map(|(u, v)| {
            (
                u,
                v,
                rng.gen_range(spec.c.clone()),
                rng.gen_range(spec.d.clone()),
            )
        })
        .collect();
    BiGraph::from_tuples(n, &tuples)
}

/// Random series-parallel parse tree with `edges` leaves, grown from one
/// edge by repeatedly splitting a random leaf in series or in parallel.
pub fn random_sp(
    edges: usize,
    c: RangeInclusive<Cost>,
    d: RangeInclusive<Cost>,
    seed: u64,
) -> Result<SpTree> {
    if edges == 0 {
        return Err(Error::InvalidParameter("need at least one edge".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut root = SpNode::leaf(0, 1, 0, 0);
    let mut next_node = 2;
    for leaves in 1..edges {
        let pick = rng.gen_range(0..leaves);
        let series = rng.gen_bool(0.5);
        split(&mut root, pick, series, &mut next_node);
    }
    assign_costs(&mut root, &mut rng, &c, &d);
    SpTree::new(root)
}

fn split(node: &mut SpNode, mut pick: usize, series: bool, next_node: &mut NodeId) -> usize {
    match node {
        SpNode::Leaf { u, v, .. } => {
            if pick == 0 {
                let (u, v) = (*u, *v);
                *node = if series {
                    let w = *next_node;
                    *next_node += 1;
                    SpNode::Series(vec![SpNode::leaf(u, w, 0, 0), SpNode::leaf(w, v, 0, 0)])
                } else {
                    SpNode::Parallel(vec![SpNode::leaf(u, v, 0, 0), SpNode::leaf(u, v, 0, 0)])
                };
                usize::MAX
            } else {
                pick - 1
            }
        }
        SpNode::Series(parts) | SpNode::Parallel(parts) => {
            for p in parts {
                pick = split(p, pick, series, next_node);
                if pick == usize::MAX {
                    break;
                }
            }
            pick
        }
    }
}

fn assign_costs(
    node: &mut SpNode,
    rng: &mut ChaCha8Rng,
    c: &RangeInclusive<Cost>,
    d: &RangeInclusive<Cost>,
) {
    match node {
        SpNode::Leaf { c: lc, d: ld, .. } => {
            *lc = rng.gen_range(c.clone());
            *ld = rng.gen_range(d.clone());
        }
        SpNode::Series(parts) | SpNode::Parallel(parts) => {
            parts.iter_mut().for_each(|p| assign_costs(p, rng, c, d))
        }
    }
}
