//! Series-parallel graphs: parse trees, an exact table DP for spanning trees
//! under a diameter bound (or a cost budget), the rounding test and the
//! approximation scheme built on it.
//!
//! A subtree with terminals `s`, `t` is summarized by spanning forests in
//! which every vertex hangs off `s` or off `t`. A forest is keyed by whether
//! `s` and `t` share a tree, the eccentricities of `s` and `t` inside their
//! trees and (when shared) their distance. Per key the table keeps the Pareto
//! front of (c spent, internal diameter).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{evaluate_tree, BiGraph, Cost, CostKind, EdgeId, NodeId, TreeSolution};
use crate::rational::{inverse_integer, positive, to_big, BigRational, Rational};
use crate::uni::rsp::{floor_usize, round_costs};

/// A series-parallel composition. `Series` identifies each part's sink with
/// the next part's source; `Parallel` identifies all sources and all sinks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SpNode {
    Leaf {
        u: NodeId,
        v: NodeId,
        c: Cost,
        d: Cost,
    },
    Series(Vec<SpNode>),
    Parallel(Vec<SpNode>),
}

impl SpNode {
    pub fn leaf(u: NodeId, v: NodeId, c: Cost, d: Cost) -> Self {
        SpNode::Leaf { u, v, c, d }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            SpNode::Leaf { .. } => 1,
            SpNode::Series(parts) | SpNode::Parallel(parts) => {
                parts.iter().map(SpNode::leaf_count).sum()
            }
        }
    }

    fn leaves<'a>(&'a self, out: &mut Vec<&'a SpNode>) {
        match self {
            SpNode::Leaf { .. } => out.push(self),
            SpNode::Series(parts) | SpNode::Parallel(parts) => {
                parts.iter().for_each(|p| p.leaves(out))
            }
        }
    }
}

impl fmt::Display for SpNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, parts) = match self {
            SpNode::Leaf { u, v, c, d } => return write!(f, "E({u},{v},{c},{d})"),
            SpNode::Series(parts) => ('S', parts),
            SpNode::Parallel(parts) => ('P', parts),
        };
        write!(f, "{tag}(")?;
        for (i, p) in parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// Binary form used by the DP; leaves carry edge ids.
#[derive(Debug, Clone)]
enum Bin {
    Leaf(EdgeId),
    Series(Box<Bin>, Box<Bin>),
    Parallel(Box<Bin>, Box<Bin>),
}

/// A validated parse tree together with the graph it denotes. Edge ids
/// follow the left-to-right order of the leaves.
#[derive(Debug, Clone)]
pub struct SpTree {
    root: SpNode,
    bin: Bin,
    graph: BiGraph,
    source: NodeId,
    sink: NodeId,
}

struct Shape {
    s: NodeId,
    t: NodeId,
    nodes: BTreeSet<NodeId>,
    bin: Bin,
}

impl SpTree {
    pub fn new(root: SpNode) -> Result<Self> {
        let mut next_edge = 0;
        let shape = check(&root, &mut next_edge)?;
        let n = shape.nodes.iter().next_back().map_or(0, |&m| m + 1);
        if shape.nodes.len() != n {
            return Err(Error::InvalidParameter(format!(
                "node ids must be contiguous from 0, got {:?}",
                shape.nodes
            )));
        }
        let mut leaves = Vec::new();
        root.leaves(&mut leaves);
        let tuples: Vec<_> = leaves
            .iter()
            .map(|l| match **l {
                SpNode::Leaf { u, v, c, d } => (u, v, c, d),
                _ => unreachable!(),
            })
            .collect();
        let graph = BiGraph::from_tuples(n, &tuples)?;
        Ok(SpTree {
            root,
            bin: shape.bin,
            graph,
            source: shape.s,
            sink: shape.t,
        })
    }

    pub fn root(&self) -> &SpNode {
        &self.root
    }

    pub fn graph(&self) -> &BiGraph {
        &self.graph
    }

    pub fn terminals(&self) -> (NodeId, NodeId) {
        (self.source, self.sink)
    }
}

impl fmt::Display for SpTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

fn check(node: &SpNode, next_edge: &mut EdgeId) -> Result<Shape> {
    match node {
        SpNode::Leaf { u, v, .. } => {
            if u == v {
                return Err(invalid(format!("leaf E({u},{v},..) is a self-loop")));
            }
            let id = *next_edge;
            *next_edge += 1;
            Ok(Shape {
                s: *u,
                t: *v,
                nodes: BTreeSet::from([*u, *v]),
                bin: Bin::Leaf(id),
            })
        }
        SpNode::Series(parts) | SpNode::Parallel(parts) => {
            let series = matches!(node, SpNode::Series(_));
            let mut shapes = parts.iter().map(|p| check(p, next_edge));
            let mut acc = shapes
                .next()
                .ok_or_else(|| invalid("empty composition".into()))??;
            for next in shapes {
                let next = next?;
                let shared: BTreeSet<NodeId> =
                    acc.nodes.intersection(&next.nodes).copied().collect();
                if series {
                    if acc.t != next.s {
                        return Err(invalid(format!(
                            "series parts do not meet: sink {} vs source {}",
                            acc.t, next.s
                        )));
                    }
                    if acc.s == next.t || shared != BTreeSet::from([acc.t]) {
                        return Err(invalid(format!(
                            "series parts share more than the join node {}",
                            acc.t
                        )));
                    }
                } else {
                    if (acc.s, acc.t) != (next.s, next.t) {
                        return Err(invalid(format!(
                            "parallel parts have terminals ({},{}) and ({},{})",
                            acc.s, acc.t, next.s, next.t
                        )));
                    }
                    if shared != BTreeSet::from([acc.s, acc.t]) {
                        return Err(invalid("parallel parts share an inner node".into()));
                    }
                }
                let t = if series { next.t } else { acc.t };
                let bin = if series {
                    Bin::Series(Box::new(acc.bin), Box::new(next.bin))
                } else {
                    Bin::Parallel(Box::new(acc.bin), Box::new(next.bin))
                };
                let mut nodes = acc.nodes;
                nodes.extend(next.nodes);
                acc = Shape {
                    s: acc.s,
                    t,
                    nodes,
                    bin,
                };
            }
            Ok(acc)
        }
    }
}

/// Parses `E(u,v,c,d)` / `edge(u,v,c=..,d=..)` leaves and `S(..)` / `P(..)`
/// compositions of one or more parts.
pub fn parse_sp(text: &str) -> Result<SpTree> {
    let mut p = Parser { text, pos: 0 };
    let root = p.node()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("trailing input"));
    }
    SpTree::new(root)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        let line = self.text[..self.pos].matches('\n').count() + 1;
        Error::parse(line, format!("{msg} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn word(&mut self) -> &str {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn number(&mut self) -> Result<u64> {
        let w = self.word().to_string();
        w.parse()
            .map_err(|_| self.error(&format!("expected a number, got '{w}'")))
    }

    fn node(&mut self) -> Result<SpNode> {
        let tag = self.word().to_string();
        self.eat('(')?;
        match tag.as_str() {
            "E" | "edge" => self.leaf_args(),
            "S" | "P" => {
                let mut parts = vec![self.node()?];
                loop {
                    self.skip_ws();
                    if self.text[self.pos..].starts_with(')') {
                        self.pos += 1;
                        break;
                    }
                    self.eat(',')?;
                    parts.push(self.node()?);
                }
                Ok(match (tag.as_str(), parts.len()) {
                    (_, 1) => parts.pop().unwrap(),
                    ("S", _) => SpNode::Series(parts),
                    _ => SpNode::Parallel(parts),
                })
            }
            other => Err(self.error(&format!("unknown tag '{other}'"))),
        }
    }

    fn leaf_args(&mut self) -> Result<SpNode> {
        let u = self.number()? as NodeId;
        self.eat(',')?;
        let v = self.number()? as NodeId;
        let (mut c, mut d) = (None, None);
        for slot in 0..2 {
            self.eat(',')?;
            let save = self.pos;
            let name = self.word().to_string();
            self.skip_ws();
            let named = self.text[self.pos..].starts_with('=');
            if named {
                self.pos += 1;
            } else {
                self.pos = save;
            }
            let value = self.number()?;
            let target = match (named, name.as_str(), slot) {
                (true, "c", _) | (false, _, 0) => &mut c,
                (true, "d", _) | (false, _, _) => &mut d,
                (true, other, _) => return Err(self.error(&format!("unknown cost '{other}'"))),
            };
            if target.replace(value).is_some() {
                return Err(self.error("cost given twice"));
            }
        }
        self.eat(')')?;
        Ok(SpNode::leaf(u, v, c.unwrap(), d.unwrap()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    together: bool,
    es: Cost,
    et: Cost,
    /// Terminal distance; zero when separate.
    dst: Cost,
}

#[derive(Debug, Clone, Copy)]
enum Origin {
    Include,
    Exclude,
    /// Table index, key index and point index of each child.
    Pair {
        left: (usize, usize, usize),
        right: (usize, usize, usize),
    },
}

#[derive(Debug, Clone, Copy)]
struct Point {
    spent: Cost,
    diam: Cost,
    origin: Origin,
}

/// Per key, points sorted by `spent` ascending with `diam` strictly
/// descending.
type Table = Vec<(Key, Vec<Point>)>;

#[derive(Debug, Clone, Copy)]
struct Limits {
    spent_cap: Option<Cost>,
    diam_cap: Option<Cost>,
    /// When false the stored diameter is zero; `diam_cap` still filters.
    track_diam: bool,
}

fn combine(series: bool, a: Key, b: Key) -> Option<(Key, Cost)> {
    let key;
    let cross;
    if series {
        // a: s..j, b: j..t
        let joined = a.et + b.es;
        match (a.together, b.together) {
            (true, true) => {
                key = Key {
                    together: true,
                    es: a.es.max(a.dst + b.es),
                    et: b.et.max(b.dst + a.et),
                    dst: a.dst + b.dst,
                };
            }
            (true, false) => {
                key = Key {
                    together: false,
                    es: a.es.max(a.dst + b.es),
                    et: b.et,
                    dst: 0,
                };
            }
            (false, true) => {
                key = Key {
                    together: false,
                    es: a.es,
                    et: b.et.max(b.dst + a.et),
                    dst: 0,
                };
            }
            (false, false) => return None,
        }
        cross = joined;
    } else {
        let base = (a.es + b.es).max(a.et + b.et);
        match (a.together, b.together) {
            (true, true) => return None,
            (false, false) => {
                key = Key {
                    together: false,
                    es: a.es.max(b.es),
                    et: a.et.max(b.et),
                    dst: 0,
                };
                cross = base;
            }
            (true, false) | (false, true) => {
                let (j, sep) = if a.together { (a, b) } else { (b, a) };
                key = Key {
                    together: true,
                    es: j.es.max(sep.es).max(j.dst + sep.et),
                    et: j.et.max(sep.et).max(j.dst + sep.es),
                    dst: j.dst,
                };
                cross = base.max(sep.es + j.dst + sep.et);
            }
        }
    }
    Some((key, cross))
}

fn prune(cands: BTreeMap<Key, Vec<Point>>) -> Table {
    cands
        .into_iter()
        .filter_map(|(key, mut pts)| {
            pts.sort_by_key(|p| (p.spent, p.diam));
            let mut front: Vec<Point> = Vec::new();
            for p in pts {
                if front.last().is_none_or(|last| p.diam < last.diam) {
                    front.push(p);
                }
            }
            (!front.is_empty()).then_some((key, front))
        })
        .collect()
}

struct Dp<'a> {
    graph: &'a BiGraph,
    spent_of: Vec<Cost>,
    limits: Limits,
    /// Tables in post-order; children precede parents.
    tables: Vec<Table>,
}

impl Dp<'_> {
    fn run(&mut self, node: &Bin) -> Result<usize> {
        let table = match node {
            Bin::Leaf(id) => {
                let e = &self.graph.edges()[*id];
                let mut cands = BTreeMap::new();
                cands.insert(
                    Key {
                        together: false,
                        es: 0,
                        et: 0,
                        dst: 0,
                    },
                    vec![Point {
                        spent: 0,
                        diam: 0,
                        origin: Origin::Exclude,
                    }],
                );
                let spent = self.spent_of[*id];
                let fits = self.limits.spent_cap.is_none_or(|cap| spent <= cap)
                    && self.limits.diam_cap.is_none_or(|cap| e.d <= cap);
                if fits {
                    cands.insert(
                        Key {
                            together: true,
                            es: e.d,
                            et: e.d,
                            dst: e.d,
                        },
                        vec![Point {
                            spent,
                            diam: if self.limits.track_diam { e.d } else { 0 },
                            origin: Origin::Include,
                        }],
                    );
                }
                prune(cands)
            }
            Bin::Series(l, r) | Bin::Parallel(l, r) => {
                let series = matches!(node, Bin::Series(..));
                let li = self.run(l)?;
                let ri = self.run(r)?;
                let (lt, rt) = (&self.tables[li], &self.tables[ri]);
                let mut cands: BTreeMap<Key, Vec<Point>> = BTreeMap::new();
                for (ki, (ka, pa)) in lt.iter().enumerate() {
                    for (kj, (kb, pb)) in rt.iter().enumerate() {
                        let Some((key, cross)) = combine(series, *ka, *kb) else {
                            continue;
                        };
                        if self.limits.diam_cap.is_some_and(|cap| cross > cap) {
                            continue;
                        }
                        for (pi, x) in pa.iter().enumerate() {
                            for (pj, y) in pb.iter().enumerate() {
                                let spent = x.spent.checked_add(y.spent).ok_or(Error::Overflow)?;
                                if self.limits.spent_cap.is_some_and(|cap| spent > cap) {
                                    break;
                                }
                                let mut diam = x.diam.max(y.diam).max(cross);
                                if self.limits.diam_cap.is_some_and(|cap| diam > cap) {
                                    continue;
                                }
                                if !self.limits.track_diam {
                                    diam = 0;
                                }
                                cands.entry(key).or_default().push(Point {
                                    spent,
                                    diam,
                                    origin: Origin::Pair {
                                        left: (li, ki, pi),
                                        right: (ri, kj, pj),
                                    },
                                });
                            }
                        }
                    }
                }
                prune(cands)
            }
        };
        self.tables.push(table);
        Ok(self.tables.len() - 1)
    }

    fn collect(&self, table: usize, at: (usize, usize), leaf: &Bin, out: &mut BTreeSet<EdgeId>) {
        let point = &self.tables[table][at.0].1[at.1];
        match (point.origin, leaf) {
            (Origin::Include, Bin::Leaf(id)) => {
                out.insert(*id);
            }
            (Origin::Exclude, Bin::Leaf(_)) => {}
            (Origin::Pair { left, right }, Bin::Series(l, r) | Bin::Parallel(l, r)) => {
                self.collect(left.0, (left.1, left.2), l, out);
                self.collect(right.0, (right.1, right.2), r, out);
            }
            _ => unreachable!("origin does not match parse tree"),
        }
    }
}

/// Root entries whose forest is a single spanning tree.
struct Solved<'a> {
    dp: Dp<'a>,
    root: usize,
}

impl Solved<'_> {
    fn spanning(&self) -> impl Iterator<Item = (usize, &Key, &Vec<Point>)> {
        self.dp.tables[self.root]
            .iter()
            .enumerate()
            .filter(|(_, (k, _))| k.together)
            .map(|(i, (k, p))| (i, k, p))
    }

    fn witness(&self, bin: &Bin, at: (usize, usize)) -> Result<TreeSolution> {
        let mut ids = BTreeSet::new();
        self.dp.collect(self.root, at, bin, &mut ids);
        evaluate_tree(self.dp.graph, ids)
    }
}

fn solve(sp: &SpTree, spent_of: Vec<Cost>, limits: Limits) -> Result<Solved<'_>> {
    let mut dp = Dp {
        graph: &sp.graph,
        spent_of,
        limits,
        tables: Vec::new(),
    };
    let root = dp.run(&sp.bin)?;
    Ok(Solved { dp, root })
}

fn true_costs(graph: &BiGraph) -> Vec<Cost> {
    graph.edges().iter().map(|e| e.c).collect()
}

/// Exact minimum c-cost spanning tree whose d-diameter is at most `bound`.
pub fn dp_min_cost_given_diameter(sp: &SpTree, bound: Cost) -> Result<TreeSolution> {
    let costs = true_costs(&sp.graph);
    let solved = solve(
        sp,
        costs,
        Limits {
            spent_cap: None,
            diam_cap: Some(bound),
            track_diam: false,
        },
    )?;
    let best = solved
        .spanning()
        .map(|(i, _, pts)| (pts[0].spent, i))
        .min()
        .ok_or_else(|| Error::Infeasible(format!("no spanning tree of diameter <= {bound}")))?;
    solved.witness(&sp.bin, (best.1, 0))
}

/// Exact minimum d-diameter spanning tree whose c-cost is at most `budget`.
pub fn dp_min_diameter_given_cost(sp: &SpTree, budget: Cost) -> Result<TreeSolution> {
    let costs = true_costs(&sp.graph);
    let solved = solve(
        sp,
        costs,
        Limits {
            spent_cap: Some(budget),
            diam_cap: None,
            track_diam: true,
        },
    )?;
    let best = best_diameter_within(&solved, budget)
        .ok_or_else(|| Error::Infeasible(format!("no spanning tree of c-cost <= {budget}")))?;
    solved.witness(&sp.bin, best.1)
}

/// Least diameter over root spanning entries with spent at most `budget`,
/// with its location. Ties go to the smaller spend, then the smaller key.
fn best_diameter_within(solved: &Solved<'_>, budget: Cost) -> Option<(Cost, (usize, usize))> {
    solved
        .spanning()
        .filter_map(|(i, _, pts)| {
            // fronts have diam descending, so the last affordable point is best
            let j = pts.partition_point(|p| p.spent <= budget).checked_sub(1)?;
            Some(((pts[j].diam, pts[j].spent, i), (i, j)))
        })
        .min()
        .map(|(k, at)| (k.0, at))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TestOutcome {
    Low,
    High,
}

/// Budget cap `⌊(n−1)·factor/ε⌋` for the rounded costs.
fn rounded_cap(steps: usize, factor: usize, eps: &BigRational) -> usize {
    floor_usize(&(BigRational::from_integer((steps * factor).into()) / eps))
}

fn rounded_table<'a>(
    sp: &'a SpTree,
    theta: &BigRational,
    cap: usize,
    bound: Cost,
) -> Result<Solved<'a>> {
    let steps = sp.graph.node_count() - 1;
    let costs = round_costs(sp.graph.edges().iter().map(|e| e.c), steps, theta, cap)
        .into_iter()
        .map(|x| x as Cost)
        .collect();
    solve(
        sp,
        costs,
        Limits {
            spent_cap: Some(cap as Cost),
            diam_cap: Some(bound),
            track_diam: true,
        },
    )
}

/// Rounds c to `⌊c·(n−1)/(λε)⌋` and reports LOW iff some spanning tree has
/// rounded cost at most `(n−1)/ε` and d-diameter at most `bound`.
pub fn test_procedure(
    sp: &SpTree,
    bound: Cost,
    lambda: Rational,
    eps: Rational,
) -> Result<TestOutcome> {
    let lambda = positive("lambda", lambda)?;
    inverse_integer(eps)?;
    test_big(sp, bound, &to_big(lambda), &to_big(eps))
}

fn test_big(
    sp: &SpTree,
    bound: Cost,
    lambda: &BigRational,
    eps: &BigRational,
) -> Result<TestOutcome> {
    let steps = sp.graph.node_count() - 1;
    let cap = rounded_cap(steps, 1, eps);
    let solved = rounded_table(sp, &(lambda * eps), cap, bound)?;
    Ok(if solved.spanning().next().is_some() {
        TestOutcome::Low
    } else {
        TestOutcome::High
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FpasOutcome {
    pub tree: TreeSolution,
    /// Final bracket; `lower` scales the last sweep.
    #[serde(serialize_with = "crate::rational::serialize")]
    pub lower: Rational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub upper: Rational,
    pub tests: usize,
}

fn small(x: &BigRational) -> Rational {
    use num_traits::ToPrimitive;
    let n = x.numer().to_u128();
    let d = x.denom().to_u128();
    match (n, d) {
        (Some(n), Some(d)) => Rational::new(n, d),
        _ => Rational::from_integer(u128::MAX),
    }
}

/// Spanning tree with d-diameter at most `bound` and c-cost at most
/// `(1+ε)` times the optimum. `1/ε` must be an integer.
pub fn fpas_dcst(sp: &SpTree, bound: Cost, eps: Rational) -> Result<FpasOutcome> {
    inverse_integer(eps)?;
    let infeasible = || Error::Infeasible(format!("no spanning tree of diameter <= {bound}"));
    let free = solve(
        sp,
        true_costs(&sp.graph),
        Limits {
            spent_cap: Some(0),
            diam_cap: Some(bound),
            track_diam: true,
        },
    )?;
    if let Some((_, at)) = best_diameter_within(&free, 0) {
        return Ok(FpasOutcome {
            tree: free.witness(&sp.bin, at)?,
            lower: Rational::from_integer(0),
            upper: Rational::from_integer(0),
            tests: 0,
        });
    }

    let eps_big = to_big(eps);
    let search_eps = to_big(eps.min(Rational::new(1, 4)));
    let two = BigRational::from_integer(2u32.into());
    let mut lb = BigRational::one();
    let mut ub = BigRational::from_integer(sp.graph.total(CostKind::C)?.into());
    let mut tests = 0;
    while ub >= &two * &lb {
        let lambda = (&lb + &ub) / &two;
        tests += 1;
        match test_big(sp, bound, &lambda, &search_eps)? {
            TestOutcome::High => lb = lambda,
            TestOutcome::Low => ub = lambda * (BigRational::one() + &search_eps),
        }
    }

    let steps = sp.graph.node_count() - 1;
    let cap = rounded_cap(steps, 2, &eps_big);
    let solved = rounded_table(sp, &(&lb * &eps_big), cap, bound)?;
    let mut best: Option<TreeSolution> = None;
    let mut seen = BTreeSet::new();
    for budget in 0..=cap as Cost {
        let Some((_, at)) = best_diameter_within(&solved, budget) else {
            continue;
        };
        if !seen.insert(at) {
            continue;
        }
        let tree = solved.witness(&sp.bin, at)?;
        if best.as_ref().is_none_or(|b| tree.total_c < b.total_c) {
            best = Some(tree);
        }
    }
    Ok(FpasOutcome {
        tree: best.ok_or_else(infeasible)?,
        lower: small(&lb),
        upper: small(&ub),
        tests,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn gadget_123() -> SpTree {
        parse_sp("S(P(E(0,1,1,0),E(0,1,0,1)),P(E(1,2,2,0),E(1,2,0,2)),P(E(2,3,3,0),E(2,3,0,3)))")
            .unwrap()
    }

    #[test]
    fn parse_single_leaf_both_syntaxes() {
        let a = parse_sp("edge(0,1,c=1,d=1)").unwrap();
        let b = parse_sp("E(0, 1, 1, 1)").unwrap();
        assert_eq!(a.root(), b.root());
        assert_eq!(a.graph().edge_count(), 1);
        let named = parse_sp("edge(0,1,d=7,c=2)").unwrap();
        assert_eq!(
            (named.graph().edges()[0].c, named.graph().edges()[0].d),
            (2, 7)
        );
    }

    #[test]
    fn parallel_gives_multigraph() {
        let sp = parse_sp("P(E(0,1,1,2),E(0,1,3,4))").unwrap();
        assert_eq!(sp.graph().node_count(), 2);
        assert_eq!(sp.graph().edge_count(), 2);
    }

    #[test]
    fn round_trip() {
        let sp = gadget_123();
        let again = parse_sp(&sp.to_string()).unwrap();
        assert_eq!(sp.root(), again.root());
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            "",
            "E(0,1,1)",
            "S(E(0,1,1,1),E(2,3,1,1))",
            "P(E(0,1,1,1),E(1,2,1,1))",
            "E(0,0,1,1)",
            "S(E(0,1,1,1),E(1,0,1,1))",
            "E(0,2,1,1)",
            "X(E(0,1,1,1))",
            "E(0,1,1,1) tail",
            "P(S(E(0,1,1,1),E(1,2,1,1)),S(E(0,1,1,1),E(1,2,1,1)))",
        ] {
            assert!(parse_sp(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn partition_gadget_min_cost() {
        let sp = gadget_123();
        let t = dp_min_cost_given_diameter(&sp, 3).unwrap();
        assert_eq!((t.total_c, t.diameter_d), (3, 3));
        assert_eq!(dp_min_diameter_given_cost(&sp, 3).unwrap().diameter_d, 3);
    }

    #[test]
    fn odd_partition_is_infeasible() {
        let sp = parse_sp(
            "S(P(E(0,1,1,0),E(0,1,0,1)),P(E(1,2,1,0),E(1,2,0,1)),P(E(2,3,1,0),E(2,3,0,1)))",
        )
        .unwrap();
        let t = dp_min_cost_given_diameter(&sp, 1).unwrap();
        assert!(t.total_c > 1);
    }

    #[test]
    fn single_edge_bounds() {
        let sp = parse_sp("E(0,1,4,6)").unwrap();
        assert_eq!(dp_min_cost_given_diameter(&sp, 6).unwrap().total_c, 4);
        assert!(dp_min_cost_given_diameter(&sp, 5)
            .unwrap_err()
            .is_infeasible());
        assert_eq!(dp_min_diameter_given_cost(&sp, 4).unwrap().diameter_d, 6);
        assert!(dp_min_diameter_given_cost(&sp, 3).is_err());
    }

    #[test]
    fn fpas_on_gadget() {
        let sp = gadget_123();
        let out = fpas_dcst(&sp, 3, int(1)).unwrap();
        assert!(out.tree.diameter_d <= 3);
        assert!((3..=6).contains(&out.tree.total_c));
        assert!(fpas_dcst(&sp, 3, ratio(2, 3)).is_err());
    }

    #[test]
    fn test_procedure_sides() {
        let sp = gadget_123();
        // optimum at D = 3 is 3
        assert_eq!(
            test_procedure(&sp, 3, int(3), int(1)).unwrap(),
            TestOutcome::Low
        );
        assert_eq!(
            test_procedure(&sp, 3, int(1), int(1)).unwrap(),
            TestOutcome::High
        );
    }
}
