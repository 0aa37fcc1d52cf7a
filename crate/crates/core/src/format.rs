//! Edge-list instance format.
//!
//! ```text
//! # comment
//! nodes 4 edges 3 terminals 0,3
//! 0 1 2 1
//! 1 2 2 1
//! 2 3 2 1
//! ```
//!
//! Each edge line is `u v c d`; edge ids follow line order. `terminals *`
//! selects every node.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{BiGraph, EdgeSpec, TerminalSet, TreeSolution};

#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: BiGraph,
    pub terminals: TerminalSet,
}

fn field<T: std::str::FromStr>(line: usize, word: Option<&str>, what: &str) -> Result<T> {
    let word = word.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    word.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} '{word}'")))
}

fn expect<'a>(words: &mut impl Iterator<Item = &'a str>, line: usize, key: &str) -> Result<()> {
    match words.next() {
        Some(w) if w == key => Ok(()),
        other => Err(Error::parse(
            line,
            format!("expected '{key}', got '{}'", other.unwrap_or("")),
        )),
    }
}

pub fn read_instance(text: &str) -> Result<Instance> {
    let mut header: Option<(usize, usize, Option<Vec<usize>>)> = None;
    let mut specs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut words = body.split_whitespace();
        if header.is_none() {
            expect(&mut words, line, "nodes")?;
            let n: usize = field(line, words.next(), "node count")?;
            expect(&mut words, line, "edges")?;
            let m: usize = field(line, words.next(), "edge count")?;
            expect(&mut words, line, "terminals")?;
            let list = words
                .next()
                .ok_or_else(|| Error::parse(line, "missing terminal list"))?;
            let terminals = if list == "*" {
                None
            } else {
                Some(
                    list.split(',')
                        .map(|t| field(line, Some(t.trim()), "terminal"))
                        .collect::<Result<Vec<usize>>>()?,
                )
            };
            if words.next().is_some() {
                return Err(Error::parse(line, "unexpected text after terminal list"));
            }
            header = Some((n, m, terminals));
            continue;
        }
        let u = field(line, words.next(), "endpoint u")?;
        let v = field(line, words.next(), "endpoint v")?;
        let c = field(line, words.next(), "cost c")?;
        let d = field(line, words.next(), "cost d")?;
        if words.next().is_some() {
            return Err(Error::parse(line, "expected exactly 'u v c d'"));
        }
        specs.push(EdgeSpec::new(u, v, c, d));
    }
    let (n, m, terminals) = header.ok_or_else(|| Error::parse(1, "missing header line"))?;
    if specs.len() != m {
        return Err(Error::parse(
            text.lines().count().max(1),
            format!("header declares {m} edges, found {}", specs.len()),
        ));
    }
    let graph = BiGraph::new(n, &specs)?;
    let terminals = match terminals {
        None => TerminalSet::all(&graph),
        Some(list) => TerminalSet::new(&graph, list)?,
    };
    Ok(Instance { graph, terminals })
}

fn terminal_list(graph: &BiGraph, terminals: &TerminalSet) -> String {
    if terminals.is_spanning(graph) {
        "*".into()
    } else {
        terminals
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub fn write_instance(graph: &BiGraph, terminals: &TerminalSet) -> String {
    let mut out = format!(
        "nodes {} edges {} terminals {}\n",
        graph.node_count(),
        graph.edge_count(),
        terminal_list(graph, terminals)
    );
    for e in graph.edges() {
        let _ = writeln!(out, "{} {} {} {}", e.u, e.v, e.c, e.d);
    }
    out
}

/// The tree as an instance over the same nodes and terminals. A comment line
/// records the original edge ids.
pub fn write_witness(graph: &BiGraph, terminals: &TerminalSet, tree: &TreeSolution) -> String {
    let ids: Vec<String> = tree.edge_ids.iter().map(|id| id.to_string()).collect();
    let mut out = format!(
        "# edge ids: {}\n# total_c {} diameter_d {}\nnodes {} edges {} terminals {}\n",
        ids.join(" "),
        tree.total_c,
        tree.diameter_d,
        graph.node_count(),
        tree.edge_ids.len(),
        terminal_list(graph, terminals)
    );
    for &id in &tree.edge_ids {
        let e = &graph.edges()[id];
        let _ = writeln!(out, "{} {} {} {}", e.u, e.v, e.c, e.d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::evaluate_tree;

    const PATH: &str =
        "# a path\nnodes 4 edges 3 terminals 0,3\n0 1 2 1\n1 2 2 1 # middle\n\n2 3 2 1\n";

    #[test]
    fn reads_and_round_trips() {
        let inst = read_instance(PATH).unwrap();
        assert_eq!(inst.graph.edge_count(), 3);
        assert_eq!(inst.terminals.iter().collect::<Vec<_>>(), vec![0, 3]);
        let again = read_instance(&write_instance(&inst.graph, &inst.terminals)).unwrap();
        assert_eq!(again.graph, inst.graph);
    }

    #[test]
    fn star_means_all_nodes() {
        let inst = read_instance("nodes 2 edges 1 terminals *\n0 1 1 1\n").unwrap();
        assert!(inst.terminals.is_spanning(&inst.graph));
    }

    #[test]
    fn witness_reproduces_metrics() {
        let inst = read_instance(PATH).unwrap();
        let tree = evaluate_tree(&inst.graph, [0, 1, 2]).unwrap();
        let w = read_instance(&write_witness(&inst.graph, &inst.terminals, &tree)).unwrap();
        let again = evaluate_tree(&w.graph, 0..w.graph.edge_count()).unwrap();
        assert_eq!(
            (again.total_c, again.diameter_d),
            (tree.total_c, tree.diameter_d)
        );
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "",
            "nodes 2 edges 1\n0 1 1 1\n",
            "nodes 2 edges 2 terminals *\n0 1 1 1\n",
            "nodes 2 edges 1 terminals *\n0 1 1\n",
            "nodes 2 edges 1 terminals *\n0 1 x 1\n",
            "nodes 2 edges 1 terminals *\n0 0 1 1\n",
            "nodes 2 edges 1 terminals 5\n0 1 1 1\n",
            "nodes 2 edges 1 terminals *\n0 1 -1 1\n",
        ] {
            assert!(read_instance(bad).is_err(), "{bad:?}");
        }
    }
}
