use std::fmt::Write as _;

use bicrit::format::write_instance;
use bicrit::generators::{partition_gadget, random_graph, random_sp, setcover_gadget, RandomSpec};
use bicrit::{Cost, TerminalSet};

use crate::run::Outcome;
use crate::{Failure, GenCommand};

/// `lo..hi`, inclusive at both ends.
pub fn parse_range(s: &str) -> Result<(Cost, Cost), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: Cost = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound in {s:?}"))?;
    let hi: Cost = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound in {s:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

/// `e1,e2,...:cost`.
pub fn parse_set(s: &str) -> Result<(Vec<usize>, Cost), String> {
    let (members, cost) = s
        .rsplit_once(':')
        .ok_or_else(|| format!("expected elements:cost, got {s:?}"))?;
    let cost = cost
        .trim()
        .parse()
        .map_err(|_| format!("bad set cost in {s:?}"))?;
    let members = members
        .split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| format!("bad element {t:?} in {s:?}"))
        })
        .collect::<Result<Vec<usize>, String>>()?;
    Ok((members, cost))
}

pub fn run(cmd: GenCommand) -> Result<Outcome, Failure> {
    let text = match cmd {
        GenCommand::Partition { items, edge_list } => {
            let g = partition_gadget(&items)?;
            let mut out = format!("# H = {}\n", g.half);
            if edge_list {
                let graph = g.tree.graph();
                out.push_str(&write_instance(graph, &TerminalSet::all(graph)));
            } else {
                let _ = writeln!(out, "{}", g.tree);
            }
            out
        }
        GenCommand::Setcover { elements, sets } => {
            let g = setcover_gadget(elements, &sets)?;
            let sets: Vec<String> = g.set_nodes.iter().map(|v| v.to_string()).collect();
            format!(
                "# set nodes {} enforcer {} diameter bound {}\n{}",
                sets.join(","),
                g.enforcer,
                g.diameter_bound,
                write_instance(&g.graph, &g.terminals)
            )
        }
        GenCommand::Random {
            nodes,
            edges,
            c_range,
            d_range,
            seed,
            terminals,
        } => {
            let graph = random_graph(&RandomSpec {
                nodes,
                edges,
                c: c_range.0..=c_range.1,
                d: d_range.0..=d_range.1,
                seed,
            })?;
            let k = match terminals {
                None => TerminalSet::all(&graph),
                Some(k) if k == 0 || k > nodes => {
                    return Err(Failure::internal(format!(
                        "terminal count {k} not in 1..={nodes}"
                    )))
                }
                // evenly spread, so the choice is reproducible without extra randomness
                Some(k) => TerminalSet::new(&graph, (0..k).map(|i| i * nodes / k))?,
            };
            format!("# seed {seed}\n{}", write_instance(&graph, &k))
        }
        GenCommand::RandomSp {
            edges,
            c_range,
            d_range,
            seed,
        } => format!(
            "# seed {seed}\n{}\n",
            random_sp(edges, c_range.0..=c_range.1, d_range.0..=d_range.1, seed)?
        ),
    };
    Ok(Outcome {
        text,
        violation: None,
    })
}
