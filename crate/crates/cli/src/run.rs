use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use bicrit::dcst::{dcst, DcstSolver, PathMode};
use bicrit::format::{read_instance, write_witness};
use bicrit::oracle::{pareto_front_by, OracleCaps, OracleSolver, ParetoFront};
use bicrit::rational::{int, ratio};
use bicrit::spdp::{
    dp_min_cost_given_diameter, dp_min_diameter_given_cost, fpas_dcst, parse_sp, SpTree,
};
use bicrit::transforms::{
    bicriteria_equivalence, convert_sum, parametric_search, BicriteriaSolver, MinDiameterSolver,
    MstSolver, UnicriterionSolver,
};
use bicrit::uni::{restricted_shortest_path_exact, restricted_shortest_path_fptas};
use bicrit::{
    evaluate_tree, steiner_metrics, BiGraph, Cost, Error, Measure, Rational, TerminalSet,
    TreeSolution,
};

use crate::report::{Bound, OracleValue, Params, RunReport};
use crate::{Failure, Format};

pub struct Job {
    pub name: String,
    pub text: String,
    pub check: bool,
    pub timing: bool,
    pub format: Format,
    pub witness: Option<PathBuf>,
}

pub enum Algorithm {
    Dcst {
        d: Cost,
        eps: Rational,
        path_mode: PathMode,
    },
    Parametric {
        c: Cost,
        gamma: Rational,
        diameter: bool,
    },
    Equivalence {
        c: Cost,
        eps: Rational,
        exact: bool,
        path_mode: PathMode,
    },
    Convert {
        eps: Rational,
        exact: bool,
        path_mode: PathMode,
    },
    SpdpExact {
        d: Option<Cost>,
        c: Option<Cost>,
    },
    SpdpFpas {
        d: Cost,
        eps: Rational,
    },
    Oracle,
    Rsp {
        source: usize,
        target: usize,
        d: Cost,
        eps: Option<Rational>,
    },
}

pub struct Outcome {
    pub text: String,
    /// Set when a promised bound failed; the report is still printed.
    pub violation: Option<String>,
}

struct Loaded {
    graph: BiGraph,
    terminals: TerminalSet,
    sp: Option<SpTree>,
}

/// Edge lists start with a `nodes` header; anything else is read as a
/// series-parallel expression (spanning, so every node is a terminal).
fn load(text: &str) -> Result<Loaded, Error> {
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    if body.trim_start().starts_with("nodes") {
        let inst = read_instance(text)?;
        return Ok(Loaded {
            graph: inst.graph,
            terminals: inst.terminals,
            sp: None,
        });
    }
    let sp = parse_sp(&body)?;
    let graph = sp.graph().clone();
    Ok(Loaded {
        terminals: TerminalSet::all(&graph),
        graph,
        sp: Some(sp),
    })
}

/// Oracle front, or a note explaining why it was skipped.
fn front(job: &Job, inst: &Loaded, x: Measure, y: Measure) -> Result<Option<ParetoFront>, String> {
    if !job.check {
        return Ok(None);
    }
    match pareto_front_by(&inst.graph, &inst.terminals, OracleCaps::default(), x, y) {
        Ok(f) => Ok(Some(f)),
        Err(e @ Error::CapExceeded { .. }) => Err(format!("oracle skipped: {e}")),
        Err(e) => Err(format!("oracle failed: {e}")),
    }
}

struct Draft {
    algorithm: &'static str,
    params: Params,
    tree: TreeSolution,
    /// Terminals the witness must cover.
    terminals: TerminalSet,
    oracle: Option<OracleValue>,
    oracle_note: Option<String>,
    guarantees: Vec<Bound>,
    details: BTreeMap<String, String>,
}

impl Draft {
    fn new(
        algorithm: &'static str,
        params: Params,
        tree: TreeSolution,
        terminals: &TerminalSet,
    ) -> Self {
        Draft {
            algorithm,
            params,
            tree,
            terminals: terminals.clone(),
            oracle: None,
            oracle_note: None,
            guarantees: Vec::new(),
            details: BTreeMap::new(),
        }
    }

    fn detail(&mut self, key: &str, value: impl ToString) {
        self.details.insert(key.into(), value.to_string());
    }

    /// Records the oracle optimum and, when it exists, the bound against it.
    fn against_oracle(
        &mut self,
        looked_up: Result<Option<ParetoFront>, String>,
        what: String,
        pick: impl FnOnce(&ParetoFront) -> Result<Option<Cost>, Error>,
        bound: impl FnOnce(Cost) -> Bound,
    ) -> Result<(), Failure> {
        match looked_up {
            Ok(None) => {}
            Err(note) => self.oracle_note = Some(note),
            Ok(Some(f)) => {
                let value = pick(&f)?;
                self.oracle = Some(OracleValue { what, value });
                match value {
                    Some(opt) => self.guarantees.push(bound(opt)),
                    None => self.oracle_note = Some("oracle: no tree meets the constraint".into()),
                }
            }
        }
        Ok(())
    }
}

fn eps_param(eps: Rational) -> Option<String> {
    Some(eps.to_string())
}

fn exact_or_dcst<'a>(
    inst: &Loaded,
    exact: bool,
    holder: &'a mut Option<OracleSolver>,
    dcst_solver: &'a DcstSolver,
) -> Result<&'a dyn BicriteriaSolver, Error> {
    if exact {
        let solver = OracleSolver::new(
            &inst.graph,
            &inst.terminals,
            Measure::DIAMETER_D,
            Measure::TOTAL_C,
            OracleCaps::default(),
        )?;
        Ok(holder.insert(solver))
    } else {
        Ok(dcst_solver)
    }
}

pub fn run(job: &Job, algorithm: Algorithm) -> Result<Outcome, Failure> {
    let inst = load(&job.text)?;
    let (g, k) = (&inst.graph, &inst.terminals);
    let start = Instant::now();
    let one = int(1);
    let draft = match algorithm {
        Algorithm::Oracle => {
            let f = pareto_front_by(
                g,
                k,
                OracleCaps::default(),
                Measure::DIAMETER_D,
                Measure::TOTAL_C,
            )?;
            return Ok(Outcome {
                text: render_front(&f, job.format),
                violation: None,
            });
        }
        Algorithm::Dcst { d, eps, path_mode } => {
            let out = dcst(g, k, d, eps, path_mode)?;
            let params = Params {
                d: Some(d),
                eps: eps_param(eps),
                ..Params::default()
            };
            let mut draft = Draft::new("dcst", params, out.tree.clone(), k);
            draft.guarantees.push(Bound::new(
                "diameter_d",
                out.tree.diameter_d,
                out.diameter_factor,
                d,
            ));
            let looked_up = front(job, &inst, Measure::DIAMETER_D, Measure::TOTAL_C);
            draft.against_oracle(
                looked_up,
                format!("min total_c with diameter_d <= {d}"),
                |f| Ok(f.opt_given_budget(Measure::DIAMETER_D, d)?.map(|p| p.y)),
                |opt| Bound::new("total_c", out.tree.total_c, out.cost_factor, opt),
            )?;
            draft.detail("phases", out.phases.len());
            draft.detail("exact_paths", out.exact_paths);
            draft
        }
        Algorithm::Parametric { c, gamma, diameter } => {
            let (solver, mc, md): (&dyn UnicriterionSolver, _, _) = if diameter {
                (&MinDiameterSolver, Measure::DIAMETER_C, Measure::DIAMETER_D)
            } else {
                (&MstSolver, Measure::TOTAL_C, Measure::TOTAL_D)
            };
            let out = parametric_search(solver, g, k, c, gamma)?;
            let rho = solver.rho();
            let params = Params {
                c: Some(c),
                gamma: Some(gamma.to_string()),
                ..Params::default()
            };
            let mut draft = Draft::new("parametric", params, out.tree.clone(), k);
            draft.guarantees.push(Bound::new(
                mc.to_string(),
                out.c_value,
                (one + gamma) * rho,
                c,
            ));
            let looked_up = front(job, &inst, mc, md);
            draft.against_oracle(
                looked_up,
                format!("min {md} with {mc} <= {c}"),
                |f| Ok(f.opt_given_budget(mc, c)?.map(|p| p.y)),
                |opt| {
                    Bound::new(
                        md.to_string(),
                        out.d_value,
                        (one + gamma.recip()) * rho,
                        opt,
                    )
                },
            )?;
            draft.detail("solver", if diameter { "mdst" } else { "mst" });
            draft.detail("c_value", out.c_value);
            draft.detail("d_value", out.d_value);
            draft.detail("parameter", out.parameter);
            draft.detail("invocations", out.invocations);
            if let Some(w) = out.warning {
                draft.detail("warning", format!("{w:?}"));
            }
            draft
        }
        Algorithm::Equivalence {
            c,
            eps,
            exact,
            path_mode,
        } => {
            let dcst_solver = DcstSolver { eps, path_mode };
            let mut holder = None;
            let solver = exact_or_dcst(&inst, exact, &mut holder, &dcst_solver)?;
            let (alpha, beta) = solver.guarantee(g, k);
            let out = bicriteria_equivalence(solver, g, k, c)?;
            let params = Params {
                c: Some(c),
                eps: eps_param(eps),
                ..Params::default()
            };
            let mut draft = Draft::new("equivalence", params, out.tree.clone(), k);
            draft
                .guarantees
                .push(Bound::new("total_c", out.tree.total_c, beta, c));
            let looked_up = front(job, &inst, Measure::DIAMETER_D, Measure::TOTAL_C);
            draft.against_oracle(
                looked_up,
                format!("min diameter_d with total_c <= {c}"),
                |f| Ok(f.opt_given_budget(Measure::TOTAL_C, c)?.map(|p| p.x)),
                |opt| Bound::new("diameter_d", out.tree.diameter_d, alpha, opt),
            )?;
            draft.detail("solver", if exact { "oracle" } else { "dcst" });
            draft.detail("solver_budget", out.budget);
            draft.detail("invocations", out.invocations);
            if let Some(w) = out.warning {
                draft.detail("warning", format!("{w:?}"));
            }
            draft
        }
        Algorithm::Convert {
            eps,
            exact,
            path_mode,
        } => {
            let dcst_solver = DcstSolver { eps, path_mode };
            let mut holder = None;
            let solver = exact_or_dcst(&inst, exact, &mut holder, &dcst_solver)?;
            let (alpha, beta) = solver.guarantee(g, k);
            let out = convert_sum(solver, g, k, eps)?;
            let params = Params {
                eps: eps_param(eps),
                ..Params::default()
            };
            let mut draft = Draft::new("convert", params, out.tree.clone(), k);
            let looked_up = front(job, &inst, Measure::DIAMETER_D, Measure::TOTAL_C);
            draft.against_oracle(
                looked_up,
                "min diameter_d + total_c".into(),
                |f| Ok(f.min_sum().map(|p| p.x + p.y)),
                |opt| {
                    Bound::new(
                        "diameter_d + total_c",
                        out.sum,
                        (one + eps) * alpha.max(beta),
                        opt,
                    )
                },
            )?;
            draft.detail("solver", if exact { "oracle" } else { "dcst" });
            draft.detail("sum", out.sum);
            draft.detail("solver_budget", out.budget);
            draft.detail("invocations", out.invocations);
            draft
        }
        Algorithm::SpdpExact { d, c } => {
            let sp = require_sp(&inst)?;
            let looked_up = front(job, &inst, Measure::DIAMETER_D, Measure::TOTAL_C);
            match (d, c) {
                (Some(d), None) => {
                    let tree = dp_min_cost_given_diameter(sp, d)?;
                    let params = Params {
                        d: Some(d),
                        ..Params::default()
                    };
                    let mut draft = Draft::new("spdp-exact", params, tree.clone(), k);
                    draft
                        .guarantees
                        .push(Bound::new("diameter_d", tree.diameter_d, one, d));
                    draft.against_oracle(
                        looked_up,
                        format!("min total_c with diameter_d <= {d}"),
                        |f| Ok(f.opt_given_budget(Measure::DIAMETER_D, d)?.map(|p| p.y)),
                        |opt| Bound::new("total_c", tree.total_c, one, opt),
                    )?;
                    draft
                }
                (None, Some(c)) => {
                    let tree = dp_min_diameter_given_cost(sp, c)?;
                    let params = Params {
                        c: Some(c),
                        ..Params::default()
                    };
                    let mut draft = Draft::new("spdp-exact", params, tree.clone(), k);
                    draft
                        .guarantees
                        .push(Bound::new("total_c", tree.total_c, one, c));
                    draft.against_oracle(
                        looked_up,
                        format!("min diameter_d with total_c <= {c}"),
                        |f| Ok(f.opt_given_budget(Measure::TOTAL_C, c)?.map(|p| p.x)),
                        |opt| Bound::new("diameter_d", tree.diameter_d, one, opt),
                    )?;
                    draft
                }
                _ => {
                    return Err(Failure::internal(
                        "spdp-exact takes exactly one of --D and --C",
                    ))
                }
            }
        }
        Algorithm::SpdpFpas { d, eps } => {
            let sp = require_sp(&inst)?;
            let out = fpas_dcst(sp, d, eps)?;
            let params = Params {
                d: Some(d),
                eps: eps_param(eps),
                ..Params::default()
            };
            let mut draft = Draft::new("spdp-fpas", params, out.tree.clone(), k);
            draft
                .guarantees
                .push(Bound::new("diameter_d", out.tree.diameter_d, one, d));
            let looked_up = front(job, &inst, Measure::DIAMETER_D, Measure::TOTAL_C);
            draft.against_oracle(
                looked_up,
                format!("min total_c with diameter_d <= {d}"),
                |f| Ok(f.opt_given_budget(Measure::DIAMETER_D, d)?.map(|p| p.y)),
                |opt| Bound::new("total_c", out.tree.total_c, one + eps, opt),
            )?;
            draft.detail("lower", out.lower);
            draft.detail("upper", out.upper);
            draft.detail("tests", out.tests);
            draft
        }
        Algorithm::Rsp {
            source,
            target,
            d,
            eps,
        } => {
            let path = match eps {
                Some(eps) => restricted_shortest_path_fptas(g, source, target, d, eps)?,
                None => restricted_shortest_path_exact(g, source, target, d)?,
            };
            let tree = if path.edge_ids.is_empty() {
                TreeSolution::single_node(source)
            } else {
                evaluate_tree(g, path.edge_ids.iter().copied())?
            };
            let ends = TerminalSet::new(g, [source, target])?;
            let params = Params {
                d: Some(d),
                eps: eps.map(|e| e.to_string()),
                ..Params::default()
            };
            let mut draft = Draft::new("rsp", params, tree, &ends);
            draft
                .guarantees
                .push(Bound::new("length_d", path.length_d, one, d));
            if job.check {
                // the exact pseudopolynomial DP serves as the reference here
                let best = restricted_shortest_path_exact(g, source, target, d)?.cost_c;
                draft.oracle = Some(OracleValue {
                    what: format!("min cost_c over paths with length_d <= {d}"),
                    value: Some(best),
                });
                draft.guarantees.push(Bound::new(
                    "cost_c",
                    path.cost_c,
                    one + eps.unwrap_or(ratio(0, 1)),
                    best,
                ));
            }
            let nodes: Vec<String> = path.nodes.iter().map(|v| v.to_string()).collect();
            draft.detail("path", nodes.join(" "));
            draft.detail("cost_c", path.cost_c);
            draft.detail("length_d", path.length_d);
            draft
        }
    };
    let elapsed = start.elapsed();

    // the witness must reproduce the reported metrics
    let (c, d) = steiner_metrics(g, &draft.tree, &draft.terminals)?;
    if (c, d) != (draft.tree.total_c, draft.tree.diameter_d) {
        return Err(Failure::internal(format!(
            "witness re-evaluates to total_c {c} diameter_d {d}, report says {} / {}",
            draft.tree.total_c, draft.tree.diameter_d
        )));
    }
    if let Some(path) = &job.witness {
        std::fs::write(path, write_witness(g, &draft.terminals, &draft.tree))
            .map_err(|e| Failure::internal(format!("cannot write {}: {e}", path.display())))?;
    }
    let report = RunReport {
        instance: job.name.clone(),
        algorithm: draft.algorithm,
        params: draft.params,
        total_c: draft.tree.total_c,
        diameter_d: draft.tree.diameter_d,
        edge_ids: draft.tree.edge_ids.iter().copied().collect(),
        oracle: draft.oracle,
        oracle_note: draft.oracle_note,
        guarantees: draft.guarantees,
        details: draft.details,
        wall_time_ms: job.timing.then_some(elapsed.as_secs_f64() * 1e3),
    };
    let violations = report.violations();
    Ok(Outcome {
        text: report.render(job.format),
        violation: (!violations.is_empty())
            .then(|| format!("guarantee violated: {}", violations.join("; "))),
    })
}

fn require_sp(inst: &Loaded) -> Result<&SpTree, Failure> {
    inst.sp.as_ref().ok_or_else(|| {
        Failure::internal("this command needs a series-parallel expression as input")
    })
}

fn render_front(front: &ParetoFront, format: Format) -> String {
    let rows = front.points.iter().map(|p| {
        let ids: Vec<String> = p.witness.iter().map(|id| id.to_string()).collect();
        (p.x, p.y, ids.join(" "))
    });
    match format {
        Format::Csv => {
            let mut out = String::from("diameter_d,total_c,edge_ids\n");
            for (x, y, ids) in rows {
                let _ = writeln!(out, "{x},{y},{ids}");
            }
            out
        }
        Format::Json => {
            let points: Vec<serde_json::Value> = rows
                .map(|(x, y, ids)| serde_json::json!({ "diameter_d": x, "total_c": y, "edge_ids": ids }))
                .collect();
            let mut s = serde_json::to_string_pretty(&points).expect("front serializes");
            s.push('\n');
            s
        }
    }
}
