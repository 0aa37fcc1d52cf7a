//! Black-box transforms between bicriteria formulations.
//!
//! A [`BicriteriaSolver`] takes a budget on one measure and approximately
//! minimizes another, with a declared `(α, β)` guarantee. The transforms here
//! swap which measure is budgeted ([`bicriteria_equivalence`]), minimize the
//! sum of both ([`convert_sum`]), or build a bicriteria algorithm out of a
//! unicriterion one when both measures share an objective type
//! ([`parametric_search`]).

use std::cell::RefCell;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BiGraph, Cost, CostKind, Measure, Objective, TerminalSet, TreeSolution};
use crate::rational::{le_scaled, positive, to_big, BigRational, Rational};
use crate::uni::{self, CostSelector};

/// Budget on one measure, approximate minimization of another.
pub trait BicriteriaSolver {
    fn budgeted(&self) -> Measure;
    fn minimized(&self) -> Measure;
    /// `(α, β)`: the budget is violated by at most `α`, the minimized measure
    /// is within `β` of the best budget-respecting tree.
    fn guarantee(&self, graph: &BiGraph, terminals: &TerminalSet) -> (Rational, Rational);
    /// `Ok(None)` when the solver finds nothing for this budget.
    fn solve(
        &self,
        graph: &BiGraph,
        terminals: &TerminalSet,
        budget: Cost,
    ) -> Result<Option<TreeSolution>>;
}

/// A ρ-approximation for minimizing one objective under a single cost.
pub trait UnicriterionSolver {
    fn objective(&self) -> Objective;
    fn rho(&self) -> Rational;
    fn solve(
        &self,
        graph: &BiGraph,
        terminals: &TerminalSet,
        sel: &CostSelector,
    ) -> Result<TreeSolution>;
}

fn require_spanning(graph: &BiGraph, terminals: &TerminalSet) -> Result<()> {
    if terminals.is_spanning(graph) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(
            "this solver only builds spanning trees".into(),
        ))
    }
}

/// Exact minimum spanning tree (ρ = 1).
#[derive(Debug, Clone, Copy, Default)]
pub struct MstSolver;

impl UnicriterionSolver for MstSolver {
    fn objective(&self) -> Objective {
        Objective::TotalCost
    }

    fn rho(&self) -> Rational {
        Rational::one()
    }

    fn solve(
        &self,
        graph: &BiGraph,
        terminals: &TerminalSet,
        sel: &CostSelector,
    ) -> Result<TreeSolution> {
        require_spanning(graph, terminals)?;
        uni::mst(graph, sel)
    }
}

/// Exact minimum-diameter spanning tree (ρ = 1).
#[derive(Debug, Clone, Copy, Default)]
pub struct MinDiameterSolver;

impl UnicriterionSolver for MinDiameterSolver {
    fn objective(&self) -> Objective {
        Objective::Diameter
    }

    fn rho(&self) -> Rational {
        Rational::one()
    }

    fn solve(
        &self,
        graph: &BiGraph,
        terminals: &TerminalSet,
        sel: &CostSelector,
    ) -> Result<TreeSolution> {
        require_spanning(graph, terminals)?;
        uni::min_diameter_spanning_tree(graph, sel)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchWarning {
    /// The top of the search range did not satisfy the acceptance test, so
    /// the solver is not monotone on this instance; the answer came from a
    /// scan over powers of two.
    NonMonotoneSolver,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub tree: TreeSolution,
    /// Budget handed to the wrapped solver for the returned tree.
    pub budget: Cost,
    pub invocations: usize,
    pub warning: Option<SearchWarning>,
}

/// Memoizes a search predicate over integer points.
struct Probe<F> {
    eval: F,
    cache: RefCell<BTreeMap<u64, Option<TreeSolution>>>,
    invocations: RefCell<usize>,
}

impl<F> Probe<F>
where
    F: Fn(u64) -> Result<Option<TreeSolution>>,
{
    fn new(eval: F) -> Self {
        Probe {
            eval,
            cache: RefCell::new(BTreeMap::new()),
            invocations: RefCell::new(0),
        }
    }

    /// `Some(tree)` iff the point passes.
    fn at(&self, x: u64) -> Result<Option<TreeSolution>> {
        if let Some(hit) = self.cache.borrow().get(&x) {
            return Ok(hit.clone());
        }
        *self.invocations.borrow_mut() += 1;
        let out = (self.eval)(x)?;
        self.cache.borrow_mut().insert(x, out.clone());
        Ok(out)
    }

    fn invocations(&self) -> usize {
        *self.invocations.borrow()
    }

    /// Least passing point found by binary search on `[lo, hi]`, where `lo`
    /// is taken to fail without evaluation; falls back to a powers-of-two
    /// scan when `hi` itself fails.
    fn threshold(
        &self,
        lo: u64,
        hi: u64,
    ) -> Result<Option<(u64, TreeSolution, Option<SearchWarning>)>> {
        if let Some(top) = self.at(hi)? {
            let (mut lo, mut hi, mut best) = (lo, hi, top);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                match self.at(mid)? {
                    Some(t) => {
                        hi = mid;
                        best = t;
                    }
                    None => lo = mid,
                }
            }
            return Ok(Some((hi, best, None)));
        }
        let mut x = lo.max(1);
        while x < hi {
            if x > lo {
                if let Some(t) = self.at(x)? {
                    return Ok(Some((x, t, Some(SearchWarning::NonMonotoneSolver))));
                }
            }
            x = x.saturating_mul(2);
        }
        Ok(None)
    }
}

/// Turns an `(α, β)` solver for "budget A, minimize B" into a `(β, α)`
/// algorithm for "budget B, minimize A": binary search for the least solver
/// budget whose answer has B-value at most `β·bound`.
pub fn bicriteria_equivalence(
    solver: &dyn BicriteriaSolver,
    graph: &BiGraph,
    terminals: &TerminalSet,
    bound: Cost,
) -> Result<SearchOutcome> {
    let (_, beta) = solver.guarantee(graph, terminals);
    let minimized = solver.minimized();
    let hi = graph.total(solver.budgeted().cost)?;
    let probe = Probe::new(|budget: u64| -> Result<Option<TreeSolution>> {
        let Some(tree) = solver.solve(graph, terminals, budget)? else {
            return Ok(None);
        };
        let value = tree.value(graph, minimized)?;
        Ok(le_scaled(value as u128, beta, bound as u128).then_some(tree))
    });
    // Budget 0 is a real candidate, so the implicit failing point sits
    // just below it: search over [-1, hi] shifted by one.
    let shifted = Probe::new(|x: u64| probe.at(x - 1));
    match shifted.threshold(0, hi + 1)? {
        Some((x, tree, warning)) => Ok(SearchOutcome {
            tree,
            budget: x - 1,
            invocations: probe.invocations(),
            warning,
        }),
        None => Err(Error::Infeasible(format!(
            "NO SOLUTION: no budget yields {minimized} <= {beta} * {bound}"
        ))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvertOutcome {
    pub tree: TreeSolution,
    pub budget: Cost,
    /// Budgeted measure plus minimized measure of the returned tree.
    pub sum: Cost,
    pub invocations: usize,
}

/// Budgets `0` and `⌊(1+ε)^j⌋` for `j = 0..=R`, `R = ⌈log_{1+ε} hi⌉`,
/// deduplicated and ascending.
pub fn geometric_budgets(hi: Cost, eps: Rational) -> Vec<Cost> {
    let base = BigRational::one() + to_big(eps);
    let target = BigRational::from_integer(BigUint::from(hi));
    let mut out = vec![0];
    let mut power = BigRational::one();
    loop {
        let floor = power.floor().to_integer().to_u64().unwrap_or(Cost::MAX);
        if out.last() != Some(&floor) {
            out.push(floor);
        }
        if power >= target {
            break;
        }
        power = &power * &base;
    }
    out
}

/// Approximately minimizes (budgeted measure + minimized measure) by
/// sweeping geometrically spaced budgets.
pub fn convert_sum(
    solver: &dyn BicriteriaSolver,
    graph: &BiGraph,
    terminals: &TerminalSet,
    eps: Rational,
) -> Result<ConvertOutcome> {
    let eps = positive("epsilon", eps)?;
    let hi = graph.total(solver.budgeted().cost)?;
    let mut best: Option<ConvertOutcome> = None;
    let mut invocations = 0;
    for budget in geometric_budgets(hi, eps) {
        invocations += 1;
        let Some(tree) = solver.solve(graph, terminals, budget)? else {
            continue;
        };
        let a = tree.value(graph, solver.budgeted())?;
        let b = tree.value(graph, solver.minimized())?;
        let sum = a.checked_add(b).ok_or(Error::Overflow)?;
        if best.as_ref().is_none_or(|cur| sum < cur.sum) {
            best = Some(ConvertOutcome {
                tree,
                budget,
                sum,
                invocations: 0,
            });
        }
    }
    let mut out =
        best.ok_or_else(|| Error::Infeasible("solver infeasible at every budget".into()))?;
    out.invocations = invocations;
    Ok(out)
}

fn measure(objective: Objective, cost: CostKind) -> Measure {
    Measure { objective, cost }
}

/// Composite `(x / budget)·c + d` for `x = k / step_den`.
fn composite_at(k: u64, step_den: u128, budget: Cost) -> CostSelector {
    CostSelector::composite(
        Rational::new(k as u128, step_den * budget as u128),
        Rational::one(),
    )
}

/// Solver-objective value of `tree` under `sel`.
fn composite_value(
    solver: &dyn UnicriterionSolver,
    graph: &BiGraph,
    tree: &TreeSolution,
    sel: &CostSelector,
) -> Result<Rational> {
    match solver.objective() {
        Objective::TotalCost => uni::tree_total(graph, tree, sel),
        Objective::Diameter => uni::tree_diameter_under(graph, tree, sel),
    }
}

/// `h(x)/x`: the solver's cost under the composite `(x/budget)·c + d`
/// divided by `x`. Nonincreasing in `x` for exact solvers.
pub fn normalized_cost(
    solver: &dyn UnicriterionSolver,
    graph: &BiGraph,
    terminals: &TerminalSet,
    budget: Cost,
    x: Rational,
) -> Result<Rational> {
    if budget == 0 || x.is_zero() {
        return Err(Error::InvalidParameter(
            "budget and x must be positive".into(),
        ));
    }
    let sel = CostSelector::composite(x / Rational::from_integer(budget as u128), Rational::one());
    let tree = solver.solve(graph, terminals, &sel)?;
    Ok(composite_value(solver, graph, &tree, &sel)? / x)
}

#[derive(Debug, Clone, Serialize)]
pub struct ParametricOutcome {
    pub tree: TreeSolution,
    /// The parameter `D'+1` at which the returned tree was produced.
    #[serde(serialize_with = "crate::rational::serialize")]
    pub parameter: Rational,
    /// Objective value under c and under d.
    pub c_value: Cost,
    pub d_value: Cost,
    pub invocations: usize,
    pub warning: Option<SearchWarning>,
}

/// Builds a `((1+γ)ρ, (1+1/γ)ρ)` algorithm for "budget the objective under
/// c, minimize it under d" from a ρ-approximate unicriterion solver, by
/// binary search on the weight given to c in the composite cost.
///
/// The search parameter moves on a fine rational grid up to
/// `max(γ, 1/γ)·D_hi`, where `D_hi` is the sum of all d-costs.
pub fn parametric_search(
    solver: &dyn UnicriterionSolver,
    graph: &BiGraph,
    terminals: &TerminalSet,
    budget: Cost,
    gamma: Rational,
) -> Result<ParametricOutcome> {
    let gamma = positive("gamma", gamma)?;
    if budget == 0 {
        return Err(Error::InvalidParameter(
            "parametric search needs a positive budget".into(),
        ));
    }
    let rho = solver.rho();
    let threshold = (Rational::one() + gamma) * rho;
    // Steps of 1/(p·m) with p = numer(γ) keep D_opt/γ on the grid, and
    // m > (1+γ)/p makes the first step too small to buy a unit of d.
    let p = *gamma.numer();
    let m = ((Rational::one() + gamma) / Rational::from_integer(p)).to_integer() + 1;
    let step_den = p * m;
    let d_hi = graph.total(CostKind::D)?;
    let stretch = gamma.max(gamma.recip());
    let top = (stretch * Rational::from_integer(step_den * d_hi as u128)).ceil();
    let k_hi = top.to_integer().max(1);
    let k_hi = u64::try_from(k_hi).map_err(|_| Error::Overflow)?;

    let probe = Probe::new(|k: u64| -> Result<Option<TreeSolution>> {
        let sel = composite_at(k, step_den, budget);
        let tree = solver.solve(graph, terminals, &sel)?;
        let h = composite_value(solver, graph, &tree, &sel)?;
        let x = Rational::new(k as u128, step_den);
        Ok((h <= threshold * x).then_some(tree))
    });
    let (k, tree, warning) = probe.threshold(0, k_hi)?.ok_or_else(|| {
        Error::Infeasible("NO SOLUTION: parametric search found no bracket".into())
    })?;
    let objective = solver.objective();
    let c_value = tree.value(graph, measure(objective, CostKind::C))?;
    let d_value = tree.value(graph, measure(objective, CostKind::D))?;
    Ok(ParametricOutcome {
        tree,
        parameter: Rational::new(k as u128, step_den),
        c_value,
        d_value,
        invocations: probe.invocations(),
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn geometric_budget_grid() {
        assert_eq!(geometric_budgets(10, int(1)), vec![0, 1, 2, 4, 8, 16]);
        assert_eq!(geometric_budgets(0, int(1)), vec![0, 1]);
        let fine = geometric_budgets(5, ratio(1, 2));
        // 1, 1.5, 2.25, 3.375, 5.06
        assert_eq!(fine, vec![0, 1, 2, 3, 5]);
    }

    #[test]
    fn parametric_on_a_tree_returns_it() {
        let g = BiGraph::from_tuples(3, &[(0, 1, 4, 1), (1, 2, 2, 7)]).unwrap();
        let k = TerminalSet::all(&g);
        for gamma in [ratio(1, 2), int(1), int(2)] {
            let out = parametric_search(&MstSolver, &g, &k, 6, gamma).unwrap();
            assert_eq!(out.tree.edge_ids.len(), 2);
            assert_eq!((out.c_value, out.d_value), (6, 8));
        }
    }

    #[test]
    fn parametric_rejects_bad_parameters() {
        let g = BiGraph::from_tuples(2, &[(0, 1, 1, 1)]).unwrap();
        let k = TerminalSet::all(&g);
        assert!(parametric_search(&MstSolver, &g, &k, 0, int(1)).is_err());
        assert!(parametric_search(&MstSolver, &g, &k, 1, int(0)).is_err());
    }

    #[test]
    fn spanning_solvers_reject_steiner_terminals() {
        let g = BiGraph::from_tuples(3, &[(0, 1, 1, 1), (1, 2, 1, 1)]).unwrap();
        let k = TerminalSet::new(&g, [0, 2]).unwrap();
        assert!(MstSolver.solve(&g, &k, &CostSelector::C).is_err());
    }
}
