//! Bicriteria network design on graphs with two integer edge costs.
//!
//! * [`graph`]: dual-cost multigraphs and exact tree metrics.
//! * [`uni`]: unicriterion solvers (MST, minimum-diameter spanning tree,
//!   restricted shortest paths, small matchings).
//! * [`transforms`]: black-box transforms between bicriteria formulations
//!   (budget swapping, sum objectives, parametric search).
//! * [`dcst`]: cluster-merging approximation for diameter-bounded minimum
//!   cost Steiner trees.
//! * [`spdp`]: exact dynamic programs and an FPTAS on series-parallel graphs.
//! * [`oracle`]: brute-force enumeration and Pareto fronts for ground truth.
//! * [`generators`]: hardness gadgets and seeded random instances.
//! * [`format`]: the edge-list text format.

pub mod dcst;
pub mod error;
pub mod format;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod rational;
pub mod spdp;
pub mod transforms;
pub mod uni;

pub use error::{Error, Result};
pub use graph::{
    evaluate_tree, steiner_metrics, validate, BiGraph, Cost, CostKind, Edge, EdgeId, EdgeSpec,
    Measure, NodeId, Objective, TerminalSet, TreeSolution, ValidationReport, Violation,
};
pub use rational::Rational;
