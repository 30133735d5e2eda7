//! Shallow-light Steiner trees: a minimum-cost tree spanning a terminal set
//! whose root-to-terminal delays stay within a bound.
//!
//! The exact solver expands the graph into delay layers so that the bound
//! becomes structural, then runs a subset dynamic program for directed
//! Steiner trees; its running time is exponential only in the number of
//! terminals and pseudo-polynomial in the bound. The approximate solver
//! rescales delays first and returns a tree no costlier than the optimum
//! with delays below `(1 + eps)` times the bound.
//!
//! All types are generic over an unsigned integer [`Weight`]; the aliases
//! below fix it to `u64` (and `u32` for compact instances).

pub mod dst;
pub mod instance;
pub mod layered;
pub mod oracle;
pub mod scalar;
pub mod solver;

pub use instance::{
    evaluate_tree, validate_instance, Directedness, EdgeId, InstanceError, SteinerTree, TreeDefect,
    TreeError, VertexId,
};
pub use layered::{build_layered, embed_tree, project_tree, LayerError, LayerTree, LayerVertex};
pub use scalar::{Epsilon, Rational, Weight};
pub use solver::{
    layered_graph_for, prune_to_tree, scale_instance, solve, solve_approx, solve_exact, SolveError,
    SolveMode, SolverConfig, SolverStats,
};

pub type Instance = instance::Instance<u64>;
pub type Edge = instance::Edge<u64>;
pub type TreeEvaluation = instance::TreeEvaluation<u64>;
pub type LayeredGraph = layered::LayeredGraph<u64>;
pub type SolveReport = solver::SolveReport<u64>;
pub type ScaledInstance = solver::ScaledInstance<u64>;

pub type Instance32 = instance::Instance<u32>;
pub type Edge32 = instance::Edge<u32>;
pub type TreeEvaluation32 = instance::TreeEvaluation<u32>;
pub type LayeredGraph32 = layered::LayeredGraph<u32>;
pub type SolveReport32 = solver::SolveReport<u32>;
