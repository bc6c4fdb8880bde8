//! Reduced basis construction: basis management, Galerkin projection,
//! reduced solves and the weak greedy algorithm.

mod basis;
mod greedy;
mod reduced;

pub use basis::{extend_basis, ReducedBasis};
pub use greedy::{make_train_set, weak_greedy, GreedyLog, GreedyStep, Termination};
pub use reduced::{
    project, solve_high_dim, solve_reduced, ErrorEstimate, EstimatorKind, ReducedModel, Reductor, RELATIVE_FLOOR,
};
