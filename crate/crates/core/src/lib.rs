//! Reduced basis model order reduction for affinely parametrized, coercive
//! elliptic problems.
//!
//! The crate covers the full offline/online pipeline:
//!
//! - [`fem`] assembles the thermal block benchmark as an affinely decomposed
//!   [`HighDimModel`] on a structured P1 triangulation.
//! - [`linops`] holds the sparse SPD kernels: banded Cholesky and conjugate
//!   gradient solves, inner products and Gram–Schmidt with re-iteration.
//! - [`rb`] builds reduced spaces: basis extension, Galerkin projection,
//!   reduced solves and the weak greedy loop.
//! - [`estimators`] evaluates the dual norm of the residual, both with the
//!   classical Gram-matrix expansion and with the orthonormal residual-space
//!   basis, which stays accurate down to machine precision.
//! - [`experiment`] drives the estimator stability study and writes its CSV
//!   and efficiency tables.
//!
//! See the `examples/` directory for one runnable program per capability.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod estimators;
pub mod experiment;
pub mod fem;
pub mod linops;
pub mod model;
pub mod rb;

pub use error::{RbError, Result};
pub use estimators::{
    error_bound, estimate_stable, estimate_traditional, hd_residual_norm_oracle, residual_coefficients, riesz,
    OfflineData, StableEstimatorData, TradEstimatorData,
};
pub use fem::{assemble_thermal_block, build_mesh, coercivity_lower_bound, Mesh};
pub use linops::{gram_schmidt_reiterated, spd_solve, v_inner, CsrMatrix, SolverConfig, SolverKind};
pub use model::{AffineFunctional, AffineOperator, HighDimModel, Parameter, ParameterSpace};
pub use rb::{
    extend_basis, make_train_set, project, solve_high_dim, solve_reduced, weak_greedy, EstimatorKind, GreedyLog,
    ReducedBasis, ReducedModel, Reductor,
};
