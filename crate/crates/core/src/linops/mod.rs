//! Sparse SPD linear algebra: solves, inner products and orthonormalization.

mod gram_schmidt;
mod solve;
mod sparse;

pub use gram_schmidt::{
    gram_schmidt_reiterated, GramSchmidtOutput, OrthonormalSet, DEFLATION_TOL, REITERATION_THRESHOLD,
};
pub use solve::{spd_solve, v_inner, SolverConfig, SolverKind, SpdSolver};
pub use sparse::CsrMatrix;

pub(crate) use sparse::{axpy, dot, norm2};
