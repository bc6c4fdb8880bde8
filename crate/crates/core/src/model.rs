//! Affinely parametrized high-dimensional problems.
//!
//! A [`HighDimModel`] stores the parameter-independent pieces of
//! `a_μ(u, v) = Σ_q θ_a^q(μ) a^q(u, v)` and `f_μ(v) = Σ_q θ_f^q(μ) f^q(v)`
//! together with the inner product of the solution space.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, RbError, Result};
use crate::linops::{CsrMatrix, SolverConfig, SpdSolver};

/// A point in parameter space.
#[derive(Debug, Clone, PartialEq)]
pub struct Parameter(pub Vec<f64>);

impl Parameter {
    pub fn new(components: impl Into<Vec<f64>>) -> Self {
        Self(components.into())
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Axis-aligned box of admissible parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSpace {
    pub ranges: Vec<(f64, f64)>,
}

impl ParameterSpace {
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        Self {
            ranges: vec![(lo, hi); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.ranges.len()
    }

    pub fn check(&self, mu: &Parameter) -> Result<()> {
        if mu.len() != self.dim() {
            return Err(invalid(format!(
                "parameter {mu} has {} components, expected {}",
                mu.len(),
                self.dim()
            )));
        }
        for (i, (&c, &(lo, hi))) in mu.0.iter().zip(&self.ranges).enumerate() {
            if !(lo..=hi).contains(&c) {
                return Err(invalid(format!("component {i} of {mu} outside [{lo}, {hi}]")));
            }
        }
        Ok(())
    }
}

/// Coefficient functional `θ(μ)`.
pub type Theta = Arc<dyn Fn(&Parameter) -> f64 + Send + Sync>;

/// Lower bound for the coercivity constant of `a_μ` in the model's inner product.
pub type CoercivityBound = Arc<dyn Fn(&Parameter) -> Result<f64> + Send + Sync>;

/// `Σ_q θ_q(μ) A_q` with symmetric components sharing one sparsity pattern.
#[derive(Clone)]
pub struct AffineOperator {
    pub components: Vec<CsrMatrix>,
    pub thetas: Vec<Theta>,
}

/// `Σ_q θ_q(μ) f_q`.
#[derive(Clone)]
pub struct AffineFunctional {
    pub components: Vec<Vec<f64>>,
    pub thetas: Vec<Theta>,
}

impl AffineOperator {
    pub fn coefficients(&self, mu: &Parameter) -> Vec<f64> {
        self.thetas.iter().map(|t| t(mu)).collect()
    }

    pub fn assemble(&self, mu: &Parameter) -> Result<CsrMatrix> {
        CsrMatrix::linear_combination(&self.coefficients(mu), &self.components)
    }
}

impl AffineFunctional {
    pub fn coefficients(&self, mu: &Parameter) -> Vec<f64> {
        self.thetas.iter().map(|t| t(mu)).collect()
    }

    pub fn assemble(&self, mu: &Parameter) -> Vec<f64> {
        let n = self.components.first().map_or(0, Vec::len);
        let mut out = vec![0.0; n];
        for (c, f) in self.coefficients(mu).into_iter().zip(&self.components) {
            for (o, fi) in out.iter_mut().zip(f) {
                *o += c * fi;
            }
        }
        out
    }
}

/// Which global degrees of freedom survive Dirichlet elimination.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DofMap {
    pub total: usize,
    /// Global index of each unknown of the reduced-to-interior system.
    pub free: Vec<usize>,
    pub constrained: Vec<usize>,
}

/// Assembled affine components of a coercive problem on `V = R^N`.
///
/// Immutable after construction; the inner-product matrix is factored once
/// up front so Riesz representatives are cheap.
pub struct HighDimModel {
    operator: AffineOperator,
    rhs: AffineFunctional,
    inner: SpdSolver,
    coercivity: CoercivityBound,
    space: ParameterSpace,
    solver: SolverConfig,
    dofs: DofMap,
}

impl fmt::Debug for HighDimModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HighDimModel")
            .field("dim", &self.dim())
            .field("q_a", &self.q_a())
            .field("q_f", &self.q_f())
            .field("space", &self.space)
            .field("solver", &self.solver)
            .finish()
    }
}

impl HighDimModel {
    pub fn new(
        operator: AffineOperator,
        rhs: AffineFunctional,
        inner_product: CsrMatrix,
        coercivity: CoercivityBound,
        space: ParameterSpace,
        solver: SolverConfig,
    ) -> Result<Self> {
        let n = inner_product.dim();
        if operator.components.is_empty() || operator.components.len() != operator.thetas.len() {
            return Err(invalid("operator needs one theta per nonempty component list"));
        }
        if rhs.components.is_empty() || rhs.components.len() != rhs.thetas.len() {
            return Err(invalid("right-hand side needs one theta per nonempty component list"));
        }
        if operator.components.iter().any(|a| a.dim() != n) || rhs.components.iter().any(|f| f.len() != n) {
            return Err(invalid("affine components disagree with the inner-product dimension"));
        }
        let first = &operator.components[0];
        if !operator.components.iter().all(|a| a.same_pattern(first)) {
            return Err(invalid("operator components must share one sparsity pattern"));
        }
        let inner = SpdSolver::new(inner_product, solver)?;
        Ok(Self {
            operator,
            rhs,
            inner,
            coercivity,
            space,
            solver,
            dofs: DofMap {
                total: n,
                free: (0..n).collect(),
                constrained: Vec::new(),
            },
        })
    }

    pub fn with_dofs(mut self, dofs: DofMap) -> Self {
        self.dofs = dofs;
        self
    }

    pub fn dim(&self) -> usize {
        self.inner.matrix().dim()
    }

    pub fn q_a(&self) -> usize {
        self.operator.components.len()
    }

    pub fn q_f(&self) -> usize {
        self.rhs.components.len()
    }

    pub fn operator(&self) -> &AffineOperator {
        &self.operator
    }

    pub fn rhs(&self) -> &AffineFunctional {
        &self.rhs
    }

    /// The inner-product matrix `M_V`.
    pub fn inner_product(&self) -> &CsrMatrix {
        self.inner.matrix()
    }

    pub(crate) fn riesz_solver(&self) -> &SpdSolver {
        &self.inner
    }

    pub fn space(&self) -> &ParameterSpace {
        &self.space
    }

    pub fn solver_config(&self) -> &SolverConfig {
        &self.solver
    }

    pub fn dofs(&self) -> &DofMap {
        &self.dofs
    }

    pub fn theta_a(&self, mu: &Parameter) -> Vec<f64> {
        self.operator.coefficients(mu)
    }

    pub fn theta_f(&self, mu: &Parameter) -> Vec<f64> {
        self.rhs.coefficients(mu)
    }

    pub fn coercivity_fn(&self) -> CoercivityBound {
        Arc::clone(&self.coercivity)
    }

    pub fn coercivity_lower_bound(&self, mu: &Parameter) -> Result<f64> {
        let alpha = (self.coercivity)(mu)?;
        if !(alpha > 0.0) {
            return Err(RbError::NumericalBreakdown(format!(
                "non-positive coercivity bound {alpha:e} at {mu}"
            )));
        }
        Ok(alpha)
    }
}
