use nalgebra::{DMatrix, DVector};

use super::basis::ReducedBasis;
use crate::error::{RbError, Result};
use crate::estimators::{
    estimate_stable, estimate_traditional, residual_coefficients, OfflineData, StableEstimatorData, TradEstimatorData,
};
use crate::linops::{dot, norm2, SpdSolver};
use crate::model::{CoercivityBound, HighDimModel, Parameter, Theta};

/// Denominators below this value switch relative quantities to absolute ones.
pub const RELATIVE_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorKind {
    /// Orthonormal residual-space expansion.
    Stable,
    /// Gram-matrix expansion.
    Traditional,
}

/// Solves the high-dimensional problem `A(μ) u = f(μ)`.
pub fn solve_high_dim(model: &HighDimModel, mu: &Parameter) -> Result<Vec<f64>> {
    model.space().check(mu)?;
    let a = model.operator().assemble(mu)?;
    let f = model.rhs().assemble(mu);
    SpdSolver::new(a, *model.solver_config())?.solve(&f)
}

/// Galerkin projection of a [`HighDimModel`] plus the online data of both
/// estimators. Holds nothing whose size depends on the high dimension.
#[derive(Clone)]
pub struct ReducedModel {
    pub a_red: Vec<DMatrix<f64>>,
    pub f_red: Vec<DVector<f64>>,
    pub trad: TradEstimatorData,
    pub stable: StableEstimatorData,
    theta_a: Vec<Theta>,
    theta_f: Vec<Theta>,
    coercivity: CoercivityBound,
}

impl std::fmt::Debug for ReducedModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReducedModel")
            .field("basis_size", &self.basis_size())
            .field("n_eta", &self.trad.n_eta())
            .field("residual_rank", &self.stable.rank())
            .finish()
    }
}

/// One online error estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorEstimate {
    pub coeffs: Vec<f64>,
    /// Estimated dual norm of the residual.
    pub residual_norm: f64,
    /// `residual_norm / α_LB(μ)`.
    pub bound: f64,
    /// `bound / ‖ũ_μ‖_V`, or `bound` when the reduced solution vanishes.
    pub relative_bound: f64,
}

impl ReducedModel {
    pub fn basis_size(&self) -> usize {
        self.a_red.first().map_or(0, |a| a.nrows())
    }

    pub fn theta_a(&self, mu: &Parameter) -> Vec<f64> {
        self.theta_a.iter().map(|t| t(mu)).collect()
    }

    pub fn theta_f(&self, mu: &Parameter) -> Vec<f64> {
        self.theta_f.iter().map(|t| t(mu)).collect()
    }

    pub fn coercivity_lower_bound(&self, mu: &Parameter) -> Result<f64> {
        (self.coercivity)(mu)
    }

    /// Reduced solve followed by the selected residual-norm evaluation.
    pub fn error_estimate(&self, mu: &Parameter, kind: EstimatorKind) -> Result<ErrorEstimate> {
        let coeffs = solve_reduced(self, mu)?;
        let alpha = residual_coefficients(self, mu, &coeffs)?;
        let residual_norm = match kind {
            EstimatorKind::Stable => estimate_stable(&self.stable, &alpha),
            EstimatorKind::Traditional => estimate_traditional(&self.trad, &alpha),
        };
        let bound = residual_norm / self.coercivity_lower_bound(mu)?;
        // the basis is V-orthonormal, so ‖ũ_μ‖_V is the Euclidean coefficient norm
        let u_norm = norm2(&coeffs);
        let relative_bound = if u_norm < RELATIVE_FLOOR { bound } else { bound / u_norm };
        Ok(ErrorEstimate {
            coeffs,
            residual_norm,
            bound,
            relative_bound,
        })
    }
}

/// Solves `Ã(μ) ũ = f̃(μ)` by dense Cholesky factorization.
pub fn solve_reduced(rmodel: &ReducedModel, mu: &Parameter) -> Result<Vec<f64>> {
    let n = rmodel.basis_size();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = DMatrix::zeros(n, n);
    for (t, aq) in rmodel.theta_a(mu).into_iter().zip(&rmodel.a_red) {
        a += aq * t;
    }
    let mut f = DVector::zeros(n);
    for (t, fq) in rmodel.theta_f(mu).into_iter().zip(&rmodel.f_red) {
        f += fq * t;
    }
    let chol = a
        .cholesky()
        .ok_or_else(|| RbError::NumericalBreakdown(format!("reduced system at {mu} is not positive definite")))?;
    Ok(chol.solve(&f).iter().copied().collect())
}

/// Offline builder that keeps a reduced basis, its Galerkin projection and
/// both estimators' data in sync as the basis grows.
pub struct Reductor<'a> {
    model: &'a HighDimModel,
    basis: ReducedBasis,
    offline: OfflineData,
    rmodel: ReducedModel,
}

impl<'a> Reductor<'a> {
    pub fn new(model: &'a HighDimModel) -> Result<Self> {
        let offline = OfflineData::new(model)?;
        let rmodel = ReducedModel {
            a_red: vec![DMatrix::zeros(0, 0); model.q_a()],
            f_red: vec![DVector::zeros(0); model.q_f()],
            trad: offline.trad().clone(),
            stable: offline.stable().clone(),
            theta_a: model.operator().thetas.clone(),
            theta_f: model.rhs().thetas.clone(),
            coercivity: model.coercivity_fn(),
        };
        Ok(Self {
            model,
            basis: ReducedBasis::new(),
            offline,
            rmodel,
        })
    }

    /// Reduces onto an existing, already orthonormal basis.
    pub fn from_basis(model: &'a HighDimModel, basis: &ReducedBasis) -> Result<Self> {
        let mut r = Self::new(model)?;
        for psi in basis.vectors() {
            r.push_orthonormal(psi.clone())?;
        }
        Ok(r)
    }

    /// Orthonormalizes and appends `snapshot`; returns `true` if it was deflated.
    pub fn extend(&mut self, snapshot: Vec<f64>) -> Result<bool> {
        if self.basis.extend(self.model.inner_product(), snapshot)? {
            return Ok(true);
        }
        self.update_for_last_vector()?;
        Ok(false)
    }

    /// Appends a vector known to be orthonormal to the current basis.
    pub fn push_orthonormal(&mut self, psi: Vec<f64>) -> Result<()> {
        self.basis.push_orthonormal(self.model.inner_product(), psi)?;
        self.update_for_last_vector()
    }

    fn update_for_last_vector(&mut self) -> Result<()> {
        let n = self.basis.len();
        let psi = &self.basis.vectors()[n - 1];
        for (a_full, a_red) in self.model.operator().components.iter().zip(&mut self.rmodel.a_red) {
            let a_psi = a_full.mul_vec(psi)?;
            a_red.resize_mut(n, n, 0.0);
            for (j, psi_j) in self.basis.vectors().iter().enumerate() {
                let v = dot(psi_j, &a_psi);
                a_red[(n - 1, j)] = v;
                a_red[(j, n - 1)] = v;
            }
        }
        for (f_full, f_red) in self.model.rhs().components.iter().zip(&mut self.rmodel.f_red) {
            let mut grown = DVector::zeros(n);
            grown.rows_mut(0, n - 1).copy_from(f_red);
            grown[n - 1] = dot(f_full, psi);
            *f_red = grown;
        }
        self.offline.push_basis_vector(self.model, psi)?;
        self.rmodel.trad = self.offline.trad().clone();
        self.rmodel.stable = self.offline.stable().clone();
        Ok(())
    }

    pub fn model(&self) -> &HighDimModel {
        self.model
    }

    pub fn basis(&self) -> &ReducedBasis {
        &self.basis
    }

    pub fn offline(&self) -> &OfflineData {
        &self.offline
    }

    pub fn reduced_model(&self) -> &ReducedModel {
        &self.rmodel
    }

    pub fn into_parts(self) -> (ReducedBasis, ReducedModel) {
        (self.basis, self.rmodel)
    }
}

/// Galerkin projection of `model` onto `basis`, including estimator data.
pub fn project(model: &HighDimModel, basis: &ReducedBasis) -> Result<ReducedModel> {
    Ok(Reductor::from_basis(model, basis)?.into_parts().1)
}
