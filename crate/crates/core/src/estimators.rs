//! Residual-based a posteriori error estimation.
//!
//! With `ũ_μ = Σ_i c_i ψ̃_i` the Riesz representative of the residual is a
//! linear combination `Σ_k α_k η_k` of parameter-independent vectors
//!
//! - `η_k = R(f^q)` for the right-hand side terms, followed by
//! - `η_k = R(a^q(ψ̃_i, ·))` for each basis vector `i`, then each operator
//!   term `q` (basis-major so that growing the basis only appends rows),
//!
//! with `α_k = θ_f^q(μ)` and `α_k = -θ_a^q(μ) c_i` respectively.
//!
//! Two online evaluations of `‖Σ_k α_k η_k‖_V` are offered:
//!
//! - [`estimate_traditional`] expands the square through the Gram matrix
//!   `G_kl = (η_k, η_l)_V`. Cancellation between the `O(1)` terms of the sum
//!   limits its accuracy to about `√ε` relative to the largest term.
//! - [`estimate_stable`] expands each `η_k` in a `V`-orthonormal basis
//!   `ψ^η_i` of `span{η_k}`, accumulates the coefficient vector `Ēᵀα` and
//!   only then takes its Euclidean norm. It stays accurate down to `ε`.
//!
//! Both online routines only see `N_η`-sized data.

use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::linops::{dot, norm2, OrthonormalSet};
use crate::model::{HighDimModel, Parameter};
use crate::rb::{ReducedBasis, ReducedModel};

/// Riesz representative of the functional `g`: the solution of `M_V x = g`.
pub fn riesz(model: &HighDimModel, g: &[f64]) -> Result<Vec<f64>> {
    model.riesz_solver().solve(g)
}

/// The vectors `η_k` and their images `M_V η_k`.
#[derive(Debug, Clone, Default)]
pub struct ResidualVectors {
    pub eta: Vec<Vec<f64>>,
    pub images: Vec<Vec<f64>>,
}

impl ResidualVectors {
    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }

    /// `max_k ‖η_k‖_V`.
    pub fn max_norm(&self) -> f64 {
        self.eta
            .iter()
            .zip(&self.images)
            .map(|(e, im)| dot(e, im).max(0.0).sqrt())
            .fold(0.0, f64::max)
    }
}

/// Gram matrix of the residual vectors.
#[derive(Debug, Clone)]
pub struct TradEstimatorData {
    pub gram: DMatrix<f64>,
}

/// Coefficients `Ē_ki = (η_k, ψ^η_i)_V` of the residual vectors in an
/// orthonormal basis of their span. `N_η x m`, with `m` the numerical rank.
#[derive(Debug, Clone)]
pub struct StableEstimatorData {
    pub e_bar: DMatrix<f64>,
}

impl TradEstimatorData {
    pub fn n_eta(&self) -> usize {
        self.gram.nrows()
    }
}

impl StableEstimatorData {
    pub fn n_eta(&self) -> usize {
        self.e_bar.nrows()
    }

    pub fn rank(&self) -> usize {
        self.e_bar.ncols()
    }
}

/// Offline state of both estimators, extended one basis vector at a time.
#[derive(Debug, Clone)]
pub struct OfflineData {
    residuals: ResidualVectors,
    psi_eta: OrthonormalSet,
    trad: TradEstimatorData,
    stable: StableEstimatorData,
}

impl OfflineData {
    /// Data for the empty reduced space: one `η` per right-hand side term.
    pub fn new(model: &HighDimModel) -> Result<Self> {
        let mut data = Self {
            residuals: ResidualVectors::default(),
            psi_eta: OrthonormalSet::new(),
            trad: TradEstimatorData {
                gram: DMatrix::zeros(0, 0),
            },
            stable: StableEstimatorData {
                e_bar: DMatrix::zeros(0, 0),
            },
        };
        for f in &model.rhs().components {
            data.push_functional(model, f)?;
        }
        Ok(data)
    }

    /// Appends the `Q_a` residual vectors `R(A_q ψ)` for a new basis vector.
    pub fn push_basis_vector(&mut self, model: &HighDimModel, psi: &[f64]) -> Result<()> {
        for a in &model.operator().components {
            let g = a.mul_vec(psi)?;
            self.push_functional(model, &g)?;
        }
        Ok(())
    }

    fn push_functional(&mut self, model: &HighDimModel, g: &[f64]) -> Result<()> {
        let m = model.inner_product();
        let eta = riesz(model, g)?;
        let image = m.mul_vec(&eta)?;

        let k = self.residuals.len();
        self.trad.gram.resize_mut(k + 1, k + 1, 0.0);
        for l in 0..k {
            let g_kl = dot(&eta, &self.residuals.images[l]);
            self.trad.gram[(k, l)] = g_kl;
            self.trad.gram[(l, k)] = g_kl;
        }
        self.trad.gram[(k, k)] = dot(&eta, &image);

        let rank_before = self.psi_eta.len();
        self.psi_eta.push(m, eta.clone())?;
        self.residuals.eta.push(eta);
        self.residuals.images.push(image);

        let rank = self.psi_eta.len();
        self.stable.e_bar.resize_mut(k + 1, rank, 0.0);
        let psi_images = self.psi_eta.images();
        for i in 0..rank {
            self.stable.e_bar[(k, i)] = dot(&self.residuals.eta[k], &psi_images[i]);
        }
        for i in rank_before..rank {
            for l in 0..k {
                self.stable.e_bar[(l, i)] = dot(&self.residuals.eta[l], &psi_images[i]);
            }
        }
        Ok(())
    }

    pub fn residual_vectors(&self) -> &ResidualVectors {
        &self.residuals
    }

    /// The orthonormal basis `ψ^η` of the residual space.
    pub fn residual_basis(&self) -> &OrthonormalSet {
        &self.psi_eta
    }

    pub fn trad(&self) -> &TradEstimatorData {
        &self.trad
    }

    pub fn stable(&self) -> &StableEstimatorData {
        &self.stable
    }

    pub fn n_eta(&self) -> usize {
        self.residuals.len()
    }
}

/// Builds both estimators' offline data for `basis` from scratch.
pub fn build_offline_data(model: &HighDimModel, basis: &ReducedBasis) -> Result<OfflineData> {
    let mut data = OfflineData::new(model)?;
    for psi in basis.vectors() {
        data.push_basis_vector(model, psi)?;
    }
    Ok(data)
}

/// `α` such that the Riesz representative of the residual of `ũ_μ` is `Σ_k α_k η_k`.
pub fn residual_coefficients(rmodel: &ReducedModel, mu: &Parameter, u_coeffs: &[f64]) -> Result<Vec<f64>> {
    if u_coeffs.len() != rmodel.basis_size() {
        return Err(invalid(format!(
            "{} reduced coefficients for a basis of size {}",
            u_coeffs.len(),
            rmodel.basis_size()
        )));
    }
    let theta_a = rmodel.theta_a(mu);
    let mut alpha = rmodel.theta_f(mu);
    alpha.reserve(theta_a.len() * u_coeffs.len());
    for &c in u_coeffs {
        alpha.extend(theta_a.iter().map(|t| -t * c));
    }
    Ok(alpha)
}

/// `sqrt(αᵀ G α)`, clamped at zero when round-off drives the sum negative.
pub fn estimate_traditional(data: &TradEstimatorData, alpha: &[f64]) -> f64 {
    assert_eq!(alpha.len(), data.n_eta(), "coefficient vector does not match N_eta");
    let g = &data.gram;
    let mut sum = 0.0;
    for (k, &ak) in alpha.iter().enumerate() {
        for (l, &al) in alpha.iter().enumerate() {
            sum += ak * al * g[(k, l)];
        }
    }
    sum.max(0.0).sqrt()
}

/// `‖Ēᵀα‖₂`.
pub fn estimate_stable(data: &StableEstimatorData, alpha: &[f64]) -> f64 {
    assert_eq!(alpha.len(), data.n_eta(), "coefficient vector does not match N_eta");
    let e = &data.e_bar;
    let coeffs: Vec<f64> = (0..e.ncols())
        .map(|i| alpha.iter().enumerate().map(|(k, &ak)| ak * e[(k, i)]).sum())
        .collect();
    norm2(&coeffs)
}

/// `‖R(f_μ - a_μ(ũ_μ, ·))‖_V` evaluated directly in the high-dimensional space.
pub fn hd_residual_norm_oracle(
    model: &HighDimModel,
    basis: &ReducedBasis,
    mu: &Parameter,
    u_coeffs: &[f64],
) -> Result<f64> {
    let u = basis.reconstruct_in(model.dim(), u_coeffs)?;
    let a = model.operator().assemble(mu)?;
    let au = a.mul_vec(&u)?;
    let mut r = model.rhs().assemble(mu);
    for (ri, ai) in r.iter_mut().zip(&au) {
        *ri -= ai;
    }
    let rho = riesz(model, &r)?;
    let m_rho = model.inner_product().mul_vec(&rho)?;
    Ok(dot(&rho, &m_rho).max(0.0).sqrt())
}

/// Upper bound `estimate / α_LB(μ)` for the error in the `V`-norm.
pub fn error_bound(model: &HighDimModel, estimate: f64, mu: &Parameter) -> Result<f64> {
    if !(estimate >= 0.0) {
        return Err(invalid(format!("negative residual norm estimate {estimate:e}")));
    }
    Ok(estimate / model.coercivity_lower_bound(mu)?)
}
