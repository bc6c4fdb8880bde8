use crate::error::{invalid, Result};
use crate::linops::{axpy, CsrMatrix, OrthonormalSet};

/// `V`-orthonormal basis of the reduced space.
#[derive(Debug, Clone, Default)]
pub struct ReducedBasis {
    set: OrthonormalSet,
}

impl ReducedBasis {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adopts vectors that are already `M`-orthonormal.
    pub fn from_orthonormal(m: &CsrMatrix, vectors: Vec<Vec<f64>>) -> Result<Self> {
        Ok(Self {
            set: OrthonormalSet::from_orthonormal(m, vectors)?,
        })
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        self.set.vectors()
    }

    /// Most Gram–Schmidt passes any snapshot needed.
    pub fn max_passes(&self) -> usize {
        self.set.max_passes()
    }

    /// Orthonormalizes `snapshot` against the basis and appends it. Returns
    /// `true` when the snapshot was deflated and the basis left unchanged.
    pub fn extend(&mut self, m: &CsrMatrix, snapshot: Vec<f64>) -> Result<bool> {
        Ok(self.set.push(m, snapshot)?.is_none())
    }

    /// Appends `psi` as is; the caller guarantees orthonormality.
    pub fn push_orthonormal(&mut self, m: &CsrMatrix, psi: Vec<f64>) -> Result<()> {
        self.set.push_unchecked(m, psi)
    }

    /// The first `n` basis vectors, spanning the `n`-th nested space.
    pub fn truncated(&self, m: &CsrMatrix, n: usize) -> Result<Self> {
        Self::from_orthonormal(m, self.vectors()[..n.min(self.len())].to_vec())
    }

    /// `Σ_i c_i ψ̃_i`. Empty for an empty basis; see [`Self::reconstruct_in`].
    pub fn reconstruct(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        self.reconstruct_in(self.vectors().first().map_or(0, Vec::len), coeffs)
    }

    /// `Σ_i c_i ψ̃_i` as a vector of length `dim`, which also covers the empty basis.
    pub fn reconstruct_in(&self, dim: usize, coeffs: &[f64]) -> Result<Vec<f64>> {
        if coeffs.len() != self.len() {
            return Err(invalid(format!(
                "{} coefficients for a basis of size {}",
                coeffs.len(),
                self.len()
            )));
        }
        if self.vectors().iter().any(|v| v.len() != dim) {
            return Err(invalid(format!("basis vectors do not have length {dim}")));
        }
        let mut u = vec![0.0; dim];
        for (c, psi) in coeffs.iter().zip(self.vectors()) {
            axpy(*c, psi, &mut u);
        }
        Ok(u)
    }
}

/// Extends `basis` by `snapshot`; the flag reports deflation.
pub fn extend_basis(mut basis: ReducedBasis, snapshot: Vec<f64>, m: &CsrMatrix) -> Result<(ReducedBasis, bool)> {
    let deflated = basis.extend(m, snapshot)?;
    Ok((basis, deflated))
}
