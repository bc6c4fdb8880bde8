use super::sparse::{axpy, dot, norm2, CsrMatrix};
use crate::error::{invalid, RbError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    /// Banded Cholesky factorization followed by iterative refinement.
    Cholesky,
    /// Jacobi-preconditioned conjugate gradient.
    ConjugateGradient,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub kind: SolverKind,
    /// Relative residual target `‖Mx - b‖ / ‖b‖` of CG. The direct path
    /// always refines to working accuracy.
    pub tol: f64,
    /// Iteration cap for CG. `None` uses `50·√N + 1000`.
    pub max_iter: Option<usize>,
    /// Most refinement sweeps applied after a Cholesky solve.
    pub refinement_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            kind: SolverKind::Cholesky,
            tol: 1e-14,
            max_iter: None,
            refinement_steps: 3,
        }
    }
}

impl SolverConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_kind(mut self, kind: SolverKind) -> Self {
        self.kind = kind;
        self
    }

    fn iteration_cap(&self, n: usize) -> usize {
        self.max_iter
            .unwrap_or_else(|| 50 * (n as f64).sqrt().ceil() as usize + 1000)
    }
}

/// Lower-triangular band factor `L` with `M = L Lᵀ`, stored row by row.
#[derive(Debug, Clone)]
struct BandCholesky {
    n: usize,
    bw: usize,
    // row i holds L[i][i-bw ..= i], left-padded with zeros near the top
    data: Vec<f64>,
}

impl BandCholesky {
    fn factor(m: &CsrMatrix) -> Result<Self> {
        let n = m.dim();
        let bw = m.bandwidth();
        let w = bw + 1;
        let mut data = vec![0.0; n * w];
        for i in 0..n {
            for (j, v) in m.row(i) {
                if j <= i {
                    data[i * w + (j + bw - i)] = v;
                }
            }
        }
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let k0 = lo.max(j.saturating_sub(bw));
                let mut s = data[i * w + (j + bw - i)];
                for k in k0..j {
                    s -= data[i * w + (k + bw - i)] * data[j * w + (k + bw - j)];
                }
                if i == j {
                    if !(s > 0.0) {
                        return Err(RbError::NumericalBreakdown(format!(
                            "matrix is not positive definite (pivot {s:e} at row {i})"
                        )));
                    }
                    data[i * w + bw] = s.sqrt();
                } else {
                    data[i * w + (j + bw - i)] = s / data[j * w + bw];
                }
            }
        }
        Ok(Self { n, bw, data })
    }

    fn solve_in_place(&self, x: &mut [f64]) {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let mut s = x[i];
            for k in lo..i {
                s -= self.data[i * w + (k + bw - i)] * x[k];
            }
            x[i] = s / self.data[i * w + bw];
        }
        for i in (0..n).rev() {
            let hi = (i + bw).min(n - 1);
            let mut s = x[i];
            for k in i + 1..=hi {
                s -= self.data[k * w + (i + bw - k)] * x[k];
            }
            x[i] = s / self.data[i * w + bw];
        }
    }
}

#[derive(Debug, Clone)]
enum Prepared {
    Cholesky(BandCholesky),
    Jacobi(Vec<f64>),
}

/// An SPD matrix prepared for repeated solves.
#[derive(Debug, Clone)]
pub struct SpdSolver {
    matrix: CsrMatrix,
    config: SolverConfig,
    prepared: Prepared,
}

impl SpdSolver {
    pub fn new(matrix: CsrMatrix, config: SolverConfig) -> Result<Self> {
        let diag = matrix.diagonal();
        if let Some(i) = diag.iter().position(|&d| !(d > 0.0)) {
            return Err(RbError::NumericalBreakdown(format!(
                "non-positive diagonal entry {:e} at row {i}",
                diag[i]
            )));
        }
        let prepared = match config.kind {
            SolverKind::Cholesky => Prepared::Cholesky(BandCholesky::factor(&matrix)?),
            SolverKind::ConjugateGradient => Prepared::Jacobi(diag.iter().map(|d| 1.0 / d).collect()),
        };
        Ok(Self {
            matrix,
            config,
            prepared,
        })
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.matrix.dim();
        if b.len() != n {
            return Err(invalid(format!(
                "right-hand side of length {} for dimension {n}",
                b.len()
            )));
        }
        let b_norm = norm2(b);
        if b_norm == 0.0 {
            return Ok(vec![0.0; n]);
        }
        match &self.prepared {
            Prepared::Cholesky(factor) => Ok(self.solve_direct(factor, b)),
            Prepared::Jacobi(inv_diag) => self.solve_cg(inv_diag, b, b_norm),
        }
    }

    // Refinement with compensated residuals drives the forward error towards
    // one rounding of x, independent of cond(M). Sweeps stop early once a
    // correction no longer changes x.
    fn solve_direct(&self, factor: &BandCholesky, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        factor.solve_in_place(&mut x);
        for _ in 0..self.config.refinement_steps {
            let mut d = self.matrix.residual_compensated(&x, b);
            factor.solve_in_place(&mut d);
            let x_norm = norm2(&x);
            let d_norm = norm2(&d);
            axpy(1.0, &d, &mut x);
            if d_norm <= f64::EPSILON * x_norm {
                break;
            }
        }
        x
    }

    fn solve_cg(&self, inv_diag: &[f64], b: &[f64], b_norm: f64) -> Result<Vec<f64>> {
        let n = b.len();
        let cap = self.config.iteration_cap(n);
        let target = self.config.tol * b_norm;
        let mut x = vec![0.0; n];
        let mut r = b.to_vec();
        let mut z: Vec<f64> = r.iter().zip(inv_diag).map(|(ri, di)| ri * di).collect();
        let mut p = z.clone();
        let mut ap = vec![0.0; n];
        let mut rz = dot(&r, &z);
        for it in 0..cap {
            if norm2(&r) <= target {
                return Ok(x);
            }
            self.matrix.mul_vec_into(&p, &mut ap);
            let pap = dot(&p, &ap);
            if !(pap > 0.0) {
                return Err(RbError::NumericalBreakdown(format!(
                    "CG search direction with non-positive curvature {pap:e} at iteration {it}"
                )));
            }
            let step = rz / pap;
            axpy(step, &p, &mut x);
            axpy(-step, &ap, &mut r);
            for ((zi, ri), di) in z.iter_mut().zip(&r).zip(inv_diag) {
                *zi = ri * di;
            }
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for (pi, zi) in p.iter_mut().zip(&z) {
                *pi = zi + beta * *pi;
            }
        }
        let achieved = norm2(&r) / b_norm;
        if achieved <= self.config.tol {
            Ok(x)
        } else {
            Err(RbError::SolverFailure {
                iterations: cap,
                residual: achieved,
            })
        }
    }
}

/// Solves `M x = b` for a sparse SPD `M`.
pub fn spd_solve(m: &CsrMatrix, b: &[f64], config: &SolverConfig) -> Result<Vec<f64>> {
    SpdSolver::new(m.clone(), *config)?.solve(b)
}

/// The `M`-inner product `xᵀ M y`.
pub fn v_inner(m: &CsrMatrix, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != m.dim() || y.len() != m.dim() {
        return Err(invalid(format!(
            "inner product of lengths {} and {} under matrix of dimension {}",
            x.len(),
            y.len(),
            m.dim()
        )));
    }
    let my = m.mul_vec(y)?;
    Ok(dot(x, &my))
}
