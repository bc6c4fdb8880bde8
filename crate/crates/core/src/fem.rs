//! Thermal block benchmark: `-div(σ_μ ∇u) = 1` on the unit square with
//! homogeneous Dirichlet conditions, where `σ_μ` is constant on each of the
//! four quadrants `[i/2, (i+1)/2] × [j/2, (j+1)/2]`.
//!
//! Discretized with P1 elements on a structured triangulation; parameter
//! component `q = 2i + j` scales quadrant `(i, j)`.

use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::linops::{CsrMatrix, SolverConfig};
use crate::model::{
    AffineFunctional, AffineOperator, CoercivityBound, DofMap, HighDimModel, Parameter, ParameterSpace, Theta,
};

pub const THERMAL_BLOCK_RANGE: (f64, f64) = (0.1, 1.0);

/// Uniform triangulation of `[0, 1]²` with `n` cells per axis, each cell cut
/// along its lower-left to upper-right diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub n: usize,
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
}

impl Mesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// Signed area; positive for every triangle of a valid mesh.
    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|v| self.vertices[v]);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }

    pub fn barycenter(&self, t: usize) -> [f64; 2] {
        let [a, b, c] = self.triangles[t].map(|v| self.vertices[v]);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        let (i, j) = (v % (self.n + 1), v / (self.n + 1));
        i == 0 || j == 0 || i == self.n || j == self.n
    }

    /// Quadrant index `2i + j` of the quadrant containing the barycenter of `t`.
    pub fn quadrant(&self, t: usize) -> usize {
        let [x, y] = self.barycenter(t);
        let i = usize::from(x >= 0.5);
        let j = usize::from(y >= 0.5);
        2 * i + j
    }

    pub fn dof_map(&self) -> DofMap {
        let (free, constrained) = (0..self.vertex_count()).partition(|&v| !self.is_boundary(v));
        DofMap {
            total: self.vertex_count(),
            free,
            constrained,
        }
    }
}

pub fn build_mesh(n: usize) -> Result<Mesh> {
    if n == 0 {
        return Err(invalid("mesh needs at least one cell per axis"));
    }
    let h = 1.0 / n as f64;
    let stride = n + 1;
    let vertices = (0..stride)
        .flat_map(|j| (0..stride).map(move |i| [i as f64 * h, j as f64 * h]))
        .collect();
    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let v00 = j * stride + i;
            let (v10, v01, v11) = (v00 + 1, v00 + stride, v00 + stride + 1);
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }
    Ok(Mesh { n, vertices, triangles })
}

fn element_stiffness(mesh: &Mesh, t: usize) -> [[f64; 3]; 3] {
    let [p0, p1, p2] = mesh.triangles[t].map(|v| mesh.vertices[v]);
    let b = [p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]];
    let c = [p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]];
    let denom = 4.0 * mesh.area(t);
    let mut k = [[0.0; 3]; 3];
    for a in 0..3 {
        for e in 0..3 {
            k[a][e] = (b[a] * b[e] + c[a] * c[e]) / denom;
        }
    }
    k
}

/// P1 stiffness matrix for the elementwise conductivity `sigma(t)`,
/// restricted to interior vertices.
///
/// Every element contributes to the pattern even where `sigma` vanishes, so
/// all matrices assembled on one mesh share their sparsity pattern.
pub fn assemble_stiffness(mesh: &Mesh, sigma: impl Fn(usize) -> f64) -> Result<CsrMatrix> {
    let dofs = mesh.dof_map();
    let mut global_to_free = vec![usize::MAX; mesh.vertex_count()];
    for (k, &v) in dofs.free.iter().enumerate() {
        global_to_free[v] = k;
    }
    let mut triplets = Vec::with_capacity(9 * mesh.triangle_count());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let s = sigma(t);
        let k = element_stiffness(mesh, t);
        for a in 0..3 {
            let ga = global_to_free[tri[a]];
            if ga == usize::MAX {
                continue;
            }
            for e in 0..3 {
                let ge = global_to_free[tri[e]];
                if ge != usize::MAX {
                    triplets.push((ga, ge, s * k[a][e]));
                }
            }
        }
    }
    CsrMatrix::from_triplets(dofs.free.len(), &triplets)
}

/// Load vector of the constant source 1 over all vertices, before Dirichlet
/// elimination.
pub fn full_load_vector(mesh: &Mesh) -> Vec<f64> {
    let mut f = vec![0.0; mesh.vertex_count()];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let share = mesh.area(t) / 3.0;
        for &v in tri {
            f[v] += share;
        }
    }
    f
}

/// Componentwise minimum of `μ`: a valid coercivity bound whenever the inner
/// product is `Σ_q A_q` and every `A_q` is positive semidefinite.
pub fn coercivity_lower_bound(mu: &Parameter) -> Result<f64> {
    if mu.is_empty() {
        return Err(invalid("empty parameter"));
    }
    if let Some(bad) = mu.0.iter().find(|&&c| !(c > 0.0)) {
        return Err(invalid(format!("non-positive conductivity {bad} in {mu}")));
    }
    Ok(mu.0.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Assembles the thermal block with the default solver configuration.
pub fn assemble_thermal_block(mesh: &Mesh) -> Result<HighDimModel> {
    assemble_thermal_block_with(mesh, SolverConfig::default())
}

pub fn assemble_thermal_block_with(mesh: &Mesh, solver: SolverConfig) -> Result<HighDimModel> {
    let blocks = (0..4)
        .map(|q| assemble_stiffness(mesh, |t| if mesh.quadrant(t) == q { 1.0 } else { 0.0 }))
        .collect::<Result<Vec<_>>>()?;
    let inner = CsrMatrix::linear_combination(&[1.0; 4], &blocks)?;
    let dofs = mesh.dof_map();
    let full = full_load_vector(mesh);
    let load: Vec<f64> = dofs.free.iter().map(|&v| full[v]).collect();

    let thetas_a: Vec<Theta> = (0..4)
        .map(|q| Arc::new(move |mu: &Parameter| mu.0[q]) as Theta)
        .collect();
    let theta_f: Theta = Arc::new(|_: &Parameter| 1.0);
    let coercivity: CoercivityBound = Arc::new(coercivity_lower_bound);

    let (lo, hi) = THERMAL_BLOCK_RANGE;
    let model = HighDimModel::new(
        AffineOperator {
            components: blocks,
            thetas: thetas_a,
        },
        AffineFunctional {
            components: vec![load],
            thetas: vec![theta_f],
        },
        inner,
        coercivity,
        ParameterSpace::cube(4, lo, hi),
        solver,
    )?;
    Ok(model.with_dofs(dofs))
}
