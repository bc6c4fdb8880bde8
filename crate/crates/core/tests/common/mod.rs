#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rb_stable::{assemble_thermal_block, build_mesh, CsrMatrix, HighDimModel, Parameter};

pub fn thermal_block(n: usize) -> HighDimModel {
    assemble_thermal_block(&build_mesh(n).unwrap()).unwrap()
}

pub fn dense(m: &CsrMatrix) -> DMatrix<f64> {
    let rows = m.to_dense();
    DMatrix::from_fn(m.dim(), m.dim(), |i, j| rows[i][j])
}

/// Dense LU solve, independent of the crate's banded factorization.
pub fn dense_solve(m: &CsrMatrix, b: &[f64]) -> Vec<f64> {
    let x = dense(m)
        .lu()
        .solve(&DVector::from_column_slice(b))
        .expect("singular matrix");
    x.iter().copied().collect()
}

pub fn m_inner(m: &CsrMatrix, x: &[f64], y: &[f64]) -> f64 {
    m.mul_vec(y).unwrap().iter().zip(x).map(|(a, b)| a * b).sum()
}

pub fn m_norm(m: &CsrMatrix, x: &[f64]) -> f64 {
    m_inner(m, x, x).max(0.0).sqrt()
}

pub fn random_parameters(count: usize, seed: u64) -> Vec<Parameter> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Parameter::new((0..4).map(|_| rng.gen_range(0.1..=1.0)).collect::<Vec<_>>()))
        .collect()
}

pub fn random_vectors(count: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}
