use crate::error::{invalid, Result};

/// Square sparse matrix in compressed sparse row layout.
///
/// Column indices within each row are sorted and unique. Explicit zeros are
/// kept, so matrices assembled over the same mesh share one pattern and can be
/// combined value-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds an `n x n` matrix from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(r, c, v) in triplets {
            if r >= n || c >= n {
                return Err(invalid(format!("triplet ({r}, {c}) out of bounds for dimension {n}")));
            }
            rows[r].push((c, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut last: Option<usize> = None;
            for (c, v) in row {
                if last == Some(c) {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                    last = Some(c);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            n,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut triplets = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(invalid("dense matrix is not square"));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, &triplets)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterates over the stored `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[span.clone()].binary_search(&j) {
            Ok(pos) => self.values[span.start + pos],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Largest `|i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        (0..self.n)
            .flat_map(|i| self.row(i).map(move |(j, _)| i.abs_diff(j)))
            .max()
            .unwrap_or(0)
    }

    /// `y = A x` without dimension checks.
    pub(crate) fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *yi = acc;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(invalid(format!(
                "vector of length {} applied to matrix of dimension {}",
                x.len(),
                self.n
            )));
        }
        let mut y = vec![0.0; self.n];
        self.mul_vec_into(x, &mut y);
        Ok(y)
    }

    /// `b - A x` with each row accumulated in compensated arithmetic, so the
    /// result is accurate to about one rounding of its own magnitude even
    /// under heavy cancellation.
    pub(crate) fn residual_compensated(&self, x: &[f64], b: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let (mut sum, mut err) = (b[i], 0.0);
                for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                    let p = -self.values[k] * x[self.col_idx[k]];
                    let p_err = (-self.values[k]).mul_add(x[self.col_idx[k]], -p);
                    let t = sum + p;
                    let z = t - sum;
                    err += (sum - (t - z)) + (p - z) + p_err;
                    sum = t;
                }
                sum + err
            })
            .collect()
    }

    pub fn same_pattern(&self, other: &CsrMatrix) -> bool {
        self.n == other.n && self.row_ptr == other.row_ptr && self.col_idx == other.col_idx
    }

    /// `Σ coeffs[q] * mats[q]` for matrices sharing one sparsity pattern.
    pub fn linear_combination(coeffs: &[f64], mats: &[CsrMatrix]) -> Result<CsrMatrix> {
        if coeffs.len() != mats.len() || mats.is_empty() {
            return Err(invalid("linear combination needs one coefficient per matrix"));
        }
        let first = &mats[0];
        if !mats.iter().all(|m| m.same_pattern(first)) {
            return Err(invalid("linear combination requires a shared sparsity pattern"));
        }
        let mut values = vec![0.0; first.values.len()];
        for (c, m) in coeffs.iter().zip(mats) {
            for (v, mv) in values.iter_mut().zip(&m.values) {
                *v += c * mv;
            }
        }
        Ok(CsrMatrix {
            values,
            ..first.clone()
        })
    }

    /// Largest `|A_ij - A_ji|` over all stored entries.
    pub fn symmetry_defect(&self) -> f64 {
        (0..self.n)
            .flat_map(|i| self.row(i).map(move |(j, v)| (v - self.get(j, i)).abs()))
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.n]; self.n];
        for (i, row) in dense.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        dense
    }
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed() {
        let m = CsrMatrix::from_triplets(2, &[(0, 0, 1.0), (0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]).unwrap();
        assert_eq!(m.get(0, 0), 3.0);
        assert_eq!(m.get(1, 1), 0.0);
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.symmetry_defect(), 0.0);
        assert_eq!(m.mul_vec(&[1.0, 2.0]).unwrap(), vec![1.0, -1.0]);
    }

    #[test]
    fn out_of_bounds_triplet_rejected() {
        assert!(CsrMatrix::from_triplets(2, &[(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn mismatched_patterns_do_not_combine() {
        let a = CsrMatrix::identity(2);
        let b = CsrMatrix::from_dense(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(CsrMatrix::linear_combination(&[1.0, 1.0], &[a.clone(), b]).is_err());
        let c = CsrMatrix::linear_combination(&[2.0, 3.0], &[a.clone(), a]).unwrap();
        assert_eq!(c.get(1, 1), 5.0);
    }

    #[test]
    fn compensated_residual_survives_cancellation() {
        let m = CsrMatrix::from_dense(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let x = [1e16, -1e16 + 2.0];
        // row 0: 1 - (1e16 + (-1e16 + 2)) = -1 exactly; naive summation loses it
        let r = m.residual_compensated(&x, &[1.0, 0.0]);
        assert_eq!(r[0], -1.0);
    }

    #[test]
    fn bandwidth_of_tridiagonal() {
        let m = CsrMatrix::from_triplets(3, &[(0, 1, 1.0), (1, 0, 1.0), (2, 2, 1.0)]).unwrap();
        assert_eq!(m.bandwidth(), 1);
    }
}
