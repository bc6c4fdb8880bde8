use super::sparse::{axpy, dot, CsrMatrix};
use crate::error::{invalid, RbError, Result};

/// A vector is dropped once its norm, relative to its norm on input, falls
/// below this value.
pub const DEFLATION_TOL: f64 = 1e-13;

/// A projection pass is repeated while it leaves less than this fraction of
/// the (normalized) vector.
pub const REITERATION_THRESHOLD: f64 = 0.1;

/// An `M`-orthonormal set of vectors together with their images `M v`.
///
/// Keeping the images makes every projection coefficient a plain dot
/// product, so extending the set by one vector costs one matrix-vector
/// product per projection pass.
#[derive(Debug, Clone, Default)]
pub struct OrthonormalSet {
    vectors: Vec<Vec<f64>>,
    images: Vec<Vec<f64>>,
    max_passes: usize,
}

impl OrthonormalSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Wraps vectors that are already `M`-orthonormal without touching them.
    pub fn from_orthonormal(m: &CsrMatrix, vectors: Vec<Vec<f64>>) -> Result<Self> {
        let images = vectors.iter().map(|v| m.mul_vec(v)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            vectors,
            images,
            max_passes: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn images(&self) -> &[Vec<f64>] {
        &self.images
    }

    /// Most projection passes any single pushed vector needed.
    pub fn max_passes(&self) -> usize {
        self.max_passes
    }

    pub fn into_vectors(self) -> Vec<Vec<f64>> {
        self.vectors
    }

    /// Appends `v` without orthonormalizing it.
    pub fn push_unchecked(&mut self, m: &CsrMatrix, v: Vec<f64>) -> Result<()> {
        let image = m.mul_vec(&v)?;
        self.vectors.push(v);
        self.images.push(image);
        Ok(())
    }

    /// Orthonormalizes `v` against the set and appends it.
    ///
    /// Normalizes, then repeats a modified Gram–Schmidt pass followed by
    /// renormalization until a pass keeps more than [`REITERATION_THRESHOLD`]
    /// of the vector. Returns the new index, or `None` when the vector was
    /// deflated as linearly dependent.
    pub fn push(&mut self, m: &CsrMatrix, mut v: Vec<f64>) -> Result<Option<usize>> {
        if v.len() != m.dim() {
            return Err(invalid(format!(
                "vector of length {} for dimension {}",
                v.len(),
                m.dim()
            )));
        }
        let mut image = m.mul_vec(&v)?;
        let norm = checked_norm(dot(&v, &image))?;
        if norm == 0.0 {
            return Ok(None);
        }
        scale(&mut v, &mut image, 1.0 / norm);

        let mut remaining = 1.0;
        let mut passes = 0;
        loop {
            passes += 1;
            for (q, q_image) in self.vectors.iter().zip(&self.images) {
                let c = dot(&v, q_image);
                axpy(-c, q, &mut v);
            }
            m.mul_vec_into(&v, &mut image);
            let new_norm = checked_norm(dot(&v, &image))?;
            remaining *= new_norm;
            if remaining < DEFLATION_TOL {
                self.max_passes = self.max_passes.max(passes);
                return Ok(None);
            }
            scale(&mut v, &mut image, 1.0 / new_norm);
            if new_norm > REITERATION_THRESHOLD {
                break;
            }
        }
        self.max_passes = self.max_passes.max(passes);
        self.vectors.push(v);
        self.images.push(image);
        Ok(Some(self.vectors.len() - 1))
    }
}

fn checked_norm(norm_sq: f64) -> Result<f64> {
    if norm_sq < 0.0 || norm_sq.is_nan() {
        return Err(RbError::NumericalBreakdown(format!(
            "negative squared norm {norm_sq:e}; inner-product matrix is not SPD"
        )));
    }
    Ok(norm_sq.sqrt())
}

fn scale(v: &mut [f64], image: &mut [f64], s: f64) {
    v.iter_mut().for_each(|x| *x *= s);
    image.iter_mut().for_each(|x| *x *= s);
}

/// Result of [`gram_schmidt_reiterated`].
#[derive(Debug, Clone)]
pub struct GramSchmidtOutput {
    pub vectors: Vec<Vec<f64>>,
    /// Input indices that produced an output vector, in output order.
    pub kept: Vec<usize>,
    /// Most projection passes spent on one vector.
    pub max_passes: usize,
}

/// Gram–Schmidt with re-iteration in the `M`-inner product.
///
/// Vectors before `start_index` are assumed `M`-orthonormal already and are
/// passed through unchanged. Linearly dependent inputs are dropped and
/// missing from `kept`.
pub fn gram_schmidt_reiterated(vectors: &[Vec<f64>], m: &CsrMatrix, start_index: usize) -> Result<GramSchmidtOutput> {
    if vectors.is_empty() {
        return Err(invalid("no vectors to orthonormalize"));
    }
    if start_index > vectors.len() {
        return Err(invalid(format!(
            "start index {start_index} beyond {} vectors",
            vectors.len()
        )));
    }
    let mut set = OrthonormalSet::from_orthonormal(m, vectors[..start_index].to_vec())?;
    let mut kept: Vec<usize> = (0..start_index).collect();
    for (i, v) in vectors.iter().enumerate().skip(start_index) {
        if set.push(m, v.clone())?.is_some() {
            kept.push(i);
        }
    }
    let max_passes = set.max_passes();
    Ok(GramSchmidtOutput {
        vectors: set.into_vectors(),
        kept,
        max_passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linops::v_inner;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn max_gram_defect(m: &CsrMatrix, vs: &[Vec<f64>]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v_inner(m, a, b).unwrap() - target).abs());
            }
        }
        worst
    }

    #[test]
    fn orthonormal_input_passes_through() {
        let m = CsrMatrix::identity(3);
        let vs = vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]];
        let out = gram_schmidt_reiterated(&vs, &m, 0).unwrap();
        assert_eq!(out.vectors, vs);
        assert_eq!(out.kept, vec![0, 1]);
        assert_eq!(out.max_passes, 1);
    }

    #[test]
    fn repeated_vector_is_deflated() {
        let m = CsrMatrix::identity(2);
        let v = vec![3.0, 4.0];
        let out = gram_schmidt_reiterated(&[v.clone(), v], &m, 0).unwrap();
        assert_eq!(out.kept, vec![0]);
        assert_eq!(out.vectors.len(), 1);
    }

    #[test]
    fn zero_vector_is_deflated() {
        let m = CsrMatrix::identity(2);
        let out = gram_schmidt_reiterated(&[vec![0.0, 0.0], vec![0.0, 2.0]], &m, 0).unwrap();
        assert_eq!(out.kept, vec![1]);
        assert_eq!(out.vectors, vec![vec![0.0, 1.0]]);
    }

    #[test]
    fn euclidean_hand_example() {
        let m = CsrMatrix::identity(2);
        let out = gram_schmidt_reiterated(&[vec![1.0, 0.0], vec![1.0, 1.0]], &m, 0).unwrap();
        assert_eq!(out.vectors, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn start_index_leaves_prefix_untouched() {
        let m = CsrMatrix::identity(3);
        let prefix = vec![0.6, 0.8, 0.0];
        let out = gram_schmidt_reiterated(&[prefix.clone(), vec![1.0, 1.0, 1.0]], &m, 1).unwrap();
        assert_eq!(out.vectors[0], prefix);
        assert_eq!(out.kept, vec![0, 1]);
        assert!(max_gram_defect(&m, &out.vectors) < 1e-15);
    }

    #[test]
    fn indefinite_matrix_is_a_breakdown() {
        let m = CsrMatrix::from_dense(&[vec![-1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            gram_schmidt_reiterated(&[vec![1.0, 0.0]], &m, 0),
            Err(RbError::NumericalBreakdown(_))
        ));
    }

    #[test]
    fn nearly_dependent_random_vectors_reach_machine_orthonormality() {
        // Columns of a Vandermonde-like matrix on [0, 1]: severely ill-conditioned.
        let n = 50;
        let vs: Vec<Vec<f64>> = (0..10)
            .map(|k| (0..n).map(|i| (i as f64 / n as f64).powi(k)).collect())
            .collect();
        let m = CsrMatrix::identity(n);
        let out = gram_schmidt_reiterated(&vs, &m, 0).unwrap();
        assert_eq!(out.kept.len(), 10);
        assert!(max_gram_defect(&m, &out.vectors) <= 1e-13);
        assert!(out.max_passes >= 2 && out.max_passes <= 10);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let random: Vec<Vec<f64>> = (0..10)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let out = gram_schmidt_reiterated(&random, &m, 0).unwrap();
        assert!(max_gram_defect(&m, &out.vectors) <= 1e-13);
    }
}
