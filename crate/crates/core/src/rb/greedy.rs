use rayon::prelude::*;

use super::basis::ReducedBasis;
use super::reduced::{solve_high_dim, EstimatorKind, ReducedModel, Reductor};
use crate::error::{invalid, RbError, Result};
use crate::fem::THERMAL_BLOCK_RANGE;
use crate::model::{HighDimModel, Parameter};

/// One basis extension of the weak greedy loop.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyStep {
    /// Basis size after the extension.
    pub basis_size: usize,
    /// Largest relative error bound over the training set before the extension.
    pub max_bound: f64,
    pub selected_index: usize,
    pub selected: Parameter,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    /// Largest estimated error fell to the tolerance.
    Tolerance,
    /// Basis reached the size limit.
    MaxSize,
    /// The snapshot at the selected training parameter already lies in the
    /// reduced space, so the basis cannot grow.
    Stagnated { selected_index: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyLog {
    pub steps: Vec<GreedyStep>,
    /// Largest relative error bound over the training set for the final basis.
    pub final_max_bound: f64,
    pub termination: Termination,
}

impl GreedyLog {
    pub fn selected_indices(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.selected_index).collect()
    }
}

/// Tensor grid with `points_per_axis` equidistant values per component of
/// the thermal block parameter box, endpoints included. The last component
/// varies fastest.
pub fn make_train_set(points_per_axis: usize) -> Result<Vec<Parameter>> {
    if points_per_axis < 2 {
        return Err(invalid("training grid needs at least two points per axis"));
    }
    let (lo, hi) = THERMAL_BLOCK_RANGE;
    let axis: Vec<f64> = (0..points_per_axis)
        .map(|k| lo + (hi - lo) * k as f64 / (points_per_axis - 1) as f64)
        .collect();
    let p = points_per_axis;
    Ok((0..p.pow(4))
        .map(|idx| {
            Parameter::new(vec![
                axis[idx / (p * p * p)],
                axis[(idx / (p * p)) % p],
                axis[(idx / p) % p],
                axis[idx % p],
            ])
        })
        .collect())
}

fn max_relative_bound(rmodel: &ReducedModel, train_set: &[Parameter], kind: EstimatorKind) -> Result<(usize, f64)> {
    let bounds = train_set
        .par_iter()
        .map(|mu| rmodel.error_estimate(mu, kind).map(|e| e.relative_bound))
        .collect::<Result<Vec<_>>>()?;
    let mut best = (0, bounds[0]);
    for (i, &b) in bounds.iter().enumerate() {
        if b.is_nan() {
            return Err(RbError::NumericalBreakdown(format!(
                "error estimate is NaN at {}",
                train_set[i]
            )));
        }
        // strict comparison keeps the lowest index among ties
        if b > best.1 {
            best = (i, b);
        }
    }
    Ok(best)
}

/// Weak greedy basis generation.
///
/// Each round evaluates the relative error bound of the chosen estimator on
/// the whole training set, stops once the maximum is at most `tol` or the
/// basis has `max_size` vectors, and otherwise adds the high-dimensional
/// solution at the maximizing parameter.
pub fn weak_greedy(
    model: &HighDimModel,
    train_set: &[Parameter],
    tol: f64,
    max_size: usize,
    kind: EstimatorKind,
) -> Result<(ReducedBasis, ReducedModel, GreedyLog)> {
    if train_set.is_empty() {
        return Err(invalid("empty training set"));
    }
    if !(tol >= 0.0) {
        return Err(invalid(format!("greedy tolerance {tol} must be non-negative")));
    }
    for mu in train_set {
        model.space().check(mu)?;
    }

    let mut reductor = Reductor::new(model)?;
    let mut steps = Vec::new();
    let (final_max_bound, termination) = loop {
        let (index, max_bound) = max_relative_bound(reductor.reduced_model(), train_set, kind)?;
        if max_bound <= tol {
            break (max_bound, Termination::Tolerance);
        }
        if reductor.basis().len() >= max_size {
            break (max_bound, Termination::MaxSize);
        }
        let mu = &train_set[index];
        let snapshot = solve_high_dim(model, mu)?;
        if reductor.extend(snapshot)? {
            break (max_bound, Termination::Stagnated { selected_index: index });
        }
        steps.push(GreedyStep {
            basis_size: reductor.basis().len(),
            max_bound,
            selected_index: index,
            selected: mu.clone(),
        });
    };
    let (basis, rmodel) = reductor.into_parts();
    Ok((
        basis,
        rmodel,
        GreedyLog {
            steps,
            final_max_bound,
            termination,
        },
    ))
}
