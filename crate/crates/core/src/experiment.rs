//! Estimator stability study on the thermal block.
//!
//! A weak greedy run builds nested reduced spaces `V_0 ⊂ V_1 ⊂ ...`. For
//! every basis size the reduced model is then evaluated on a fixed set of
//! random test parameters, recording the maximum relative true error and the
//! maximum relative error bound from both residual-norm evaluations.
//!
//! Test parameters are drawn i.i.d. uniform on `[0.1, 1]^4` from
//! `ChaCha8Rng::seed_from_u64(seed)` (crate `rand_chacha` 0.3), one
//! `rng.gen::<f64>()` per component in component order, mapped through
//! `0.1 + 0.9 * x`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::error::{invalid, RbError, Result};
use crate::fem::{assemble_thermal_block_with, build_mesh, THERMAL_BLOCK_RANGE};
use crate::linops::{dot, norm2, SolverConfig, SolverKind};
use crate::model::{HighDimModel, Parameter};
use crate::rb::{
    make_train_set, solve_high_dim, weak_greedy, EstimatorKind, GreedyLog, ReducedBasis, Reductor, RELATIVE_FLOOR,
};

/// Basis sizes reported in the efficiency table.
pub const EFFICIENCY_SIZES: [usize; 6] = [10, 15, 20, 25, 30, 35];

pub const CSV_HEADER: &str = "N,est_stable,est_trad,err";

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Cells per axis; must be even so no element straddles two quadrants.
    pub grid_n: usize,
    pub train_points_per_axis: usize,
    pub max_basis: usize,
    pub greedy_tol: f64,
    pub greedy_estimator: EstimatorKind,
    pub n_test_params: usize,
    pub rng_seed: u64,
    pub solver_tol: f64,
    pub solver_kind: SolverKind,
    pub output_path: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            grid_n: 100,
            train_points_per_axis: 5,
            max_basis: 35,
            greedy_tol: 0.0,
            greedy_estimator: EstimatorKind::Stable,
            n_test_params: 20,
            rng_seed: 0,
            solver_tol: 1e-14,
            solver_kind: SolverKind::Cholesky,
            output_path: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_n < 2 || !self.grid_n.is_multiple_of(2) {
            return Err(invalid(format!(
                "grid size {} must be even and at least 2",
                self.grid_n
            )));
        }
        if self.train_points_per_axis < 2 {
            return Err(invalid("training grid needs at least two points per axis"));
        }
        if self.max_basis < 1 {
            return Err(invalid("maximum basis size must be at least 1"));
        }
        if self.n_test_params < 1 {
            return Err(invalid("need at least one test parameter"));
        }
        if !(self.greedy_tol >= 0.0) {
            return Err(invalid("greedy tolerance must be non-negative"));
        }
        if !(self.solver_tol > 0.0) {
            return Err(invalid("solver tolerance must be positive"));
        }
        Ok(())
    }
}

/// Maxima over the test parameters for one basis size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultRow {
    pub n: usize,
    pub est_stable: f64,
    pub est_trad: f64,
    pub err: f64,
}

/// Absolute quantities at one test parameter and basis size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub bound_stable: f64,
    pub bound_trad: f64,
    pub err: f64,
    /// `‖u_μ‖_V` of the high-dimensional solution.
    pub solution_norm: f64,
    /// `‖ũ_μ‖_V` of the reduced solution.
    pub reduced_norm: f64,
}

impl PointResult {
    pub fn efficiency_stable(&self) -> f64 {
        self.err / self.bound_stable
    }

    pub fn efficiency_trad(&self) -> f64 {
        self.err / self.bound_trad
    }
}

/// Extremal efficiencies (true error / bound) at one basis size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyRow {
    pub n: usize,
    pub trad_max: f64,
    pub trad_min: f64,
    pub stable_max: f64,
    pub stable_min: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimings {
    pub assembly: Duration,
    pub greedy: Duration,
    pub evaluation: Duration,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub greedy_log: GreedyLog,
    pub test_parameters: Vec<Parameter>,
    pub rows: Vec<ResultRow>,
    /// `details[n][j]`: basis size `n`, test parameter `j`.
    pub details: Vec<Vec<PointResult>>,
    pub efficiencies: Vec<EfficiencyRow>,
    pub timings: PhaseTimings,
}

/// A failed run, carrying every row completed before the failure.
#[derive(Debug, Clone, Error)]
#[error("{error}")]
pub struct ExperimentFailure {
    pub rows: Vec<ResultRow>,
    pub error: RbError,
}

impl From<RbError> for ExperimentFailure {
    fn from(error: RbError) -> Self {
        Self {
            rows: Vec::new(),
            error,
        }
    }
}

pub fn sample_test_parameters(count: usize, seed: u64) -> Result<Vec<Parameter>> {
    if count == 0 {
        return Err(invalid("need at least one test parameter"));
    }
    let (lo, hi) = THERMAL_BLOCK_RANGE;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| Parameter::new((0..4).map(|_| lo + (hi - lo) * rng.gen::<f64>()).collect::<Vec<_>>()))
        .collect())
}

fn v_norm(model: &HighDimModel, v: &[f64]) -> f64 {
    let mv = model
        .inner_product()
        .mul_vec(v)
        .expect("dimension checked by construction");
    dot(v, &mv).max(0.0).sqrt()
}

/// Evaluates both bounds and the true error for every nested space of `basis`.
///
/// `solutions[j]` is the high-dimensional solution at `test_parameters[j]`.
pub fn evaluate_nested_spaces(
    model: &HighDimModel,
    basis: &ReducedBasis,
    test_parameters: &[Parameter],
    solutions: &[Vec<f64>],
) -> std::result::Result<(Vec<ResultRow>, Vec<Vec<PointResult>>), ExperimentFailure> {
    let mut rows = Vec::with_capacity(basis.len() + 1);
    let mut details = Vec::with_capacity(basis.len() + 1);
    let fail = |rows: &Vec<ResultRow>, error| ExperimentFailure {
        rows: rows.clone(),
        error,
    };
    let mut reductor = Reductor::new(model).map_err(|e| fail(&rows, e))?;
    for n in 0..=basis.len() {
        let rmodel = reductor.reduced_model();
        let current = reductor.basis();
        let points = test_parameters
            .par_iter()
            .zip(solutions)
            .map(|(mu, u)| -> Result<PointResult> {
                let stable = rmodel.error_estimate(mu, EstimatorKind::Stable)?;
                let trad = rmodel.error_estimate(mu, EstimatorKind::Traditional)?;
                let mut diff = current.reconstruct_in(model.dim(), &stable.coeffs)?;
                for (d, ui) in diff.iter_mut().zip(u) {
                    *d = ui - *d;
                }
                Ok(PointResult {
                    bound_stable: stable.bound,
                    bound_trad: trad.bound,
                    err: v_norm(model, &diff),
                    solution_norm: v_norm(model, u),
                    reduced_norm: norm2(&stable.coeffs),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map_err(|e| fail(&rows, e))?;

        let relative = |x: f64, denom: f64| if denom < RELATIVE_FLOOR { x } else { x / denom };
        let mut row = ResultRow {
            n,
            est_stable: 0.0,
            est_trad: 0.0,
            err: 0.0,
        };
        for p in &points {
            row.est_stable = row.est_stable.max(relative(p.bound_stable, p.reduced_norm));
            row.est_trad = row.est_trad.max(relative(p.bound_trad, p.reduced_norm));
            row.err = row.err.max(relative(p.err, p.solution_norm));
        }
        rows.push(row);
        details.push(points);
        if n < basis.len() {
            reductor
                .push_orthonormal(basis.vectors()[n].clone())
                .map_err(|e| fail(&rows, e))?;
        }
    }
    Ok((rows, details))
}

/// Efficiency extremes at the tabulated basis sizes that were reached.
pub fn efficiency_table(details: &[Vec<PointResult>]) -> Vec<EfficiencyRow> {
    EFFICIENCY_SIZES
        .iter()
        .filter(|&&n| n < details.len())
        .map(|&n| {
            let pts = &details[n];
            let ext = |f: fn(&PointResult) -> f64| {
                pts.iter()
                    .map(f)
                    .fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), e| (hi.max(e), lo.min(e)))
            };
            let (trad_max, trad_min) = ext(PointResult::efficiency_trad);
            let (stable_max, stable_min) = ext(PointResult::efficiency_stable);
            EfficiencyRow {
                n,
                trad_max,
                trad_min,
                stable_max,
                stable_min,
            }
        })
        .collect()
}

pub fn run_experiment(config: &ExperimentConfig) -> std::result::Result<ExperimentReport, ExperimentFailure> {
    config.validate()?;
    let mut timings = PhaseTimings::default();

    let start = Instant::now();
    let mesh = build_mesh(config.grid_n)?;
    let model = assemble_thermal_block_with(
        &mesh,
        SolverConfig::default()
            .with_kind(config.solver_kind)
            .with_tol(config.solver_tol),
    )?;
    timings.assembly = start.elapsed();

    let start = Instant::now();
    let train = make_train_set(config.train_points_per_axis)?;
    let (basis, _, greedy_log) = weak_greedy(
        &model,
        &train,
        config.greedy_tol,
        config.max_basis,
        config.greedy_estimator,
    )?;
    timings.greedy = start.elapsed();

    let start = Instant::now();
    let test_parameters = sample_test_parameters(config.n_test_params, config.rng_seed)?;
    let solutions = test_parameters
        .par_iter()
        .map(|mu| solve_high_dim(&model, mu))
        .collect::<Result<Vec<_>>>()?;
    let (rows, details) = evaluate_nested_spaces(&model, &basis, &test_parameters, &solutions)?;
    let efficiencies = efficiency_table(&details);
    timings.evaluation = start.elapsed();

    Ok(ExperimentReport {
        config: config.clone(),
        greedy_log,
        test_parameters,
        rows,
        details,
        efficiencies,
        timings,
    })
}

pub fn csv_string(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(out, "{},{:.12e},{:.12e},{:.12e}", r.n, r.est_stable, r.est_trad, r.err).unwrap();
    }
    out
}

pub fn write_csv(rows: &[ResultRow], path: &Path) -> std::io::Result<()> {
    std::fs::write(path, csv_string(rows))
}

/// Efficiency extremes laid out with basis sizes as columns.
pub fn format_efficiency_table(rows: &[EfficiencyRow]) -> String {
    let mut out = String::new();
    write!(out, "{:<12}", "basis size").unwrap();
    for r in rows {
        write!(out, "{:>10}", r.n).unwrap();
    }
    out.push('\n');
    type Column = fn(&EfficiencyRow) -> f64;
    let lines: [(&str, Column); 4] = [
        ("trad.  max", |r| r.trad_max),
        ("       min", |r| r.trad_min),
        ("new    max", |r| r.stable_max),
        ("       min", |r| r.stable_min),
    ];
    for (label, get) in lines {
        write!(out, "{label:<12}").unwrap();
        for r in rows {
            write!(out, "{:>10.1e}", get(r)).unwrap();
        }
        out.push('\n');
    }
    out
}
