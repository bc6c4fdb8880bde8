//! Runs the estimator stability study and writes its CSV.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use rb_stable::experiment::{format_efficiency_table, run_experiment, write_csv, ExperimentConfig};
use rb_stable::{EstimatorKind, SolverKind};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GreedyEstimator {
    Stable,
    Trad,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Solver {
    Cholesky,
    Cg,
}

#[derive(Debug, Parser)]
#[command(
    name = "rb-experiment",
    about = "Reduced basis error estimator stability study on the thermal block"
)]
struct Args {
    /// Cells per axis (even).
    #[arg(long = "grid", default_value_t = 100)]
    grid: usize,
    /// Training points per parameter axis.
    #[arg(long = "train", default_value_t = 5)]
    train: usize,
    #[arg(long = "max-basis", default_value_t = 35)]
    max_basis: usize,
    /// Greedy tolerance on the maximum relative error bound.
    #[arg(long = "tol", default_value_t = 0.0)]
    tol: f64,
    #[arg(long = "greedy-estimator", value_enum, default_value_t = GreedyEstimator::Stable)]
    greedy_estimator: GreedyEstimator,
    /// Number of random test parameters.
    #[arg(long = "test-count", default_value_t = 20)]
    test_count: usize,
    #[arg(long = "seed", default_value_t = 0)]
    seed: u64,
    /// Relative residual target of the high-dimensional CG solves.
    #[arg(long = "solver-tol", default_value_t = 1e-14)]
    solver_tol: f64,
    /// Sparse SPD solver for snapshots and Riesz representatives.
    #[arg(long = "solver", value_enum, default_value_t = Solver::Cholesky)]
    solver: Solver,
    #[arg(long = "out", default_value = "errors.csv")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = ExperimentConfig {
        grid_n: args.grid,
        train_points_per_axis: args.train,
        max_basis: args.max_basis,
        greedy_tol: args.tol,
        greedy_estimator: match args.greedy_estimator {
            GreedyEstimator::Stable => EstimatorKind::Stable,
            GreedyEstimator::Trad => EstimatorKind::Traditional,
        },
        n_test_params: args.test_count,
        rng_seed: args.seed,
        solver_tol: args.solver_tol,
        solver_kind: match args.solver {
            Solver::Cholesky => SolverKind::Cholesky,
            Solver::Cg => SolverKind::ConjugateGradient,
        },
        output_path: Some(args.out.clone()),
    };
    if let Err(e) = config.validate() {
        eprintln!("usage error: {e}");
        return ExitCode::from(2);
    }

    match run_experiment(&config) {
        Ok(report) => {
            if let Err(e) = write_csv(&report.rows, &args.out) {
                eprintln!("cannot write {}: {e}", args.out.display());
                return ExitCode::from(1);
            }
            println!("{}", format_efficiency_table(&report.efficiencies));
            let log = &report.greedy_log;
            println!(
                "greedy: {} extensions, final max bound {:.3e}, {:?}",
                log.steps.len(),
                log.final_max_bound,
                log.termination
            );
            let t = report.timings;
            println!(
                "wall clock: assembly {:.2}s, greedy {:.2}s, evaluation {:.2}s",
                t.assembly.as_secs_f64(),
                t.greedy.as_secs_f64(),
                t.evaluation.as_secs_f64()
            );
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("numerical failure: {}", failure.error);
            if let Err(e) = write_csv(&failure.rows, &args.out) {
                eprintln!("cannot write {}: {e}", args.out.display());
            }
            ExitCode::from(1)
        }
    }
}
