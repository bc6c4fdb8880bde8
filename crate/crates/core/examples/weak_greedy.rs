//! Builds a reduced basis with the weak greedy algorithm and certifies it on
//! a few unseen parameters.

use rb_stable::experiment::sample_test_parameters;
use rb_stable::{assemble_thermal_block, build_mesh, make_train_set, weak_greedy, EstimatorKind};

fn main() -> rb_stable::Result<()> {
    let model = assemble_thermal_block(&build_mesh(60)?)?;
    let train = make_train_set(5)?;
    let (basis, rmodel, log) = weak_greedy(&model, &train, 1e-8, 40, EstimatorKind::Stable)?;

    for step in &log.steps {
        println!(
            "N = {:>2}  max bound {:.3e}  picked {}",
            step.basis_size, step.max_bound, step.selected
        );
    }
    println!(
        "{} vectors, final max bound {:.3e}, {:?}",
        basis.len(),
        log.final_max_bound,
        log.termination
    );

    for mu in sample_test_parameters(3, 42)? {
        let est = rmodel.error_estimate(&mu, EstimatorKind::Stable)?;
        println!("mu = {mu}: relative error bound {:.2e}", est.relative_bound);
    }
    Ok(())
}
