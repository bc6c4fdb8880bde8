//! Compares both residual-norm evaluations with the high-dimensional oracle
//! while the reduced space approaches the solution.

use rb_stable::{
    assemble_thermal_block, build_mesh, estimate_stable, estimate_traditional, hd_residual_norm_oracle, make_train_set,
    residual_coefficients, solve_reduced, weak_greedy, EstimatorKind, Parameter, Reductor,
};

fn main() -> rb_stable::Result<()> {
    let model = assemble_thermal_block(&build_mesh(40)?)?;
    let (basis, _, _) = weak_greedy(&model, &make_train_set(4)?, 0.0, 30, EstimatorKind::Stable)?;
    let mu = Parameter::new(vec![0.37, 0.81, 0.12, 0.66]);

    println!("{:>3} {:>12} {:>12} {:>12}", "N", "oracle", "stable", "traditional");
    let mut reductor = Reductor::new(&model)?;
    for (i, psi) in basis.vectors().iter().enumerate() {
        reductor.push_orthonormal(psi.clone())?;
        if (i + 1) % 3 != 0 {
            continue;
        }
        let rmodel = reductor.reduced_model();
        let c = solve_reduced(rmodel, &mu)?;
        let alpha = residual_coefficients(rmodel, &mu, &c)?;
        println!(
            "{:>3} {:>12.3e} {:>12.3e} {:>12.3e}",
            i + 1,
            hd_residual_norm_oracle(&model, reductor.basis(), &mu, &c)?,
            estimate_stable(&rmodel.stable, &alpha),
            estimate_traditional(&rmodel.trad, &alpha)
        );
    }
    Ok(())
}
