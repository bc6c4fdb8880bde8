//! Assembles the thermal block, solves it at one parameter and prints where
//! the temperature peaks.
//!
//!     cargo run --release --example thermal_block -- 64

use rb_stable::{assemble_thermal_block, build_mesh, solve_high_dim, Parameter};

fn main() -> rb_stable::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(50);
    let mesh = build_mesh(n)?;
    let model = assemble_thermal_block(&mesh)?;
    println!(
        "{} triangles, {} unknowns, {} nonzeros per block",
        mesh.triangle_count(),
        model.dim(),
        model.operator().components[0].nnz()
    );

    for mu in [vec![1.0; 4], vec![0.1, 1.0, 0.4, 1.0]] {
        let mu = Parameter::new(mu);
        let u = solve_high_dim(&model, &mu)?;
        let k = (0..u.len()).max_by(|&a, &b| u[a].total_cmp(&u[b])).unwrap();
        let [x, y] = mesh.vertices[model.dofs().free[k]];
        println!(
            "mu = {mu}: max u = {:.5} at ({x:.3}, {y:.3}), alpha_LB = {}",
            u[k],
            model.coercivity_lower_bound(&mu)?
        );
    }
    Ok(())
}
