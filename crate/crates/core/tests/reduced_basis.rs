mod common;

use std::sync::Arc;

use common::{dense, m_inner, m_norm, random_parameters, random_vectors, thermal_block};
use nalgebra::DVector;
use proptest::prelude::*;
use rb_stable::model::{CoercivityBound, Theta};
use rb_stable::rb::Termination;
use rb_stable::{
    extend_basis, make_train_set, project, solve_high_dim, solve_reduced, weak_greedy, AffineFunctional,
    AffineOperator, CsrMatrix, EstimatorKind, HighDimModel, Parameter, ParameterSpace, ReducedBasis, SolverConfig,
};

fn basis_from(model: &HighDimModel, snapshots: Vec<Vec<f64>>) -> ReducedBasis {
    let mut basis = ReducedBasis::new();
    for s in snapshots {
        assert!(!basis.extend(model.inner_product(), s).unwrap());
    }
    basis
}

#[test]
fn first_snapshot_is_normalized() {
    let model = thermal_block(6);
    let m = model.inner_product();
    let s = solve_high_dim(&model, &Parameter::new(vec![0.3, 0.7, 0.2, 0.9])).unwrap();
    let (basis, deflated) = extend_basis(ReducedBasis::new(), s.clone(), m).unwrap();
    assert!(!deflated);
    let scale = m_norm(m, &s);
    let expected: Vec<f64> = s.iter().map(|x| x / scale).collect();
    assert!(common::max_abs_diff(&basis.vectors()[0], &expected) < 1e-15 * common::max_abs(&expected) * 10.0);
}

#[test]
fn multiple_of_a_basis_vector_deflates() {
    let model = thermal_block(6);
    let m = model.inner_product();
    let v = random_vectors(1, model.dim(), 1).remove(0);
    let (basis, _) = extend_basis(ReducedBasis::new(), v.clone(), m).unwrap();
    let twice: Vec<f64> = v.iter().map(|x| 2.0 * x).collect();
    let (after, deflated) = extend_basis(basis.clone(), twice, m).unwrap();
    assert!(deflated);
    assert_eq!(after.vectors(), basis.vectors());
}

#[test]
fn two_snapshots_give_orthonormal_basis() {
    let model = thermal_block(8);
    let m = model.inner_product();
    let basis = basis_from(&model, random_vectors(2, model.dim(), 9));
    for i in 0..2 {
        for j in 0..2 {
            let g = m_inner(m, &basis.vectors()[i], &basis.vectors()[j]);
            assert!((g - if i == j { 1.0 } else { 0.0 }).abs() <= 1e-13);
        }
    }
}

#[test]
fn empty_basis_projects_to_empty_system() {
    let model = thermal_block(4);
    let rmodel = project(&model, &ReducedBasis::new()).unwrap();
    assert!(rmodel.a_red.iter().all(|a| a.shape() == (0, 0)));
    assert!(rmodel.f_red.iter().all(|f| f.is_empty()));
    assert!(solve_reduced(&rmodel, &Parameter::new(vec![0.5; 4]))
        .unwrap()
        .is_empty());
}

#[test]
fn projection_matches_dense_triple_product() {
    let model = thermal_block(4);
    let basis = basis_from(&model, random_vectors(3, model.dim(), 4));
    let rmodel = project(&model, &basis).unwrap();
    let v = nalgebra::DMatrix::from_fn(model.dim(), 3, |i, j| basis.vectors()[j][i]);
    for (a, a_red) in model.operator().components.iter().zip(&rmodel.a_red) {
        let oracle = v.transpose() * dense(a) * &v;
        let scale = oracle.amax();
        assert!((a_red - &oracle).amax() <= 1e-14 * scale.max(1.0));
    }
    let f = DVector::from_column_slice(&model.rhs().components[0]);
    let oracle = v.transpose() * f;
    assert!((&rmodel.f_red[0] - &oracle).amax() <= 1e-14 * oracle.amax());
}

#[test]
fn one_dimensional_reduced_solve() {
    let theta: Theta = Arc::new(|_: &Parameter| 1.0);
    let coercivity: CoercivityBound = Arc::new(|_: &Parameter| Ok(1.0));
    let model = HighDimModel::new(
        AffineOperator {
            components: vec![CsrMatrix::from_dense(&[vec![2.0]]).unwrap()],
            thetas: vec![theta.clone()],
        },
        AffineFunctional {
            components: vec![vec![4.0]],
            thetas: vec![theta],
        },
        CsrMatrix::identity(1),
        coercivity,
        ParameterSpace::cube(1, 0.0, 1.0),
        SolverConfig::default(),
    )
    .unwrap();
    let basis = basis_from(&model, vec![vec![1.0]]);
    let rmodel = project(&model, &basis).unwrap();
    let c = solve_reduced(&rmodel, &Parameter::new(vec![0.5])).unwrap();
    assert_eq!(c.len(), 1);
    assert!((c[0] - 2.0).abs() <= 4.0 * f64::EPSILON);
}

#[test]
fn reduced_system_residual_is_tiny() {
    let model = thermal_block(10);
    let snapshots = random_parameters(5, 21)
        .iter()
        .map(|mu| solve_high_dim(&model, mu).unwrap())
        .collect();
    let rmodel = project(&model, &basis_from(&model, snapshots)).unwrap();
    for mu in random_parameters(5, 22) {
        let c = DVector::from_vec(solve_reduced(&rmodel, &mu).unwrap());
        let mut a = nalgebra::DMatrix::zeros(5, 5);
        for (t, aq) in rmodel.theta_a(&mu).into_iter().zip(&rmodel.a_red) {
            a += aq * t;
        }
        let f = &rmodel.f_red[0] * rmodel.theta_f(&mu)[0];
        assert!((&f - a * c).norm() <= 1e-13 * f.norm());
    }
}

#[test]
fn galerkin_reproduces_snapshots_and_energy_errors_shrink_on_nested_spaces() {
    let model = thermal_block(12);
    let m = model.inner_product();
    let params = random_parameters(6, 33);
    let snapshots: Vec<Vec<f64>> = params.iter().map(|mu| solve_high_dim(&model, mu).unwrap()).collect();
    let full = basis_from(&model, snapshots.clone());
    // error of the Galerkin solution at params[k], in the V-norm and in the energy norm of A(μ_k)
    let errors = |basis: &ReducedBasis, k: usize| {
        let rmodel = project(&model, basis).unwrap();
        let c = solve_reduced(&rmodel, &params[k]).unwrap();
        let u = basis.reconstruct_in(model.dim(), &c).unwrap();
        let d: Vec<f64> = snapshots[k].iter().zip(&u).map(|(a, b)| a - b).collect();
        let a = model.operator().assemble(&params[k]).unwrap();
        (m_norm(m, &d), m_norm(&a, &d))
    };
    for (k, snapshot) in snapshots.iter().enumerate() {
        let scale = m_norm(m, snapshot);
        assert!(errors(&full, k).0 <= 1e-10 * scale);
        let mut previous = f64::INFINITY;
        for n in 0..=params.len() {
            let (v_err, energy_err) = errors(&full.truncated(m, n).unwrap(), k);
            if n > k {
                assert!(v_err <= 1e-10 * scale);
            }
            // Galerkin is the energy-norm best approximation; past reproduction only round-off remains
            assert!(
                energy_err <= previous * (1.0 + 1e-9) + 1e-14 * scale,
                "energy error grew from {previous:e} to {energy_err:e} at n = {n}"
            );
            previous = energy_err;
        }
    }
}

#[test]
fn train_set_layouts() {
    let corners = make_train_set(2).unwrap();
    assert_eq!(corners.len(), 16);
    assert!(corners.iter().all(|mu| mu.0.iter().all(|&c| c == 0.1 || c == 1.0)));
    let three = make_train_set(3).unwrap();
    assert!((three[1].0[3] - 0.55).abs() < 1e-15);
    let five = make_train_set(5).unwrap();
    assert_eq!(five.len(), 625);
    let axis: Vec<f64> = five[..5].iter().map(|mu| mu.0[3]).collect();
    for (a, b) in axis.iter().zip([0.1, 0.325, 0.55, 0.775, 1.0]) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn greedy_with_huge_tolerance_does_nothing() {
    let model = thermal_block(6);
    let (basis, _, log) = weak_greedy(&model, &make_train_set(2).unwrap(), 1e6, 10, EstimatorKind::Stable).unwrap();
    assert!(basis.is_empty());
    assert!(log.steps.is_empty());
    assert_eq!(log.termination, Termination::Tolerance);
}

#[test]
fn greedy_on_single_parameter_stops_after_one_snapshot() {
    let model = thermal_block(8);
    let train = vec![Parameter::new(vec![0.2, 0.9, 0.5, 0.3])];
    let (basis, _, log) = weak_greedy(&model, &train, 1e-10, 10, EstimatorKind::Stable).unwrap();
    assert_eq!(basis.len(), 1);
    assert_eq!(log.termination, Termination::Tolerance);
    assert!(log.final_max_bound <= 1e-10);
}

#[test]
fn greedy_selection_is_deterministic() {
    let model = thermal_block(10);
    let train = make_train_set(3).unwrap();
    let run = || weak_greedy(&model, &train, 0.0, 12, EstimatorKind::Stable).unwrap().2;
    let (a, b) = (run(), run());
    assert_eq!(a.selected_indices(), b.selected_indices());
    assert_eq!(a, b);
}

#[test]
fn stable_greedy_converges_to_round_off() {
    let model = thermal_block(20);
    let (_, _, log) = weak_greedy(&model, &make_train_set(5).unwrap(), 0.0, 35, EstimatorKind::Stable).unwrap();
    let bounds: Vec<f64> = log
        .steps
        .iter()
        .map(|s| s.max_bound)
        .chain([log.final_max_bound])
        .collect();
    // the weak greedy is only monotone up to small fluctuations of the estimator
    for w in bounds[5..].windows(2) {
        assert!(w[1] <= 1.05 * w[0], "max bound rose from {:e} to {:e}", w[0], w[1]);
    }
    assert!(log.final_max_bound <= 1e-10, "final bound {:e}", log.final_max_bound);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn galerkin_reproduction_at_random_snapshots(
        mus in prop::collection::vec(prop::collection::vec(0.1f64..=1.0, 4), 1..5)
    ) {
        let model = thermal_block(6);
        let m = model.inner_product();
        let mut basis = ReducedBasis::new();
        let mut kept = Vec::new();
        for mu in &mus {
            let mu = Parameter::new(mu.clone());
            let s = solve_high_dim(&model, &mu).unwrap();
            if !basis.extend(m, s.clone()).unwrap() {
                kept.push((mu, s));
            }
        }
        let rmodel = project(&model, &basis).unwrap();
        for (mu, s) in kept {
            let u = basis.reconstruct_in(model.dim(), &solve_reduced(&rmodel, &mu).unwrap()).unwrap();
            let d: Vec<f64> = s.iter().zip(&u).map(|(a, b)| a - b).collect();
            prop_assert!(m_norm(m, &d) <= 1e-10 * m_norm(m, &s));
        }
    }
}
