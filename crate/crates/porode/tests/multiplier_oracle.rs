//! The multiplier field driven by a pore's design velocity is the shape
//! derivative of the augmented field: compare it against a central finite
//! difference of exterior solutions on scaled holes in a remote stress.

use std::sync::Arc;

use porode::bem::{
    exterior_traction_for_multiplier, Equilibration, ExteriorOperator, ExteriorSolution,
};
use porode::geometry::{build_pore_boundary_mesh, design_velocity, Pore};
use porode::tensor::{vec2, Mat2, Vec2};
use porode::MaterialModel;

fn hole_solution(
    r: f64,
    remote: Mat2,
    material: &MaterialModel,
) -> (Pore, ExteriorOperator, ExteriorSolution) {
    let pore = Pore::circle(1, vec2(0.0, 0.0), r, 256).unwrap();
    let boundary = Arc::new(build_pore_boundary_mesh(&pore, 10.0).unwrap());
    let op = ExteriorOperator::new(boundary.clone(), *material).unwrap();
    let t: Vec<Vec2> = boundary
        .quadrature()
        .iter()
        .map(|q| -(remote * boundary.segments()[q.segment].normal))
        .collect();
    let sol = op.solve(&t, Equilibration::default()).unwrap();
    (pore, op, sol)
}

#[test]
fn multiplier_matches_finite_difference_of_scaled_hole_fields() {
    let material = MaterialModel::new(1000.0, 0.3).unwrap();
    let remote = Mat2::new(1.0, 0.3, 0.3, -0.4);
    let (r, d) = (5.0, 1e-3);
    let (_, _, plus) = hole_solution(r * (1.0 + d), remote, &material);
    let (_, _, minus) = hole_solution(r * (1.0 - d), remote, &material);
    let (pore, op, base) = hole_solution(r, remote, &material);
    let boundary = op.boundary().clone();
    let stress: Vec<Mat2> = base
        .boundary_fields()
        .iter()
        .map(|f| remote + f.stress)
        .collect();
    let velocity: Vec<Vec2> = boundary
        .quadrature()
        .iter()
        .map(|q| design_velocity(&pore, &q.point))
        .collect();
    let t = exterior_traction_for_multiplier(&boundary, &stress, &velocity).unwrap();
    let q = op.solve(&t, Equilibration::Project).unwrap();
    assert!(
        q.equilibration().relative_imbalance < 1e-3,
        "{:?}",
        q.equilibration()
    );
    for x in [vec2(8.0, 3.0), vec2(-2.0, 9.0), vec2(0.0, -6.0)] {
        let fd = (plus.displacement_at(&x) - minus.displacement_at(&x)) / (2.0 * d);
        let got = q.displacement_at(&x);
        assert!(
            (got - fd).norm() <= 0.02 * fd.norm(),
            "at {x:?}: multiplier {got:?} vs finite difference {fd:?}"
        );
    }
}

#[test]
fn multiplier_is_linear_in_the_driving_stress() {
    let material = MaterialModel::new(1000.0, 0.3).unwrap();
    let remote = Mat2::new(0.5, -0.2, -0.2, 1.0);
    let (pore, op, base) = hole_solution(2.0, remote, &material);
    let boundary = op.boundary().clone();
    let stress: Vec<Mat2> = base
        .boundary_fields()
        .iter()
        .map(|f| remote + f.stress)
        .collect();
    let velocity: Vec<Vec2> = boundary
        .quadrature()
        .iter()
        .map(|q| design_velocity(&pore, &q.point))
        .collect();
    let t1 = exterior_traction_for_multiplier(&boundary, &stress, &velocity).unwrap();
    let scaled: Vec<Mat2> = stress.iter().map(|s| s * 3.0).collect();
    let t3 = exterior_traction_for_multiplier(&boundary, &scaled, &velocity).unwrap();
    let q1 = op.solve(&t1, Equilibration::Project).unwrap();
    let q3 = op.solve(&t3, Equilibration::Project).unwrap();
    let x = vec2(3.0, 1.0);
    let (a, b) = (q1.displacement_at(&x) * 3.0, q3.displacement_at(&x));
    assert!((a - b).norm() <= 1e-10 * a.norm());
}
