//! Element matrices and global load vectors for linear plane-stress triangles.

use nalgebra::{SMatrix, SVector};

use super::functional::Functional;
use crate::error::{PorodeError, Result};
use crate::material::MaterialModel;
use crate::mesh::{twice_area, PointLocator, VolumeMesh};
use crate::tensor::{Mat2, Vec2};

/// Cartesian gradients of the three shape functions of a triangle.
pub fn shape_gradients(p: &[Vec2; 3]) -> [Vec2; 3] {
    let det = twice_area(&p[0], &p[1], &p[2]);
    [
        Vec2::new(p[1].y - p[2].y, p[2].x - p[1].x) / det,
        Vec2::new(p[2].y - p[0].y, p[0].x - p[2].x) / det,
        Vec2::new(p[0].y - p[1].y, p[1].x - p[0].x) / det,
    ]
}

/// Strain-displacement matrix `[εxx, εyy, γxy] = B u_e` with element dofs
/// ordered `(u0x, u0y, u1x, u1y, u2x, u2y)`.
pub fn b_matrix(p: &[Vec2; 3]) -> SMatrix<f64, 3, 6> {
    let g = shape_gradients(p);
    let mut b = SMatrix::<f64, 3, 6>::zeros();
    for k in 0..3 {
        b[(0, 2 * k)] = g[k].x;
        b[(1, 2 * k + 1)] = g[k].y;
        b[(2, 2 * k)] = g[k].y;
        b[(2, 2 * k + 1)] = g[k].x;
    }
    b
}

/// Element stiffness `t A Bᵀ C B`.
pub fn element_stiffness(
    p: &[Vec2; 3],
    material: &MaterialModel,
    thickness: f64,
) -> SMatrix<f64, 6, 6> {
    let b = b_matrix(p);
    let area = 0.5 * twice_area(&p[0], &p[1], &p[2]);
    b.transpose() * material.tangent() * b * (area * thickness)
}

/// Displacement gradient of element `e` from nodal displacements.
pub fn element_gradient(p: &[Vec2; 3], u: [Vec2; 3]) -> Mat2 {
    let g = shape_gradients(p);
    let mut m = Mat2::zeros();
    for k in 0..3 {
        m += u[k] * g[k].transpose();
    }
    m
}

/// Global stiffness triplets `(row, col, value)` over all dofs.
pub fn stiffness_triplets(mesh: &VolumeMesh, material: &MaterialModel) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::with_capacity(mesh.num_elements() * 36);
    for (e, tri) in mesh.elements().iter().enumerate() {
        let ke = element_stiffness(&mesh.element_coords(e), material, mesh.thickness());
        for a in 0..6 {
            let ra = 2 * tri[a / 2] + a % 2;
            for b in 0..6 {
                let cb = 2 * tri[b / 2] + b % 2;
                out.push((ra, cb, ke[(a, b)]));
            }
        }
    }
    out
}

/// Global load vector of tractions, nodal forces and body force.
pub fn external_load(mesh: &VolumeMesh) -> Vec<f64> {
    let mut f = vec![0.0; 2 * mesh.num_nodes()];
    let t = mesh.thickness();
    for edge in mesh.neumann() {
        let [a, b] = edge.nodes;
        let len = (mesh.nodes()[b] - mesh.nodes()[a]).norm();
        let half = edge.traction * (0.5 * len * t);
        for n in [a, b] {
            f[2 * n] += half.x;
            f[2 * n + 1] += half.y;
        }
    }
    for (n, force) in mesh.nodal_forces() {
        f[2 * n] += force.x;
        f[2 * n + 1] += force.y;
    }
    let bf = mesh.body_force();
    if bf != Vec2::zeros() {
        for (e, tri) in mesh.elements().iter().enumerate() {
            let share = bf * (mesh.element_area(e) * t / 3.0);
            for &n in tri {
                f[2 * n] += share.x;
                f[2 * n + 1] += share.y;
            }
        }
    }
    f
}

/// Adjoint load of a functional: unit point loads `w d` at each `x̂`,
/// distributed to element nodes by the shape functions.
pub fn functional_load(
    mesh: &VolumeMesh,
    locator: &PointLocator,
    functional: &Functional,
) -> Result<Vec<f64>> {
    let mut f = vec![0.0; 2 * mesh.num_nodes()];
    for term in &functional.terms {
        let (e, bary) = locator.locate(mesh, &term.point).ok_or_else(|| {
            PorodeError::validation(format!(
                "functional point ({}, {}) lies outside the mesh",
                term.point.x, term.point.y
            ))
        })?;
        let tri = mesh.elements()[e];
        let load = term.direction * term.weight;
        for k in 0..3 {
            f[2 * tri[k]] += bary[k] * load.x;
            f[2 * tri[k] + 1] += bary[k] * load.y;
        }
    }
    Ok(f)
}

/// Element-level nodal displacement vector.
pub fn element_dofs(u: &[Vec2], tri: &[usize; 3]) -> SVector<f64, 6> {
    SVector::<f64, 6>::from_fn(|i, _| u[tri[i / 2]][i % 2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::vec2;

    #[test]
    fn rigid_modes_are_in_the_element_kernel() {
        let p = [vec2(0.1, 0.2), vec2(2.0, 0.4), vec2(0.7, 1.9)];
        let m = MaterialModel::new(1000.0, 0.3).unwrap();
        let k = element_stiffness(&p, &m, 2.0);
        let tx = SVector::<f64, 6>::from_column_slice(&[1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        let rot = SVector::<f64, 6>::from_fn(|i, _| {
            let q = p[i / 2];
            if i % 2 == 0 {
                -q.y
            } else {
                q.x
            }
        });
        assert!((k * tx).norm() < 1e-9);
        assert!((k * rot).norm() < 1e-9);
        assert!((k - k.transpose()).norm() < 1e-9);
    }

    #[test]
    fn gradient_of_affine_field_is_exact() {
        let p = [vec2(0.0, 0.0), vec2(1.0, 0.2), vec2(0.3, 1.0)];
        let g = Mat2::new(0.1, -0.2, 0.3, 0.05);
        let u = [g * p[0], g * p[1], g * p[2]];
        assert!((element_gradient(&p, u) - g).norm() < 1e-14);
    }
}
