//! Finite-element displacement fields and their pointwise evaluation.

use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};

use super::assemble::element_gradient;
use super::functional::Functional;
use crate::error::{PorodeError, Result};
use crate::material::MaterialModel;
use crate::mesh::{PointLocator, VolumeMesh};
use crate::tensor::{sym, Mat2, Vec2};

/// Displacement field on a mesh with gradient recovery.
///
/// Gradients returned by [`FieldSolution::gradient`] come from
/// superconvergent patch recovery: a linear least-squares fit of the
/// constant element gradients over the element patch of every node,
/// interpolated linearly inside each element. Raw (element-constant)
/// gradients are available through [`FieldSolution::raw_gradient`].
#[derive(Debug, Clone)]
pub struct FieldSolution {
    mesh: Arc<VolumeMesh>,
    locator: Arc<PointLocator>,
    material: MaterialModel,
    displacements: Vec<Vec2>,
    element_gradients: Vec<Mat2>,
    nodal_gradients: Vec<Mat2>,
}

impl FieldSolution {
    /// Wraps nodal displacements and performs gradient recovery.
    pub fn new(
        mesh: Arc<VolumeMesh>,
        locator: Arc<PointLocator>,
        material: MaterialModel,
        displacements: Vec<Vec2>,
    ) -> Self {
        let element_gradients: Vec<Mat2> = mesh
            .elements()
            .iter()
            .enumerate()
            .map(|(e, t)| {
                element_gradient(
                    &mesh.element_coords(e),
                    [
                        displacements[t[0]],
                        displacements[t[1]],
                        displacements[t[2]],
                    ],
                )
            })
            .collect();
        let nodal_gradients = recover_nodal_gradients(&mesh, &element_gradients);
        FieldSolution {
            mesh,
            locator,
            material,
            displacements,
            element_gradients,
            nodal_gradients,
        }
    }

    /// Mesh of the solution.
    pub fn mesh(&self) -> &Arc<VolumeMesh> {
        &self.mesh
    }

    /// Material used in the solve.
    pub fn material(&self) -> &MaterialModel {
        &self.material
    }

    /// Nodal displacements.
    pub fn displacements(&self) -> &[Vec2] {
        &self.displacements
    }

    /// Constant gradient of element `e`.
    pub fn element_gradient(&self, e: usize) -> Mat2 {
        self.element_gradients[e]
    }

    /// Recovered gradient at node `n`.
    pub fn nodal_gradient(&self, n: usize) -> Mat2 {
        self.nodal_gradients[n]
    }

    fn locate(&self, p: &Vec2) -> Result<(usize, [f64; 3])> {
        self.locator.locate(&self.mesh, p).ok_or_else(|| {
            PorodeError::validation(format!("point ({}, {}) lies outside the mesh", p.x, p.y))
        })
    }

    /// Displacement at `p` (linear interpolation).
    pub fn displacement(&self, p: &Vec2) -> Result<Vec2> {
        let (e, l) = self.locate(p)?;
        let t = self.mesh.elements()[e];
        Ok((0..3).map(|k| self.displacements[t[k]] * l[k]).sum())
    }

    /// Recovered displacement gradient `∂u_i/∂x_j` at `p`.
    pub fn gradient(&self, p: &Vec2) -> Result<Mat2> {
        let (e, l) = self.locate(p)?;
        let t = self.mesh.elements()[e];
        Ok((0..3).map(|k| self.nodal_gradients[t[k]] * l[k]).sum())
    }

    /// Element-constant gradient at `p`.
    pub fn raw_gradient(&self, p: &Vec2) -> Result<Mat2> {
        let (e, _) = self.locate(p)?;
        Ok(self.element_gradients[e])
    }

    /// Recovered strain `½(∇u + ∇uᵀ)` at `p`.
    pub fn strain(&self, p: &Vec2) -> Result<Mat2> {
        Ok(sym(&self.gradient(p)?))
    }

    /// Recovered stress at `p`.
    pub fn stress(&self, p: &Vec2) -> Result<Mat2> {
        Ok(self.material.stress(&self.strain(p)?))
    }

    /// Value of a functional for this field.
    pub fn evaluate(&self, functional: &Functional) -> Result<f64> {
        let mut psi = 0.0;
        for t in &functional.terms {
            psi += t.weight * t.direction.dot(&self.displacement(&t.point)?);
        }
        Ok(psi)
    }

    /// Nodal displacements flattened `(u0x, u0y, u1x, …)`.
    pub fn dof_vector(&self) -> Vec<f64> {
        self.displacements.iter().flat_map(|u| [u.x, u.y]).collect()
    }
}

/// Evaluates `functional` on `solution`.
pub fn evaluate_functional(solution: &FieldSolution, functional: &Functional) -> Result<f64> {
    solution.evaluate(functional)
}

/// Superconvergent patch recovery of nodal gradients.
fn recover_nodal_gradients(mesh: &VolumeMesh, element_gradients: &[Mat2]) -> Vec<Mat2> {
    let n = mesh.num_nodes();
    let mut node_elems: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, t) in mesh.elements().iter().enumerate() {
        for &k in t {
            node_elems[k].push(e);
        }
    }
    let centroids: Vec<Vec2> = (0..mesh.num_elements())
        .map(|e| mesh.element_centroid(e))
        .collect();
    let mut out = vec![Mat2::zeros(); n];
    let mut patch: Vec<usize> = Vec::new();
    for node in 0..n {
        if node_elems[node].is_empty() {
            continue;
        }
        patch.clear();
        patch.extend_from_slice(&node_elems[node]);
        if patch.len() < 4 {
            // Boundary corner nodes: widen the patch by one ring.
            let first: Vec<usize> = patch.clone();
            for e in first {
                for &k in &mesh.elements()[e] {
                    patch.extend_from_slice(&node_elems[k]);
                }
            }
            patch.sort_unstable();
            patch.dedup();
        }
        let x0 = mesh.nodes()[node];
        let h = patch
            .iter()
            .map(|&e| (centroids[e] - x0).norm())
            .fold(0.0_f64, f64::max)
            .max(1e-300);
        let mut a = Matrix3::<f64>::zeros();
        let mut rhs = [Vector3::<f64>::zeros(); 4];
        for &e in &patch {
            let d = (centroids[e] - x0) / h;
            let p = Vector3::new(1.0, d.x, d.y);
            a += p * p.transpose();
            let g = element_gradients[e];
            for c in 0..4 {
                rhs[c] += p * g[(c / 2, c % 2)];
            }
        }
        let fitted = a.cholesky().map(|ch| {
            let mut m = Mat2::zeros();
            for c in 0..4 {
                m[(c / 2, c % 2)] = ch.solve(&rhs[c])[0];
            }
            m
        });
        out[node] = match fitted {
            Some(m) if m.iter().all(|v| v.is_finite()) => m,
            _ => {
                // Degenerate patch: area-weighted average.
                let mut w = 0.0;
                let mut m = Mat2::zeros();
                for &e in &node_elems[node] {
                    let ar = mesh.element_area(e);
                    m += element_gradients[e] * ar;
                    w += ar;
                }
                m / w
            }
        };
    }
    out
}
