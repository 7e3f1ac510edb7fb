//! Constrained stiffness system with a sparse Cholesky factorization that is
//! reused for the primary and adjoint right-hand sides.

use std::sync::Arc;

use faer::prelude::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};

use super::assemble::{external_load, functional_load, stiffness_triplets};
use super::functional::Functional;
use super::solution::FieldSolution;
use crate::error::{PorodeError, Result};
use crate::material::MaterialModel;
use crate::mesh::{PointLocator, VolumeMesh};
use crate::tensor::Vec2;

/// Relative residual accepted after a direct solve.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Compressed sparse rows with duplicates summed.
#[derive(Debug, Clone)]
struct Csr {
    ptr: Vec<usize>,
    idx: Vec<usize>,
    val: Vec<f64>,
}

impl Csr {
    fn from_triplets(n: usize, mut t: Vec<(usize, usize, f64)>) -> Csr {
        t.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut ptr = vec![0usize; n + 1];
        let mut idx: Vec<usize> = Vec::with_capacity(t.len());
        let mut val: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *val.last_mut().unwrap() += v;
            } else {
                idx.push(c);
                val.push(v);
                ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..n {
            ptr[r + 1] += ptr[r];
        }
        Csr { ptr, idx, val }
    }

    fn mul(&self, x: &[f64]) -> Vec<f64> {
        (0..self.ptr.len() - 1)
            .map(|r| {
                (self.ptr[r]..self.ptr[r + 1])
                    .map(|k| self.val[k] * x[self.idx[k]])
                    .sum()
            })
            .collect()
    }
}

/// Names the rigid-body modes left free by the Dirichlet conditions, if any.
pub fn unconstrained_rigid_modes(mesh: &VolumeMesh) -> Vec<&'static str> {
    let mut has_x = false;
    let mut has_y = false;
    // Rotation about the centroid of the constrained nodes is blocked when
    // the constraint rows of the rigid-mode matrix have full rank.
    let mut rows: Vec<[f64; 3]> = Vec::new();
    let pts: Vec<Vec2> = mesh.dirichlet().keys().map(|&n| mesh.nodes()[n]).collect();
    let c = if pts.is_empty() {
        Vec2::zeros()
    } else {
        pts.iter().sum::<Vec2>() / pts.len() as f64
    };
    for (&n, v) in mesh.dirichlet() {
        let p = mesh.nodes()[n] - c;
        if v[0].is_some() {
            has_x = true;
            rows.push([1.0, 0.0, -p.y]);
        }
        if v[1].is_some() {
            has_y = true;
            rows.push([0.0, 1.0, p.x]);
        }
    }
    let mut modes = Vec::new();
    if !has_x {
        modes.push("translation in x");
    }
    if !has_y {
        modes.push("translation in y");
    }
    let mut gram = nalgebra::Matrix3::<f64>::zeros();
    for r in &rows {
        let v = nalgebra::Vector3::new(r[0], r[1], r[2]);
        gram += v * v.transpose();
    }
    let scale = gram.diagonal().max().max(1e-300);
    let eig = gram.symmetric_eigenvalues();
    if has_x && has_y && eig.min() <= 1e-12 * scale {
        modes.push("rotation");
    }
    modes
}

/// Factorized constrained stiffness system of a mesh.
#[derive(Debug)]
pub struct StiffnessSystem {
    mesh: Arc<VolumeMesh>,
    locator: Arc<PointLocator>,
    material: MaterialModel,
    dof_map: Vec<Option<usize>>,
    prescribed: Vec<f64>,
    k_free: Csr,
    k_coupling: Csr,
    llt: Option<faer::sparse::linalg::solvers::Llt<usize, f64>>,
}

impl StiffnessSystem {
    /// Assembles and factorizes the stiffness matrix of `mesh`.
    pub fn new(mesh: Arc<VolumeMesh>, material: MaterialModel) -> Result<Self> {
        material.validate()?;
        faer::set_global_parallelism(faer::Par::Seq);
        let modes = unconstrained_rigid_modes(&mesh);
        if !modes.is_empty() {
            return Err(PorodeError::solver(format!(
                "singular constrained stiffness: unconstrained rigid mode(s): {}",
                modes.join(", ")
            )));
        }
        let ndof = 2 * mesh.num_nodes();
        let mut dof_map = vec![None; ndof];
        let mut prescribed = vec![0.0; ndof];
        let mut constrained = vec![false; ndof];
        for (&n, v) in mesh.dirichlet() {
            for c in 0..2 {
                if let Some(x) = v[c] {
                    constrained[2 * n + c] = true;
                    prescribed[2 * n + c] = x;
                }
            }
        }
        let mut nf = 0;
        for d in 0..ndof {
            if !constrained[d] {
                dof_map[d] = Some(nf);
                nf += 1;
            }
        }
        let mut free_t = Vec::new();
        let mut coup_t = Vec::new();
        for (r, c, v) in stiffness_triplets(&mesh, &material) {
            if let Some(fr) = dof_map[r] {
                match dof_map[c] {
                    Some(fc) => free_t.push((fr, fc, v)),
                    None => coup_t.push((fr, c, v)),
                }
            }
        }
        let k_free = Csr::from_triplets(nf, free_t);
        let k_coupling = Csr::from_triplets(nf, coup_t);
        let llt = if nf > 0 {
            let mut trip = Vec::with_capacity(k_free.val.len());
            for r in 0..nf {
                for k in k_free.ptr[r]..k_free.ptr[r + 1] {
                    trip.push(Triplet::new(r, k_free.idx[k], k_free.val[k]));
                }
            }
            let k = SparseColMat::<usize, f64>::try_new_from_triplets(nf, nf, &trip)
                .map_err(|e| PorodeError::solver(format!("sparse assembly failed: {e:?}")))?;
            Some(k.sp_cholesky(Side::Lower).map_err(|e| {
                PorodeError::solver(format!(
                    "stiffness matrix is not positive definite ({e:?}): a disconnected mesh part or an \
                     unconstrained rigid mode remains"
                ))
            })?)
        } else {
            None
        };
        let locator = Arc::new(PointLocator::new(&mesh));
        Ok(StiffnessSystem {
            mesh,
            locator,
            material,
            dof_map,
            prescribed,
            k_free,
            k_coupling,
            llt,
        })
    }

    /// Mesh of the system.
    pub fn mesh(&self) -> &Arc<VolumeMesh> {
        &self.mesh
    }

    /// Point locator of the mesh.
    pub fn locator(&self) -> &Arc<PointLocator> {
        &self.locator
    }

    /// Material.
    pub fn material(&self) -> &MaterialModel {
        &self.material
    }

    /// Number of unconstrained dofs.
    pub fn num_free_dofs(&self) -> usize {
        self.k_free.ptr.len() - 1
    }

    /// Solves `K u = f` for a full-length load vector. With
    /// `apply_prescribed` the Dirichlet values of the mesh are imposed;
    /// otherwise all constrained dofs are zero (adjoint problems).
    pub fn solve(&self, f_full: &[f64], apply_prescribed: bool) -> Result<FieldSolution> {
        let ndof = self.dof_map.len();
        if f_full.len() != ndof {
            return Err(PorodeError::solver("load vector has the wrong length"));
        }
        let nf = self.num_free_dofs();
        let mut u = if apply_prescribed {
            self.prescribed.clone()
        } else {
            vec![0.0; ndof]
        };
        let mut rhs = vec![0.0; nf];
        for d in 0..ndof {
            if let Some(k) = self.dof_map[d] {
                rhs[k] = f_full[d];
            }
        }
        if apply_prescribed {
            let lift = self.k_coupling.mul(&self.prescribed);
            for (r, l) in rhs.iter_mut().zip(lift) {
                *r -= l;
            }
        }
        let rhs_norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        if let (Some(llt), true) = (&self.llt, rhs_norm > 0.0) {
            let b = Mat::<f64>::from_fn(nf, 1, |i, _| rhs[i]);
            let x = llt.solve(&b);
            let xf: Vec<f64> = (0..nf).map(|i| x[(i, 0)]).collect();
            let kx = self.k_free.mul(&xf);
            let res = kx
                .iter()
                .zip(&rhs)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if !(res <= RESIDUAL_TOLERANCE * rhs_norm) {
                return Err(PorodeError::solver(format!(
                    "residual check failed: |Ku - f| = {res:e} > {RESIDUAL_TOLERANCE:e} |f| = {:e}",
                    RESIDUAL_TOLERANCE * rhs_norm
                )));
            }
            for d in 0..ndof {
                if let Some(k) = self.dof_map[d] {
                    u[d] = xf[k];
                }
            }
        }
        let disp: Vec<Vec2> = (0..self.mesh.num_nodes())
            .map(|n| Vec2::new(u[2 * n], u[2 * n + 1]))
            .collect();
        Ok(FieldSolution::new(
            self.mesh.clone(),
            self.locator.clone(),
            self.material,
            disp,
        ))
    }

    /// Primary solve under the loads and prescribed displacements of the mesh.
    pub fn solve_primary(&self) -> Result<FieldSolution> {
        self.solve(&external_load(&self.mesh), true)
    }

    /// Adjoint solve: unit point loads `w d` at the functional points,
    /// homogeneous Dirichlet conditions.
    pub fn solve_adjoint(&self, functional: &Functional) -> Result<FieldSolution> {
        functional.validate()?;
        let f = functional_load(&self.mesh, &self.locator, functional)?;
        self.solve(&f, false)
    }
}

/// Solves the primary problem defined by the loads and constraints of `mesh`.
pub fn solve_primary(mesh: &VolumeMesh, material: &MaterialModel) -> Result<FieldSolution> {
    StiffnessSystem::new(Arc::new(mesh.clone()), *material)?.solve_primary()
}

/// Solves the adjoint problem of `functional` on `mesh`.
pub fn solve_adjoint(
    mesh: &VolumeMesh,
    material: &MaterialModel,
    functional: &Functional,
) -> Result<FieldSolution> {
    StiffnessSystem::new(Arc::new(mesh.clone()), *material)?.solve_adjoint(functional)
}
