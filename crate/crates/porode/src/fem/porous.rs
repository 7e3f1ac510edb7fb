//! Direct finite-element solution of the porous domain (ground-truth path).

use std::sync::Arc;

use super::solution::FieldSolution;
use super::solver::StiffnessSystem;
use crate::error::Result;
use crate::material::MaterialModel;
use crate::mesh::generate::PorousMesh;
use crate::mesh::{triangulate, GeneratedMesh, MeshSizing};
use crate::model::PorousModel;
use crate::tensor::Vec2;

/// Conforming mesh of the reference domain with pore boundaries as
/// constraints, the extracted porous mesh and its factorized system.
#[derive(Debug)]
pub struct PorousSolution {
    /// Mesh of the whole reference domain with pore elements tagged.
    pub generated: GeneratedMesh,
    /// Porous sub-mesh with pore boundary loops.
    pub porous: PorousMesh,
    /// Factorized system of the porous mesh (reusable for adjoint solves).
    pub system: StiffnessSystem,
    /// Primary solution on the porous mesh.
    pub primary: FieldSolution,
}

/// Triangulates the reference polygon minus all pores (pore boundaries are
/// traction free) and solves the primary problem. `extra_points` become
/// mesh vertices (typically the functional points).
pub fn solve_porous(
    model: &PorousModel,
    material: &MaterialModel,
    sizing: &MeshSizing,
    extra_points: &[Vec2],
) -> Result<PorousSolution> {
    let options = sizing.conforming_options(model.pores());
    let generated = triangulate(model.reference(), model.pores(), extra_points, &options)?;
    let porous = generated.porous()?;
    let system = StiffnessSystem::new(Arc::new(porous.mesh.clone()), *material)?;
    let primary = system.solve_primary()?;
    Ok(PorousSolution {
        generated,
        porous,
        system,
        primary,
    })
}
