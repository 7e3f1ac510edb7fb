//! Direct finite-element analysis of the porous domain.

use std::sync::Arc;
use crate::clock::Stopwatch;

use serde::Serialize;

use crate::error::Result;
use crate::estimator::EstimateReport;
use crate::fem::{FieldSolution, Functional, StiffnessSystem};
use crate::material::MaterialModel;
use crate::mesh::generate::PorousMesh;
use crate::mesh::{triangulate, GeneratedMesh, MeshSizing, MeshStats};
use crate::model::PorousModel;

/// Functional values from one conforming triangulation: `psi` on the porous
/// (material-only) sub-mesh and `psi0` on the whole mesh with the pores
/// filled, so both share the same discretization away from the pores.
#[derive(Debug, Clone, Serialize)]
pub struct GroundTruth {
    /// Functional of the porous domain.
    pub psi: f64,
    /// Functional of the filled (pore-free) domain on the same mesh.
    pub psi0: f64,
    /// Porous sub-mesh statistics.
    pub porous_stats: MeshStats,
    /// Statistics of the filled mesh.
    pub filled_stats: MeshStats,
    /// Wall time (s).
    pub seconds: f64,
}

/// Conforming mesh and porous solution kept for further post-processing.
#[derive(Debug)]
pub struct PorousAnalysis {
    /// Whole-domain mesh with pore elements tagged.
    pub generated: GeneratedMesh,
    /// Porous sub-mesh.
    pub porous: PorousMesh,
    /// Primary field on the porous mesh.
    pub z: FieldSolution,
    /// Adjoint field on the porous mesh.
    pub lambda: FieldSolution,
    /// Functional value.
    pub psi: f64,
}

/// Meshes the domain with pore boundaries as constraints and solves the
/// primary and adjoint problems on the porous sub-mesh.
pub fn analyze_porous(
    model: &PorousModel,
    material: &MaterialModel,
    functional: &Functional,
    sizing: &MeshSizing,
) -> Result<PorousAnalysis> {
    functional.validate()?;
    let options = sizing.conforming_options(model.pores());
    let generated = triangulate(
        model.reference(),
        model.pores(),
        &functional.points(),
        &options,
    )?;
    let porous = generated.porous()?;
    let system = StiffnessSystem::new(Arc::new(porous.mesh.clone()), *material)?;
    let z = system.solve_primary()?;
    let lambda = system.solve_adjoint(functional)?;
    let psi = z.evaluate(functional)?;
    Ok(PorousAnalysis {
        generated,
        porous,
        z,
        lambda,
        psi,
    })
}

/// Ground-truth functional values of `model`.
pub fn ground_truth(
    model: &PorousModel,
    material: &MaterialModel,
    functional: &Functional,
    sizing: &MeshSizing,
) -> Result<GroundTruth> {
    let t0 = Stopwatch::start();
    functional.validate()?;
    let options = sizing.conforming_options(model.pores());
    let generated = triangulate(
        model.reference(),
        model.pores(),
        &functional.points(),
        &options,
    )?;
    let filled = Arc::new(generated.mesh.clone());
    let porous = generated.porous()?;
    let porous_stats = porous.mesh.stats();
    let filled_stats = filled.stats();
    let (psi, psi0) = {
        let solve = |mesh: Arc<crate::mesh::VolumeMesh>| -> Result<f64> {
            StiffnessSystem::new(mesh, *material)?
                .solve_primary()?
                .evaluate(functional)
        };
        let porous_mesh = Arc::new(porous.mesh);
        let both = crate::par::try_map(&[porous_mesh, filled], |m| solve(m.clone()))?;
        (both[0], both[1])
    };
    Ok(GroundTruth {
        psi,
        psi0,
        porous_stats,
        filled_stats,
        seconds: t0.seconds(),
    })
}

/// Attaches ground truth to an estimator report.
pub fn attach_ground_truth(report: EstimateReport, truth: &GroundTruth) -> EstimateReport {
    let mut r = report.with_ground_truth(truth.psi, truth.psi0, Some(truth.porous_stats));
    r.timings.ground_truth = Some(truth.seconds);
    r
}
