//! Per-pore boundary field data: reference fields sampled on the pore
//! boundary plus the pore's own exterior corrections.

use std::sync::Arc;

use serde::Serialize;

use crate::bem::{
    exterior_traction_for_multiplier, exterior_traction_for_z, Equilibration, EquilibrationRecord,
    ExteriorOperator, ExteriorSolution, PointFields,
};
use crate::error::{PorodeError, Result};
use crate::fem::FieldSolution;
use crate::geometry::{design_velocity, Pore, PoreBoundaryMesh};
use crate::material::MaterialModel;
use crate::tensor::{Mat2, Vec2};

/// Gradient, strain and stress of one field at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldSample {
    /// Displacement gradient `∂u_i/∂x_j`.
    pub gradient: Mat2,
    /// Strain.
    pub strain: Mat2,
    /// Stress.
    pub stress: Mat2,
}

impl FieldSample {
    /// Sample from a displacement gradient.
    pub fn from_gradient(gradient: Mat2, material: &MaterialModel) -> Self {
        let strain = crate::tensor::sym(&gradient);
        FieldSample {
            gradient,
            strain,
            stress: material.stress(&strain),
        }
    }
}

impl From<PointFields> for FieldSample {
    fn from(p: PointFields) -> Self {
        FieldSample {
            gradient: p.gradient,
            strain: p.strain,
            stress: p.stress,
        }
    }
}

impl std::ops::Add for FieldSample {
    type Output = FieldSample;
    fn add(self, o: FieldSample) -> FieldSample {
        FieldSample {
            gradient: self.gradient + o.gradient,
            strain: self.strain + o.strain,
            stress: self.stress + o.stress,
        }
    }
}

/// Amount removed by the equilibration of each exterior problem of a pore.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct EquilibrationSummary {
    /// Relative imbalance of the primary correction traction.
    pub z: f64,
    /// Relative imbalance of the adjoint correction traction.
    pub lambda: f64,
    /// Relative imbalance of the `P` multiplier traction.
    pub p: f64,
    /// Relative imbalance of the `Q` multiplier traction.
    pub q: f64,
}

/// Boundary field data of one pore: the reference primary and adjoint
/// fields sampled at the quadrature points, and the pore's exterior
/// corrections of both.
#[derive(Debug, Clone)]
pub struct BoundaryFieldBundle {
    pore: Pore,
    boundary: Arc<PoreBoundaryMesh>,
    material: MaterialModel,
    velocity: Vec<Vec2>,
    normal: Vec<Vec2>,
    z0: Vec<FieldSample>,
    lambda0: Vec<FieldSample>,
    z_ext: Vec<FieldSample>,
    lambda_ext: Vec<FieldSample>,
    z_ext_solution: ExteriorSolution,
    lambda_ext_solution: ExteriorSolution,
    equilibration: [EquilibrationRecord; 2],
}

fn sample_reference(
    pore: &Pore,
    boundary: &PoreBoundaryMesh,
    field: &FieldSolution,
) -> Result<Vec<FieldSample>> {
    boundary
        .quadrature()
        .iter()
        .map(|q| {
            field
                .gradient(&q.point)
                .map(|g| FieldSample::from_gradient(g, field.material()))
                .map_err(|e| {
                    PorodeError::pore(
                        pore.id(),
                        format!("pore boundary leaves the reference mesh: {e}"),
                    )
                })
        })
        .collect()
}

impl BoundaryFieldBundle {
    /// Samples the reference fields on the pore boundary and solves the
    /// pore's exterior correction problems for both.
    pub fn build(
        pore: &Pore,
        operator: &ExteriorOperator,
        z: &FieldSolution,
        lambda: &FieldSolution,
        equilibration: Equilibration,
    ) -> Result<Self> {
        let boundary = operator.boundary().clone();
        let material = *operator.material();
        if z.material() != &material || lambda.material() != &material {
            return Err(PorodeError::validation(
                "reference solutions and exterior operator use different materials",
            ));
        }
        let z0 = sample_reference(pore, &boundary, z)?;
        let lambda0 = sample_reference(pore, &boundary, lambda)?;
        let tz =
            exterior_traction_for_z(&boundary, &z0.iter().map(|s| s.stress).collect::<Vec<_>>())?;
        let tl = exterior_traction_for_z(
            &boundary,
            &lambda0.iter().map(|s| s.stress).collect::<Vec<_>>(),
        )?;
        let z_ext_solution = operator.solve(&tz, equilibration)?;
        let lambda_ext_solution = operator.solve(&tl, equilibration)?;
        let z_ext = z_ext_solution
            .boundary_fields()
            .iter()
            .map(|&p| p.into())
            .collect();
        let lambda_ext = lambda_ext_solution
            .boundary_fields()
            .iter()
            .map(|&p| p.into())
            .collect();
        let velocity = boundary
            .quadrature()
            .iter()
            .map(|q| design_velocity(pore, &q.point))
            .collect();
        let normal = boundary
            .quadrature()
            .iter()
            .map(|q| boundary.segments()[q.segment].normal)
            .collect();
        let records = [
            z_ext_solution.equilibration(),
            lambda_ext_solution.equilibration(),
        ];
        Ok(BoundaryFieldBundle {
            pore: pore.clone(),
            boundary,
            material,
            velocity,
            normal,
            z0,
            lambda0,
            z_ext,
            lambda_ext,
            z_ext_solution,
            lambda_ext_solution,
            equilibration: records,
        })
    }

    /// The pore.
    pub fn pore(&self) -> &Pore {
        &self.pore
    }

    /// Boundary discretization.
    pub fn boundary(&self) -> &Arc<PoreBoundaryMesh> {
        &self.boundary
    }

    /// Material.
    pub fn material(&self) -> &MaterialModel {
        &self.material
    }

    /// Design velocity of this pore at each quadrature point.
    pub fn velocity(&self) -> &[Vec2] {
        &self.velocity
    }

    /// Normal (into the pore) at each quadrature point.
    pub fn normal(&self) -> &[Vec2] {
        &self.normal
    }

    /// Reference primary field.
    pub fn z0(&self) -> &[FieldSample] {
        &self.z0
    }

    /// Reference adjoint field.
    pub fn lambda0(&self) -> &[FieldSample] {
        &self.lambda0
    }

    /// Exterior correction of the primary field.
    pub fn z_ext(&self) -> &[FieldSample] {
        &self.z_ext
    }

    /// Exterior correction of the adjoint field.
    pub fn lambda_ext(&self) -> &[FieldSample] {
        &self.lambda_ext
    }

    /// Exterior solution of the primary correction.
    pub fn z_ext_solution(&self) -> &ExteriorSolution {
        &self.z_ext_solution
    }

    /// Exterior solution of the adjoint correction.
    pub fn lambda_ext_solution(&self) -> &ExteriorSolution {
        &self.lambda_ext_solution
    }

    /// Augmented primary field `z₀ + z_E` at quadrature point `k`.
    pub fn z_total(&self, k: usize) -> FieldSample {
        self.z0[k] + self.z_ext[k]
    }

    /// Augmented adjoint field `λ₀ + λ_E` at quadrature point `k`.
    pub fn lambda_total(&self, k: usize) -> FieldSample {
        self.lambda0[k] + self.lambda_ext[k]
    }

    /// Relative imbalances removed from the primary and adjoint tractions.
    pub fn equilibration(&self) -> [EquilibrationRecord; 2] {
        self.equilibration
    }
}

/// Exterior multiplier solutions driven by one source pore's velocity.
#[derive(Debug, Clone)]
pub struct MultiplierSolutions {
    source: u32,
    p: ExteriorSolution,
    q: ExteriorSolution,
}

impl MultiplierSolutions {
    /// Id of the source pore.
    pub fn source(&self) -> u32 {
        self.source
    }

    /// Adjoint-driven multiplier `P_E`.
    pub fn p(&self) -> &ExteriorSolution {
        &self.p
    }

    /// Primary-driven multiplier `Q_E`.
    pub fn q(&self) -> &ExteriorSolution {
        &self.q
    }

    /// Relative imbalances removed from the `P` and `Q` tractions.
    pub fn equilibration(&self) -> (EquilibrationRecord, EquilibrationRecord) {
        (self.p.equilibration(), self.q.equilibration())
    }

    /// `P_E` and `Q_E` samples at the quadrature points of `target`:
    /// boundary-limit values on the source pore itself, field-point values
    /// elsewhere.
    pub fn samples_on(&self, target: &BoundaryFieldBundle) -> (Vec<FieldSample>, Vec<FieldSample>) {
        if target.pore().id() == self.source {
            (
                self.p.boundary_fields().iter().map(|&f| f.into()).collect(),
                self.q.boundary_fields().iter().map(|&f| f.into()).collect(),
            )
        } else {
            target
                .boundary()
                .quadrature()
                .iter()
                .map(|qp| -> (FieldSample, FieldSample) {
                    (
                        self.p.fields_at(&qp.point).into(),
                        self.q.fields_at(&qp.point).into(),
                    )
                })
                .unzip()
        }
    }
}

/// Solves the two multiplier exterior problems on the source pore: `Q_E`,
/// the shape derivative of the augmented primary field, and `P_E`, that of
/// the augmented adjoint field, both for the source pore's design velocity.
/// The multiplier tractions are projected onto the self-equilibrated
/// subspace; the (discretization-level) removed amount is recorded.
pub fn solve_multipliers(
    source: &BoundaryFieldBundle,
    operator: &ExteriorOperator,
) -> Result<MultiplierSolutions> {
    if !Arc::ptr_eq(operator.boundary(), source.boundary()) {
        return Err(PorodeError::validation(
            "exterior operator does not belong to the source pore boundary",
        ));
    }
    let n = source.velocity.len();
    let sz: Vec<Mat2> = (0..n).map(|k| source.z_total(k).stress).collect();
    let sl: Vec<Mat2> = (0..n).map(|k| source.lambda_total(k).stress).collect();
    let tq = exterior_traction_for_multiplier(&source.boundary, &sz, &source.velocity)?;
    let tp = exterior_traction_for_multiplier(&source.boundary, &sl, &source.velocity)?;
    Ok(MultiplierSolutions {
        source: source.pore.id(),
        p: operator.solve(&tp, Equilibration::Project)?,
        q: operator.solve(&tq, Equilibration::Project)?,
    })
}
