//! Assembly of the topological (TSE), first-order (FOE) and second-order
//! (SOE) porosity estimates from reference-domain solves only.
//!
//! Pipeline: mesh and solve the pore-free reference domain for the primary
//! field `z₀` and the adjoint `λ₀`; for every pore solve the exterior
//! corrections `z_E`, `λ_E` and the multipliers `P_E`, `Q_E`; evaluate the
//! topological, first-order and second-order terms; sum them.

mod report;

use std::sync::Arc;
use crate::clock::Stopwatch;

use serde::{Deserialize, Serialize};

pub use report::{
    effectivity_index, CsvRow, Effectivity, EstimateReport, MeshStatsReport, PairTerm, PoreTerms,
    SensitivityBreakdown, Timings, Totals, CSV_HEADER,
};

use crate::bem::{Equilibration, ExteriorOperator};
use crate::error::{PorodeError, Result};
use crate::fem::{FieldSolution, Functional, StiffnessSystem};
use crate::geometry::{
    build_pore_boundary_mesh, select_interaction_pairs, HoleLoop, PairPolicy, Pore, ReferenceDomain,
};
use crate::material::MaterialModel;
use crate::mesh::{triangulate, GeneratedMesh, MeshSizing, PointLocator, VolumeMesh};
use crate::model::{PointLoad, PorousModel};
use crate::sensitivity::{
    first_order_term, second_order_term, seed_measure, solve_multipliers, topo_derivative_at_pore,
    BoundaryFieldBundle, EquilibrationSummary, MultiplierSolutions, TopoParams,
};
use crate::tensor::Vec2;

/// How the interaction sum over pore pairs is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    /// Both orders `(i→j)` and `(j→i)` of every selected pair are summed.
    #[default]
    Ordered,
    /// Each selected pair contributes once, as the mean of its two orders.
    Unordered,
}

/// Boundary-element discretization controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BemOptions {
    /// Minimum number of boundary elements per pore.
    pub min_segments: usize,
    /// Upper bound on the boundary-element length.
    pub max_segment_length: f64,
    /// Largest relative resultant imbalance accepted in the correction
    /// tractions of the primary and adjoint fields.
    pub equilibrium_tolerance: f64,
}

impl Default for BemOptions {
    fn default() -> Self {
        BemOptions {
            min_segments: 128,
            max_segment_length: 0.5,
            equilibrium_tolerance: 0.05,
        }
    }
}

/// Estimator options.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateOptions {
    /// Mesh sizes of the reference mesh.
    #[serde(default)]
    pub sizing: MeshSizing,
    /// Pair selection policy for the interaction terms.
    #[serde(default)]
    pub pair_policy: PairPolicy,
    /// Interaction sum convention.
    #[serde(default)]
    pub pair_mode: PairMode,
    /// Topological-term parameters (including the shape-parameter lower
    /// limit `ξ`).
    #[serde(default)]
    pub topo: TopoParams,
    /// Boundary-element controls.
    #[serde(default)]
    pub bem: BemOptions,
    /// Whether the second-order terms are evaluated (otherwise they are
    /// reported as zero and the SOE equals the FOE).
    #[serde(default = "default_true")]
    pub second_order: bool,
}

fn default_true() -> bool {
    true
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            sizing: MeshSizing::default(),
            pair_policy: PairPolicy::default(),
            pair_mode: PairMode::Ordered,
            topo: TopoParams::default(),
            bem: BemOptions::default(),
            second_order: true,
        }
    }
}

impl EstimateOptions {
    /// Checks all parameters.
    pub fn validate(&self) -> Result<()> {
        self.sizing.validate()?;
        self.topo.validate()?;
        if self.bem.min_segments < 8
            || !(self.bem.max_segment_length > 0.0)
            || !(self.bem.equilibrium_tolerance > 0.0)
        {
            return Err(PorodeError::validation(
                "bem options: min_segments >= 8, max_segment_length > 0 and equilibrium_tolerance > 0 required",
            ));
        }
        Ok(())
    }
}

/// Solved reference problem: pore-free mesh, factorized stiffness, primary
/// and adjoint fields and the reference functional value.
#[derive(Debug)]
pub struct ReferenceSolution {
    /// Generated reference mesh.
    pub generated: GeneratedMesh,
    /// Factorized stiffness system.
    pub system: StiffnessSystem,
    /// Primary field `z₀`.
    pub z: FieldSolution,
    /// Adjoint field `λ₀`.
    pub lambda: FieldSolution,
    /// `Ψ₀`.
    pub psi0: f64,
    /// Meshing time (s).
    pub meshing_seconds: f64,
    /// Solve time (s).
    pub solving_seconds: f64,
}

/// Meshes the pore-free reference domain (refined around the pore sites,
/// with the functional points as vertices) and solves the primary and
/// adjoint problems.
pub fn solve_reference(
    model: &PorousModel,
    material: &MaterialModel,
    functional: &Functional,
    sizing: &MeshSizing,
) -> Result<ReferenceSolution> {
    functional.validate()?;
    let t0 = Stopwatch::start();
    let options = sizing.reference_options(model.pores());
    let generated = triangulate(model.reference(), &[], &functional.points(), &options)?;
    let meshing_seconds = t0.seconds();
    let t1 = Stopwatch::start();
    let system = StiffnessSystem::new(Arc::new(generated.mesh.clone()), *material)?;
    let z = system.solve_primary()?;
    let lambda = system.solve_adjoint(functional)?;
    let psi0 = z.evaluate(functional)?;
    Ok(ReferenceSolution {
        generated,
        system,
        z,
        lambda,
        psi0,
        meshing_seconds,
        solving_seconds: t1.seconds(),
    })
}

/// Reference domain described by the boundary loops of a prescribed mesh:
/// the outer loop is tagged `boundary`, interior loops `hole1`, `hole2`, …
pub fn domain_from_mesh(mesh: &VolumeMesh) -> Result<ReferenceDomain> {
    let loops = mesh.boundary_loops()?;
    let mut it = loops.into_iter();
    let outer: Vec<Vec2> = it
        .next()
        .ok_or_else(|| PorodeError::validation("mesh has no boundary"))?
        .iter()
        .map(|&i| mesh.nodes()[i])
        .collect();
    let tags = vec!["boundary".to_string(); outer.len()];
    let holes = it
        .enumerate()
        .map(|(k, lp)| HoleLoop {
            vertices: lp.iter().map(|&i| mesh.nodes()[i]).collect(),
            tag: format!("hole{}", k + 1),
        })
        .collect();
    ReferenceDomain::new(outer, tags, holes, mesh.thickness())
}

/// Reference problem on a prescribed mesh that carries its own supports and
/// edge loads; `point_loads` are applied on top (at the coinciding node, or
/// distributed over the containing element). The pores are validated
/// against the mesh boundary; the mesh is used as given (no refinement
/// around the pore sites).
pub fn solve_reference_on_mesh(
    mut mesh: VolumeMesh,
    point_loads: Vec<PointLoad>,
    pores: Vec<Pore>,
    material: &MaterialModel,
    functional: &Functional,
) -> Result<(PorousModel, ReferenceSolution)> {
    functional.validate()?;
    let model = PorousModel::on_mesh_domain(domain_from_mesh(&mesh)?, point_loads, pores)?;
    let locator = PointLocator::new(&mesh);
    let scale = model.reference().domain.bounding_box();
    let tol = 1e-9 * (scale.1 - scale.0).norm();
    for l in &model.reference().point_loads {
        match mesh
            .nodes()
            .iter()
            .position(|v| (v - l.point).norm() <= tol)
        {
            Some(n) => mesh.add_nodal_force(n, l.force)?,
            None => mesh.add_point_force(&locator, l.point, l.force)?,
        }
    }
    let t1 = Stopwatch::start();
    let element_pore = vec![None; mesh.num_elements()];
    let system = StiffnessSystem::new(Arc::new(mesh.clone()), *material)?;
    let z = system.solve_primary()?;
    let lambda = system.solve_adjoint(functional)?;
    let psi0 = z.evaluate(functional)?;
    let reference = ReferenceSolution {
        generated: GeneratedMesh {
            mesh,
            element_pore,
            pore_loops: Vec::new(),
        },
        system,
        z,
        lambda,
        psi0,
        meshing_seconds: 0.0,
        solving_seconds: t1.seconds(),
    };
    Ok((model, reference))
}

/// Boundary discretization of a pore according to `options`.
pub fn pore_boundary(
    pore: &Pore,
    options: &BemOptions,
) -> Result<Arc<crate::geometry::PoreBoundaryMesh>> {
    let target = options
        .max_segment_length
        .min(pore.perimeter() / options.min_segments as f64);
    Ok(Arc::new(build_pore_boundary_mesh(pore, target)?))
}

/// Exterior data of one pore.
pub struct PoreAnalysis {
    /// Exterior operator on the pore boundary.
    pub operator: ExteriorOperator,
    /// Reference and exterior fields on the boundary.
    pub bundle: BoundaryFieldBundle,
    /// Multipliers driven by this pore's velocity (second order only).
    pub multipliers: Option<MultiplierSolutions>,
    /// Time spent in the correction solves (s).
    pub exterior_seconds: f64,
    /// Time spent in the multiplier solves (s).
    pub multiplier_seconds: f64,
}

/// Assembles the exterior operator of `pore`, solves its correction and
/// (optionally) multiplier problems.
pub fn analyze_pore(
    pore: &Pore,
    reference: &ReferenceSolution,
    options: &EstimateOptions,
) -> Result<PoreAnalysis> {
    let t0 = Stopwatch::start();
    let boundary = pore_boundary(pore, &options.bem)?;
    let operator = ExteriorOperator::new(boundary, *reference.z.material())?;
    let bundle = BoundaryFieldBundle::build(
        pore,
        &operator,
        &reference.z,
        &reference.lambda,
        Equilibration::Strict {
            tolerance: options.bem.equilibrium_tolerance,
        },
    )?;
    let exterior_seconds = t0.seconds();
    let t1 = Stopwatch::start();
    let multipliers = if options.second_order {
        Some(solve_multipliers(&bundle, &operator)?)
    } else {
        None
    };
    Ok(PoreAnalysis {
        operator,
        bundle,
        multipliers,
        exterior_seconds,
        multiplier_seconds: t1.seconds(),
    })
}

/// Runs the estimator on `model`; never meshes or solves the porous domain.
pub fn estimate(
    model: &PorousModel,
    material: &MaterialModel,
    functional: &Functional,
    options: &EstimateOptions,
) -> Result<EstimateReport> {
    options.validate()?;
    let start = Stopwatch::start();
    let reference = solve_reference(model, material, functional, &options.sizing)?;
    let mut report = estimate_with_reference(model, &reference, options)?;
    report.timings.meshing = reference.meshing_seconds;
    report.timings.reference_solve = reference.solving_seconds;
    report.timings.total = start.seconds();
    Ok(report)
}

/// Runs the estimator from an already solved reference problem.
pub fn estimate_with_reference(
    model: &PorousModel,
    reference: &ReferenceSolution,
    options: &EstimateOptions,
) -> Result<EstimateReport> {
    options.validate()?;
    let start = Stopwatch::start();
    let xi = options.topo.xi_fraction;
    // Boundary and point integrals are per unit thickness; the reference
    // fields already carry the 1/thickness scaling of the response.
    let h = model.reference().domain.thickness();
    let pores = model.pores();
    let analyses = crate::par::try_map(pores, |p| analyze_pore(p, reference, options))?;
    let t_sens = Stopwatch::start();
    let mut pore_terms = Vec::with_capacity(pores.len());
    for (pore, a) in pores.iter().zip(&analyses) {
        let t =
            topo_derivative_at_pore(pore, &reference.z, &reference.lambda, options.topo.formula)?;
        let rho = xi * pore.equivalent_radius();
        let d_topo = h * seed_measure(options.topo.formula, rho) * t;
        let d_topo_full = h * seed_measure(options.topo.formula, pore.equivalent_radius()) * t;
        let d1_shape = h * first_order_term(&a.bundle, xi)?;
        let d2_self = match &a.multipliers {
            Some(m) => h * second_order_term(m, &a.bundle, xi)?,
            None => 0.0,
        };
        let [ez, el] = a.bundle.equilibration();
        let (ep, eq) = a
            .multipliers
            .as_ref()
            .map(|m| m.equilibration())
            .map_or((0.0, 0.0), |(p, q)| {
                (p.relative_imbalance, q.relative_imbalance)
            });
        pore_terms.push(PoreTerms {
            id: pore.id(),
            equivalent_radius: pore.equivalent_radius(),
            d_topo,
            d_topo_full,
            d1_shape,
            d2_self,
            equilibration: EquilibrationSummary {
                z: ez.relative_imbalance,
                lambda: el.relative_imbalance,
                p: ep,
                q: eq,
            },
        });
    }
    let pairs = select_interaction_pairs(pores, options.pair_policy)?;
    let index_of = |id: u32| {
        pores
            .iter()
            .position(|p| p.id() == id)
            .expect("pair ids come from the pore set")
    };
    let mut pair_terms = Vec::new();
    if options.second_order {
        let ordered = crate::par::try_map(&pairs, |pair| -> Result<[f64; 2]> {
            let (a, b) = (&analyses[index_of(pair.i)], &analyses[index_of(pair.j)]);
            let ij = second_order_term(
                a.multipliers.as_ref().expect("second order enabled"),
                &b.bundle,
                xi,
            )?;
            let ji = second_order_term(
                b.multipliers.as_ref().expect("second order enabled"),
                &a.bundle,
                xi,
            )?;
            Ok([h * ij, h * ji])
        })?;
        for (pair, [ij, ji]) in pairs.iter().zip(ordered) {
            match options.pair_mode {
                PairMode::Ordered => {
                    pair_terms.push(PairTerm {
                        source: pair.i,
                        target: pair.j,
                        surface_distance: pair.surface_distance,
                        d2_int: ij,
                    });
                    pair_terms.push(PairTerm {
                        source: pair.j,
                        target: pair.i,
                        surface_distance: pair.surface_distance,
                        d2_int: ji,
                    });
                }
                PairMode::Unordered => pair_terms.push(PairTerm {
                    source: pair.i,
                    target: pair.j,
                    surface_distance: pair.surface_distance,
                    d2_int: 0.5 * (ij + ji),
                }),
            }
        }
    }
    let breakdown = SensitivityBreakdown::new(pore_terms, pair_terms);
    let psi0 = reference.psi0;
    let tse = psi0 + breakdown.totals.d_topo_full;
    let foe = psi0 + breakdown.totals.d_topo + breakdown.totals.d1_shape;
    let soe = foe + breakdown.totals.d2_self + breakdown.totals.d2_int;
    let sensitivity_seconds = t_sens.seconds();
    let timings = Timings {
        meshing: 0.0,
        reference_solve: 0.0,
        exterior_solves: analyses.iter().map(|a| a.exterior_seconds).sum(),
        multiplier_solves: analyses.iter().map(|a| a.multiplier_seconds).sum(),
        sensitivity: sensitivity_seconds,
        ground_truth: None,
        total: start.seconds(),
    };
    let report = EstimateReport {
        psi0,
        tse,
        foe,
        soe,
        breakdown,
        ground_truth: None,
        ground_truth_psi0: None,
        effectivity: None,
        mesh_stats: MeshStatsReport {
            reference: reference.generated.mesh.stats(),
            porous: None,
            reference_to_porous_ratio: None,
        },
        timings,
        warnings: model.warnings().to_vec(),
    };
    report.check()?;
    Ok(report)
}
