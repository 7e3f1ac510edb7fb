//! Finite-difference oracle for the shape sensitivity of one pore, and the
//! boundary form of the same sensitivity evaluated with porous FE fields.

use std::sync::Arc;

use crate::error::{PorodeError, Result};
use crate::fem::{Functional, StiffnessSystem};
use crate::geometry::{polygon, Pore};
use crate::material::MaterialModel;
use crate::model::PorousModel;
use crate::tensor::{right_normal, Vec2};

use super::ground_truth::PorousAnalysis;

/// Width of the band over which the mesh morphing decays to zero around
/// `pore`: half the clearance to the nearest other pore or domain boundary,
/// capped at twice the pore's equivalent radius.
pub fn morphing_band(model: &PorousModel, pore: &Pore) -> f64 {
    let domain = &model.reference().domain;
    let to_boundary = pore
        .boundary()
        .iter()
        .map(|v| domain.distance_to_boundary(v))
        .fold(f64::INFINITY, f64::min);
    let to_pores = model
        .pores()
        .iter()
        .filter(|p| p.id() != pore.id())
        .map(|p| polygon::loop_distance(p.boundary(), pore.boundary()))
        .fold(f64::INFINITY, f64::min);
    (0.5 * to_boundary.min(to_pores)).min(2.0 * pore.equivalent_radius())
}

/// Morphing weight: one inside and on the pore, decaying smoothly to zero
/// at distance `band` from its boundary.
fn morph_weight(pore: &Pore, band: f64, x: &Vec2) -> f64 {
    if pore.contains(x) || pore.on_boundary(x) {
        return 1.0;
    }
    let t = (polygon::distance_to_loop(pore.boundary(), x) / band).min(1.0);
    1.0 - t * t * (3.0 - 2.0 * t)
}

/// Functional value after scaling pores about their centroids by mesh
/// morphing: every `(pore id, η)` in `scales` moves the pore boundary to
/// `X_c + η (X − X_c)` and drags the surrounding nodes along with a
/// smoothly decaying share of the displacement. Topology and boundary
/// conditions of the porous mesh of `analysis` are unchanged.
pub fn morphed_functional(
    model: &PorousModel,
    analysis: &PorousAnalysis,
    material: &MaterialModel,
    functional: &Functional,
    scales: &[(u32, f64)],
) -> Result<f64> {
    let mesh = &analysis.porous.mesh;
    let mut nodes: Vec<Vec2> = mesh.nodes().to_vec();
    for &(id, eta) in scales {
        let pore = model
            .pore(id)
            .ok_or_else(|| PorodeError::validation(format!("unknown pore id {id}")))?;
        let band = morphing_band(model, pore);
        let c = pore.centroid();
        for (x, x0) in nodes.iter_mut().zip(mesh.nodes()) {
            let w = morph_weight(pore, band, x0);
            if w > 0.0 {
                *x += (x0 - c) * ((eta - 1.0) * w);
            }
        }
    }
    let morphed = mesh.with_nodes(nodes)?;
    StiffnessSystem::new(Arc::new(morphed), *material)?
        .solve_primary()?
        .evaluate(functional)
}

fn check_step(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 0.5 {
        Ok(())
    } else {
        Err(PorodeError::validation(format!(
            "finite-difference step must lie in (0, 0.5), got {delta}"
        )))
    }
}

/// Central finite difference `dΨ/dη` at `η = 1` for the scaling of pore
/// `pore_id` (see [`morphed_functional`]).
pub fn fd_shape_sensitivity(
    model: &PorousModel,
    analysis: &PorousAnalysis,
    material: &MaterialModel,
    functional: &Functional,
    pore_id: u32,
    delta: f64,
) -> Result<f64> {
    check_step(delta)?;
    let values = crate::par::try_map(&[1.0 + delta, 1.0 - delta], |&eta| {
        morphed_functional(model, analysis, material, functional, &[(pore_id, eta)])
    })?;
    Ok((values[0] - values[1]) / (2.0 * delta))
}

/// Second finite difference `d²Ψ/dη²` at `η = 1` for the scaling of pore
/// `pore_id`.
pub fn fd_second_shape_sensitivity(
    model: &PorousModel,
    analysis: &PorousAnalysis,
    material: &MaterialModel,
    functional: &Functional,
    pore_id: u32,
    delta: f64,
) -> Result<f64> {
    check_step(delta)?;
    let values = crate::par::try_map(&[1.0 + delta, 1.0 - delta], |&eta| {
        morphed_functional(model, analysis, material, functional, &[(pore_id, eta)])
    })?;
    let centre = morphed_functional(model, analysis, material, functional, &[])?;
    Ok((values[0] - 2.0 * centre + values[1]) / (delta * delta))
}

/// Central finite difference of the mixed derivative `∂²Ψ/∂η_i∂η_j` at
/// `η_i = η_j = 1`.
pub fn fd_mixed_shape_sensitivity(
    model: &PorousModel,
    analysis: &PorousAnalysis,
    material: &MaterialModel,
    functional: &Functional,
    pores: (u32, u32),
    delta: f64,
) -> Result<f64> {
    check_step(delta)?;
    if pores.0 == pores.1 {
        return Err(PorodeError::validation(
            "mixed derivative needs two different pores",
        ));
    }
    let corners = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
    let values = crate::par::try_map(&corners, |&(a, b)| {
        morphed_functional(
            model,
            analysis,
            material,
            functional,
            &[(pores.0, 1.0 + a * delta), (pores.1, 1.0 + b * delta)],
        )
    })?;
    Ok((values[0] - values[1] - values[2] + values[3]) / (4.0 * delta * delta))
}

/// Shape sensitivity `−t ∮ σ(z):ε(λ) V_n ds` (t: thickness) of pore `pore_id` evaluated with
/// the porous FE fields. On the traction-free boundary only the tangential
/// strain survives, so `σ(z):ε(λ) = E ε_tt(z) ε_tt(λ)`; the tangential
/// strain of each boundary edge is taken from its nodal displacements.
pub fn porous_boundary_sensitivity(
    model: &PorousModel,
    analysis: &PorousAnalysis,
    pore_id: u32,
) -> Result<f64> {
    let pore = model
        .pore(pore_id)
        .ok_or_else(|| PorodeError::validation(format!("unknown pore id {pore_id}")))?;
    let (_, lp) = analysis
        .porous
        .pore_loops
        .iter()
        .find(|(id, _)| *id == pore_id)
        .ok_or_else(|| PorodeError::pore(pore_id, "pore boundary not found in the porous mesh"))?;
    let nodes = analysis.porous.mesh.nodes();
    let uz = analysis.z.displacements();
    let ul = analysis.lambda.displacements();
    let e = analysis.z.material().youngs_modulus;
    let c = pore.centroid();
    let mut sum = 0.0;
    for k in 0..lp.len() {
        let (a, b) = (lp[k], lp[(k + 1) % lp.len()]);
        let d = nodes[b] - nodes[a];
        let len = d.norm();
        let tau = d / len;
        // Loops run with the material on the left: the right normal points
        // into the pore.
        let n = right_normal(&tau);
        let v = (nodes[a] + nodes[b]) * 0.5 - c;
        let ez = tau.dot(&(uz[b] - uz[a])) / len;
        let el = tau.dot(&(ul[b] - ul[a])) / len;
        sum -= e * ez * el * v.dot(&n) * len;
    }
    Ok(analysis.porous.mesh.thickness() * sum)
}
