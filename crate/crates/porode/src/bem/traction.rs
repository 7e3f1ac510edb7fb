//! Neumann data for the exterior problems: the correction traction of the
//! reference fields and the distributional traction of the multipliers.

use super::solver::{midpoint_derivative, midpoint_neighbour};
use crate::error::{PorodeError, Result};
use crate::geometry::PoreBoundaryMesh;
use crate::tensor::{Mat2, Vec2};

/// Minimum number of boundary segments for tangential differencing.
pub const MIN_DIFFERENCING_SEGMENTS: usize = 8;

/// Traction `−σ·n` at every quadrature point, given the reference stress
/// `σ` at those points (normal pointing into the pore). It cancels the
/// reference traction so that the pore surface becomes traction-free.
pub fn exterior_traction_for_z(boundary: &PoreBoundaryMesh, stress: &[Mat2]) -> Result<Vec<Vec2>> {
    let q = boundary.quadrature();
    if stress.len() != q.len() {
        return Err(PorodeError::Exterior {
            pore: boundary.pore_id(),
            message: format!("expected {} stress values, got {}", q.len(), stress.len()),
        });
    }
    Ok(q.iter()
        .zip(stress)
        .map(|(p, s)| -(s * boundary.segments()[p.segment].normal))
        .collect())
}

/// Neumann data of a multiplier exterior problem: the traction that drives
/// the shape derivative of a field when the pore boundary moves with the
/// design velocity `V`.
///
/// On a traction-free boundary the driving field's stress is purely
/// tangential, and moving the boundary with normal speed `V_n` (normal into
/// the pore) requires the traction `d/ds (V_n σ·τ)`, the arc-length
/// derivative along the clockwise traversal. The vector `V_n σ·τ` is
/// averaged per element, differentiated by non-uniform centred differences
/// between element midpoints and interpolated linearly to the quadrature
/// points. Being the derivative of a periodic function, the result carries
/// no net force.
pub fn exterior_traction_for_multiplier(
    boundary: &PoreBoundaryMesh,
    stress: &[Mat2],
    velocity: &[Vec2],
) -> Result<Vec<Vec2>> {
    let segs = boundary.segments();
    let q = boundary.quadrature();
    if segs.len() < MIN_DIFFERENCING_SEGMENTS {
        return Err(PorodeError::Exterior {
            pore: boundary.pore_id(),
            message: format!(
                "{} boundary segments are too few for tangential differencing (need at least {})",
                segs.len(),
                MIN_DIFFERENCING_SEGMENTS
            ),
        });
    }
    if stress.len() != q.len() || velocity.len() != q.len() {
        return Err(PorodeError::Exterior {
            pore: boundary.pore_id(),
            message: "stress and velocity must be given at every quadrature point".into(),
        });
    }
    let mut mean = vec![Vec2::zeros(); segs.len()];
    for (k, p) in q.iter().enumerate() {
        let seg = &segs[p.segment];
        let vn = velocity[k].dot(&seg.normal);
        mean[p.segment] += (stress[k] * seg.tangent) * (vn * p.weight / seg.length);
    }
    let derivative = midpoint_derivative(segs, &mean);
    Ok((0..q.len())
        .map(|k| {
            let (other, w) = midpoint_neighbour(boundary, k);
            derivative[q[k].segment] * (1.0 - w) + derivative[other] * w
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_pore_boundary_mesh, Pore};
    use crate::tensor::{outer, vec2};

    #[test]
    fn zero_velocity_gives_zero_traction() {
        let pore = Pore::circle(3, vec2(1.0, 1.0), 2.0, 64).unwrap();
        let b = build_pore_boundary_mesh(&pore, 1.0).unwrap();
        let n = b.quadrature().len();
        let t = exterior_traction_for_multiplier(
            &b,
            &vec![Mat2::new(1.0, 2.0, 2.0, 4.0); n],
            &vec![Vec2::zeros(); n],
        )
        .unwrap();
        assert!(t.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn hoop_stress_on_a_circle_matches_closed_form_derivative() {
        // σ = s(θ) τ⊗τ with s = cos 2θ on a circle of radius R, V = X − X_c
        // so V_n = −R. Clockwise traversal: dθ/ds = −1/R, τ = (sin θ, −cos θ),
        // dτ/ds = −(cos θ, sin θ)/R. Hence
        // d/ds(V_n s τ) = −R (s' (−1/R) τ − s (cos θ, sin θ)/R)
        //              = −2 sin 2θ τ + cos 2θ (cos θ, sin θ).
        let r = 2.0;
        let pore = Pore::circle(3, vec2(0.0, 0.0), r, 256).unwrap();
        let b = build_pore_boundary_mesh(&pore, 1.0).unwrap();
        let mut stress = Vec::new();
        let mut velocity = Vec::new();
        for p in b.quadrature() {
            let th = p.point.y.atan2(p.point.x);
            let tau = vec2(th.sin(), -th.cos());
            stress.push(outer(&tau, &tau) * (2.0 * th).cos());
            velocity.push(crate::geometry::design_velocity(&pore, &p.point));
        }
        let t = exterior_traction_for_multiplier(&b, &stress, &velocity).unwrap();
        let mut worst = 0.0_f64;
        for (k, p) in b.quadrature().iter().enumerate() {
            let th = p.point.y.atan2(p.point.x);
            let tau = vec2(th.sin(), -th.cos());
            let exact =
                tau * (-2.0 * (2.0 * th).sin()) + vec2(th.cos(), th.sin()) * (2.0 * th).cos();
            worst = worst.max((t[k] - exact).norm());
        }
        assert!(worst < 0.02, "{worst}");
        let (force, _) = super::super::solver::resultants(&b, &t);
        assert!(force.norm() < 1e-3, "{force:?}");
    }

    #[test]
    fn too_coarse_boundary_is_rejected() {
        let pore = Pore::circle(9, vec2(0.0, 0.0), 1.0, 6).unwrap();
        let b = build_pore_boundary_mesh(&pore, 10.0).unwrap();
        let n = b.quadrature().len();
        let err =
            exterior_traction_for_multiplier(&b, &vec![Mat2::zeros(); n], &vec![Vec2::zeros(); n])
                .unwrap_err();
        assert!(matches!(err, PorodeError::Exterior { pore: 9, .. }));
    }
}
