//! Closed-form solutions for a circular hole in an infinite plate and a
//! boundary-element check against them.

use std::sync::Arc;

use serde::Serialize;

use crate::bem::{Equilibration, ExteriorOperator};
use crate::error::Result;
use crate::geometry::{build_pore_boundary_mesh, Pore};
use crate::material::MaterialModel;
use crate::tensor::{vec2, Mat2, Vec2};

/// Polar stresses `(σ_rr, σ_θθ, σ_rθ)` at `(r, θ)` around a traction-free
/// hole of radius `a` under remote uniaxial stress `s` along `x`.
pub fn kirsch_polar(s: f64, a: f64, r: f64, theta: f64) -> (f64, f64, f64) {
    let q = (a / r).powi(2);
    let c2 = (2.0 * theta).cos();
    let s2 = (2.0 * theta).sin();
    let srr = 0.5 * s * (1.0 - q) + 0.5 * s * (1.0 - 4.0 * q + 3.0 * q * q) * c2;
    let stt = 0.5 * s * (1.0 + q) - 0.5 * s * (1.0 + 3.0 * q * q) * c2;
    let srt = -0.5 * s * (1.0 + 2.0 * q - 3.0 * q * q) * s2;
    (srr, stt, srt)
}

/// Cartesian stress at offset `x` from the hole centre for remote
/// principal stresses `s1` along `x` and `s2` along `y` (superposition of
/// two Kirsch solutions).
pub fn hole_stress(s1: f64, s2: f64, a: f64, x: &Vec2) -> Mat2 {
    let r = x.norm();
    let theta = x.y.atan2(x.x);
    let polar = |s: f64, th: f64| kirsch_polar(s, a, r, th);
    let (a1, b1, c1) = polar(s1, theta);
    let (a2, b2, c2) = polar(s2, theta - std::f64::consts::FRAC_PI_2);
    let (srr, stt, srt) = (a1 + a2, b1 + b2, c1 + c2);
    let (c, s) = (theta.cos(), theta.sin());
    let er = vec2(c, s);
    let et = vec2(-s, c);
    crate::tensor::outer(&er, &er) * srr
        + crate::tensor::outer(&et, &et) * stt
        + (crate::tensor::outer(&er, &et) + crate::tensor::outer(&et, &er)) * srt
}

/// Hoop stress on the hole boundary at angle `θ` for remote principal
/// stresses `s1` (along `x`) and `s2`.
pub fn boundary_hoop_stress(s1: f64, s2: f64, theta: f64) -> f64 {
    let c2 = (2.0 * theta).cos();
    (s1 + s2) - 2.0 * (s1 - s2) * c2
}

/// Increase of the plane-stress complementary energy (per unit thickness,
/// twice the energy) caused by a hole of radius `a` under remote principal
/// stresses `s1`, `s2`: `π a² [(s1+s2)² + 2 (s1−s2)²] / E`.
pub fn hole_compliance_change(s1: f64, s2: f64, a: f64, youngs_modulus: f64) -> f64 {
    std::f64::consts::PI * a * a * ((s1 + s2).powi(2) + 2.0 * (s1 - s2).powi(2)) / youngs_modulus
}

/// One point of a hoop-stress comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HoopSample {
    /// Polar angle of the boundary point.
    pub theta: f64,
    /// Boundary-element hoop stress.
    pub computed: f64,
    /// Closed-form hoop stress.
    pub exact: f64,
}

/// Result of a hoop-stress check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HoopCheck {
    /// Samples at every boundary quadrature point.
    pub samples: Vec<HoopSample>,
    /// Maximum absolute error divided by the maximum closed-form hoop
    /// stress.
    pub max_relative_error: f64,
}

/// Solves the exterior problem of a polygonal circular hole of radius `a`
/// with `elements` boundary elements under remote stresses `s1`, `s2` and
/// compares the hoop stress with the closed form.
pub fn kirsch_hoop_check(
    material: &MaterialModel,
    a: f64,
    elements: usize,
    s1: f64,
    s2: f64,
) -> Result<HoopCheck> {
    let pore = Pore::circle(0, Vec2::zeros(), a, elements)?;
    let boundary = Arc::new(build_pore_boundary_mesh(&pore, 2.0 * a)?);
    let operator = ExteriorOperator::new(boundary.clone(), *material)?;
    let remote = Mat2::new(s1, 0.0, 0.0, s2);
    let traction: Vec<Vec2> = boundary
        .quadrature()
        .iter()
        .map(|q| -(remote * boundary.segments()[q.segment].normal))
        .collect();
    let solution = operator.solve(&traction, Equilibration::default())?;
    let samples: Vec<HoopSample> = boundary
        .quadrature()
        .iter()
        .zip(solution.boundary_fields())
        .map(|(q, f)| {
            let tau = boundary.segments()[q.segment].tangent;
            let total = remote + f.stress;
            let theta = q.point.y.atan2(q.point.x);
            HoopSample {
                theta,
                computed: tau.dot(&(total * tau)),
                exact: boundary_hoop_stress(s1, s2, theta),
            }
        })
        .collect();
    let peak = samples.iter().map(|s| s.exact.abs()).fold(0.0, f64::max);
    let worst = samples
        .iter()
        .map(|s| (s.computed - s.exact).abs())
        .fold(0.0, f64::max);
    Ok(HoopCheck {
        samples,
        max_relative_error: worst / peak.max(f64::MIN_POSITIVE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_is_consistent() {
        // Traction free on r = a, hoop 3S at θ = 90°, −S at θ = 0.
        let (srr, stt, srt) = kirsch_polar(2.0, 1.0, 1.0, 0.7);
        assert!(srr.abs() < 1e-14 && srt.abs() < 1e-14);
        assert!((stt - boundary_hoop_stress(2.0, 0.0, 0.7)).abs() < 1e-12);
        assert!((boundary_hoop_stress(1.0, 0.0, std::f64::consts::FRAC_PI_2) - 3.0).abs() < 1e-14);
        // Far field recovers the remote stress.
        let s = hole_stress(1.0, -0.5, 1.0, &vec2(3000.0, 1000.0));
        assert!((s - Mat2::new(1.0, 0.0, 0.0, -0.5)).norm() < 1e-6);
        // Hydrostatic: hoop 2p everywhere on the boundary.
        let h = hole_stress(1.0, 1.0, 1.0, &vec2(0.0, 1.0));
        assert!((h[(0, 0)] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_elements_match_kirsch() {
        let m = MaterialModel::new(6.89e10, 0.35).unwrap();
        let check = kirsch_hoop_check(&m, 5.0, 128, 1.0e6, 0.0).unwrap();
        assert!(
            check.max_relative_error < 0.02,
            "{}",
            check.max_relative_error
        );
    }
}
