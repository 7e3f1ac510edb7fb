//! Topological sensitivity: first-order effect of inserting an
//! infinitesimal hole at a point.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{PorodeError, Result};
use crate::fem::FieldSolution;
use crate::geometry::Pore;
use crate::material::MaterialModel;
use crate::tensor::{ddot, Mat2};

/// Closed form used for the topological derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopoFormula {
    /// Circular hole in plane stress:
    /// `T = [4 σ(z):σ(λ) − tr σ(z) tr σ(λ)] / E`, measure `π ρ²`.
    #[default]
    PlaneStress,
    /// Spherical cavity in three-dimensional elasticity:
    /// `T = ¾ (1−ν)/(7−5ν) [10 σ(z):ε(λ) − (1−5ν)/(1−2ν) tr σ(z) tr ε(λ)]`,
    /// measure `4/3 π ρ³`.
    Spherical3d,
}

/// Parameters of the topological term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopoParams {
    /// Size of the seed hole relative to the pore's equivalent radius; it is
    /// also the lower limit of the shape parameter in the shape terms.
    pub xi_fraction: f64,
    /// Closed form of the derivative.
    #[serde(default)]
    pub formula: TopoFormula,
}

impl Default for TopoParams {
    fn default() -> Self {
        TopoParams {
            xi_fraction: 0.01,
            formula: TopoFormula::PlaneStress,
        }
    }
}

impl TopoParams {
    /// Checks `0 < xi_fraction < 1`.
    pub fn validate(&self) -> Result<()> {
        if self.xi_fraction > 0.0 && self.xi_fraction < 1.0 {
            Ok(())
        } else {
            Err(PorodeError::validation(format!(
                "xi_fraction must lie in (0, 1), got {}",
                self.xi_fraction
            )))
        }
    }
}

/// Topological derivative from the primary stress and the adjoint stress.
pub fn topological_derivative(
    formula: TopoFormula,
    stress_z: &Mat2,
    stress_lambda: &Mat2,
    material: &MaterialModel,
) -> f64 {
    match formula {
        TopoFormula::PlaneStress => {
            (4.0 * ddot(stress_z, stress_lambda) - stress_z.trace() * stress_lambda.trace())
                / material.youngs_modulus
        }
        TopoFormula::Spherical3d => {
            let strain_lambda = material.compliance(stress_lambda);
            spherical_derivative(
                ddot(stress_z, &strain_lambda),
                stress_z.trace() * strain_lambda.trace(),
                material.poissons_ratio,
            )
        }
    }
}

/// Three-dimensional spherical-cavity derivative from the scalar
/// invariants `σ(z):ε(λ)` and `tr σ(z) · tr ε(λ)`.
pub fn spherical_derivative(stress_strain: f64, trace_product: f64, nu: f64) -> f64 {
    0.75 * (1.0 - nu) / (7.0 - 5.0 * nu)
        * (10.0 * stress_strain - (1.0 - 5.0 * nu) / (1.0 - 2.0 * nu) * trace_product)
}

/// Measure (area in 2D, volume in 3D) of a seed hole of radius `rho`.
pub fn seed_measure(formula: TopoFormula, rho: f64) -> f64 {
    match formula {
        TopoFormula::PlaneStress => PI * rho * rho,
        TopoFormula::Spherical3d => 4.0 / 3.0 * PI * rho.powi(3),
    }
}

/// Topological derivative at the pore centroid from recovered reference
/// fields.
pub fn topo_derivative_at_pore(
    pore: &Pore,
    z: &FieldSolution,
    lambda: &FieldSolution,
    formula: TopoFormula,
) -> Result<f64> {
    let c = pore.centroid();
    let sz = z
        .stress(&c)
        .map_err(|e| PorodeError::pore(pore.id(), e.to_string()))?;
    let sl = lambda
        .stress(&c)
        .map_err(|e| PorodeError::pore(pore.id(), e.to_string()))?;
    Ok(topological_derivative(formula, &sz, &sl, z.material()))
}

/// `D_topo`: topological derivative at the pore centroid times the measure
/// of a seed hole of radius `xi_fraction × equivalent radius`.
pub fn topo_sensitivity(
    pore: &Pore,
    z: &FieldSolution,
    lambda: &FieldSolution,
    params: &TopoParams,
) -> Result<f64> {
    params.validate()?;
    let t = topo_derivative_at_pore(pore, z, lambda, params.formula)?;
    Ok(seed_measure(
        params.formula,
        params.xi_fraction * pore.equivalent_radius(),
    ) * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spherical_formula_unit_invariants() {
        // ¾ · 0.65/5.25 · (10 + 0.75/0.3) evaluated by hand: 1.160714285714…
        let v = spherical_derivative(1.0, 1.0, 0.35);
        assert!((v - 1.160_714_285_714_285_7).abs() < 1e-12, "{v}");
    }

    #[test]
    fn plane_stress_formula_matches_hole_energy() {
        // Complementary-energy increase of a circular hole of radius a in a
        // plane-stress sheet under principal stresses s1, s2 (Kirsch):
        // ΔΠ* = π a² [(s1+s2)² + 2 (s1−s2)²] / (2E); the compliance change
        // is 2 ΔΠ*, which the derivative times πa² must reproduce.
        let m = MaterialModel::new(200.0, 0.3).unwrap();
        let (s1, s2) = (3.0, -1.25);
        let s = Mat2::new(s1, 0.0, 0.0, s2);
        let a = 0.7;
        let expected =
            PI * a * a * ((s1 + s2).powi(2) + 2.0 * (s1 - s2).powi(2)) / m.youngs_modulus;
        let got = seed_measure(TopoFormula::PlaneStress, a)
            * topological_derivative(TopoFormula::PlaneStress, &s, &s, &m);
        assert!((got - expected).abs() < 1e-12 * expected.abs());
    }

    #[test]
    fn zero_adjoint_gives_zero() {
        let m = MaterialModel::new(200.0, 0.3).unwrap();
        let s = Mat2::new(1.0, 2.0, 2.0, 3.0);
        for f in [TopoFormula::PlaneStress, TopoFormula::Spherical3d] {
            assert_eq!(topological_derivative(f, &s, &Mat2::zeros(), &m), 0.0);
        }
    }
}
