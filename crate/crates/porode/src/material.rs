//! Isotropic linear-elastic material in plane stress.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{PorodeError, Result};
use crate::tensor::Mat2;

/// Isotropic plane-stress material.
///
/// Stresses are in the same unit as `youngs_modulus`; with lengths in
/// millimetres and forces in newtons the natural stress unit is N/mm².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialModel {
    /// Young's modulus `E` (> 0).
    pub youngs_modulus: f64,
    /// Poisson's ratio `ν` (−1 < ν < 0.5).
    pub poissons_ratio: f64,
}

impl MaterialModel {
    /// Validated constructor.
    pub fn new(youngs_modulus: f64, poissons_ratio: f64) -> Result<Self> {
        let m = MaterialModel {
            youngs_modulus,
            poissons_ratio,
        };
        m.validate()?;
        Ok(m)
    }

    /// Checks `E > 0` and `−1 < ν < 0.5`.
    pub fn validate(&self) -> Result<()> {
        if !(self.youngs_modulus.is_finite() && self.youngs_modulus > 0.0) {
            return Err(PorodeError::validation(format!(
                "Young's modulus must be positive and finite, got {}",
                self.youngs_modulus
            )));
        }
        if !(self.poissons_ratio > -1.0 && self.poissons_ratio < 0.5) {
            return Err(PorodeError::validation(format!(
                "Poisson's ratio must lie in (-1, 0.5), got {}",
                self.poissons_ratio
            )));
        }
        Ok(())
    }

    /// Shear modulus `μ = E / (2(1+ν))`.
    pub fn shear_modulus(&self) -> f64 {
        self.youngs_modulus / (2.0 * (1.0 + self.poissons_ratio))
    }

    /// Plane-stress tangent in Voigt notation `[σxx, σyy, σxy] = C [εxx, εyy, γxy]`
    /// with engineering shear strain `γxy = 2εxy`.
    pub fn tangent(&self) -> Matrix3<f64> {
        let e = self.youngs_modulus;
        let nu = self.poissons_ratio;
        let f = e / (1.0 - nu * nu);
        Matrix3::new(
            f,
            f * nu,
            0.0,
            f * nu,
            f,
            0.0,
            0.0,
            0.0,
            f * (1.0 - nu) / 2.0,
        )
    }

    /// Stress tensor of a (symmetric) strain tensor.
    pub fn stress(&self, strain: &Mat2) -> Mat2 {
        let e = self.youngs_modulus;
        let nu = self.poissons_ratio;
        let f = e / (1.0 - nu * nu);
        let tr = strain.trace();
        (strain * (1.0 - nu) + Mat2::identity() * (nu * tr)) * f
    }

    /// Strain tensor of a (symmetric) in-plane stress tensor.
    pub fn compliance(&self, stress: &Mat2) -> Mat2 {
        let e = self.youngs_modulus;
        let nu = self.poissons_ratio;
        (stress * (1.0 + nu) - Mat2::identity() * (nu * stress.trace())) / e
    }

    /// Copy with Young's modulus multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        MaterialModel {
            youngs_modulus: self.youngs_modulus * factor,
            poissons_ratio: self.poissons_ratio,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(MaterialModel::new(0.0, 0.3).is_err());
        assert!(MaterialModel::new(1.0, 0.5).is_err());
        assert!(MaterialModel::new(1.0, -1.0).is_err());
        assert!(MaterialModel::new(6.89e10, 0.35).is_ok());
    }

    #[test]
    fn tangent_is_symmetric_positive_definite() {
        let c = MaterialModel::new(6.89e10, 0.35).unwrap().tangent();
        assert_eq!(c, c.transpose());
        assert!(c.cholesky().is_some());
    }

    #[test]
    fn stress_matches_voigt_tangent_and_compliance_inverts_it() {
        let m = MaterialModel::new(200.0, 0.25).unwrap();
        let eps = Mat2::new(0.01, 0.003, 0.003, -0.02);
        let sig = m.stress(&eps);
        let voigt = m.tangent() * nalgebra::Vector3::new(0.01, -0.02, 0.006);
        assert!((sig[(0, 0)] - voigt[0]).abs() < 1e-12);
        assert!((sig[(1, 1)] - voigt[1]).abs() < 1e-12);
        assert!((sig[(0, 1)] - voigt[2]).abs() < 1e-12);
        let back = m.compliance(&sig);
        assert!((back - eps).norm() < 1e-15);
    }
}
