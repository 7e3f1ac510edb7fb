//! Element-size presets for reference and conforming porous meshes.

use serde::{Deserialize, Serialize};

use super::generate::{MeshOptions, SizeField, SizeZone};
use crate::error::{PorodeError, Result};
use crate::geometry::Pore;

/// Mesh-size parameters shared by the estimator's reference mesh and the
/// conforming porous meshes used for ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSizing {
    /// Element size away from pores.
    pub far: f64,
    /// Element size on and around pore boundaries in conforming meshes.
    pub near: f64,
    /// Element size around pore sites in the pore-free reference mesh.
    pub reference_near: f64,
    /// Growth of the element size per unit distance from a pore zone.
    pub grading: f64,
    /// Radius of the refined zone as a multiple of the pore's circumradius.
    pub zone_factor: f64,
    /// Minimum angle enforced during refinement (degrees).
    pub min_angle_deg: f64,
}

impl Default for MeshSizing {
    fn default() -> Self {
        MeshSizing {
            far: 4.0,
            near: 0.25,
            reference_near: 0.5,
            grading: 0.25,
            zone_factor: 1.3,
            min_angle_deg: 28.0,
        }
    }
}

impl MeshSizing {
    /// Checks that all sizes are positive.
    pub fn validate(&self) -> Result<()> {
        let ok = self.far > 0.0
            && self.near > 0.0
            && self.reference_near > 0.0
            && self.grading >= 0.0
            && self.zone_factor >= 1.0
            && self.min_angle_deg > 0.0
            && self.min_angle_deg <= 33.0;
        if ok {
            Ok(())
        } else {
            Err(PorodeError::validation(
                "mesh sizing: sizes must be positive, zone_factor >= 1 and 0 < min_angle_deg <= 33",
            ))
        }
    }

    /// Copy with every length parameter multiplied by `factor`.
    pub fn refined(&self, factor: f64) -> Self {
        MeshSizing {
            far: self.far * factor,
            near: self.near * factor,
            reference_near: self.reference_near * factor,
            ..*self
        }
    }

    fn zones(&self, pores: &[Pore], size: f64) -> Vec<SizeZone> {
        pores
            .iter()
            .map(|p| {
                let circum = p
                    .boundary()
                    .iter()
                    .map(|v| (v - p.centroid()).norm())
                    .fold(0.0_f64, f64::max);
                SizeZone {
                    center: p.centroid(),
                    radius: self.zone_factor * circum,
                    size,
                }
            })
            .collect()
    }

    /// Options for a conforming mesh whose pore boundaries are constraints.
    pub fn conforming_options(&self, pores: &[Pore]) -> MeshOptions {
        MeshOptions {
            size: SizeField {
                far: self.far,
                grading: self.grading,
                zones: self.zones(pores, self.near),
            },
            min_angle_deg: self.min_angle_deg,
            max_vertices: 3_000_000,
        }
    }

    /// Options for the pore-free reference mesh, refined around pore sites.
    pub fn reference_options(&self, pores: &[Pore]) -> MeshOptions {
        MeshOptions {
            size: SizeField {
                far: self.far,
                grading: self.grading,
                zones: self.zones(pores, self.reference_near),
            },
            min_angle_deg: self.min_angle_deg,
            max_vertices: 3_000_000,
        }
    }
}
