//! Boundary-value problem definitions: the reference model (domain, supports
//! and loads) and the porous model (reference model plus pores).

use serde::{Deserialize, Serialize};

use crate::error::{PorodeError, Result};
use crate::geometry::{polygon, pore_surface_distance, Pore, ReferenceDomain};
use crate::tensor::Vec2;

/// Prescribed displacement components on every node of a boundary group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Support {
    /// Boundary group.
    pub tag: String,
    /// Prescribed x displacement (`None` leaves the component free).
    pub ux: Option<f64>,
    /// Prescribed y displacement (`None` leaves the component free).
    pub uy: Option<f64>,
}

impl Support {
    /// Both components fixed at zero.
    pub fn clamped(tag: &str) -> Self {
        Support {
            tag: tag.to_string(),
            ux: Some(0.0),
            uy: Some(0.0),
        }
    }
}

/// Uniform traction (force per unit area) on a boundary group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeLoad {
    /// Boundary group.
    pub tag: String,
    /// Traction vector.
    pub traction: Vec2,
}

/// Concentrated force (total, already integrated over the thickness).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointLoad {
    /// Point of application.
    pub point: Vec2,
    /// Force vector.
    pub force: Vec2,
}

/// Reference boundary-value problem on the pore-free domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceModel {
    /// Geometry.
    pub domain: ReferenceDomain,
    /// Dirichlet conditions by boundary group.
    pub supports: Vec<Support>,
    /// Neumann conditions by boundary group.
    pub edge_loads: Vec<EdgeLoad>,
    /// Concentrated forces.
    pub point_loads: Vec<PointLoad>,
}

impl ReferenceModel {
    /// Checks that every referenced tag exists and loads are finite.
    pub fn validate(&self) -> Result<()> {
        let names = self.domain.tag_names();
        for tag in self
            .supports
            .iter()
            .map(|s| &s.tag)
            .chain(self.edge_loads.iter().map(|l| &l.tag))
        {
            if !names.contains(tag) {
                return Err(PorodeError::validation(format!(
                    "boundary group '{tag}' does not exist (known: {})",
                    names.join(", ")
                )));
            }
        }
        for p in &self.point_loads {
            let inside = self.domain.contains(&p.point)
                || self.domain.distance_to_boundary(&p.point) <= 1e-9 * (1.0 + p.point.norm());
            if !inside {
                return Err(PorodeError::validation(format!(
                    "point load at ({}, {}) lies outside the domain",
                    p.point.x, p.point.y
                )));
            }
            if !(p.force.x.is_finite() && p.force.y.is_finite()) {
                return Err(PorodeError::validation("point load is not finite"));
            }
        }
        if self.supports.is_empty() {
            return Err(PorodeError::validation("model has no supports"));
        }
        Ok(())
    }

    /// Copy with every load multiplied by `factor`.
    pub fn with_scaled_loads(&self, factor: f64) -> Self {
        let mut m = self.clone();
        for l in &mut m.edge_loads {
            l.traction *= factor;
        }
        for p in &mut m.point_loads {
            p.force *= factor;
        }
        m
    }
}

/// Reference model plus the pores to be assessed.
#[derive(Debug, Clone, PartialEq)]
pub struct PorousModel {
    reference: ReferenceModel,
    pores: Vec<Pore>,
    warnings: Vec<String>,
}

/// Pores closer to the domain boundary than this multiple of their
/// equivalent radius trigger a warning: the exterior approximation assumes
/// pores far from the boundary.
pub const STANDOFF_FACTOR: f64 = 2.0;

impl PorousModel {
    /// Validates pore placement: ids unique, every pore strictly inside the
    /// domain, pores pairwise disjoint. Pores closer to the boundary than
    /// [`STANDOFF_FACTOR`] × equivalent radius are accepted with a warning.
    pub fn new(reference: ReferenceModel, pores: Vec<Pore>) -> Result<Self> {
        reference.validate()?;
        Self::place(reference, pores)
    }

    /// Pores on a domain whose supports and edge loads are carried by a
    /// prescribed mesh rather than by boundary groups; only concentrated
    /// forces are part of the reference model. Pore placement is validated
    /// as in [`PorousModel::new`].
    pub fn on_mesh_domain(
        domain: ReferenceDomain,
        point_loads: Vec<PointLoad>,
        pores: Vec<Pore>,
    ) -> Result<Self> {
        let reference = ReferenceModel {
            domain,
            supports: Vec::new(),
            edge_loads: Vec::new(),
            point_loads,
        };
        let mut check = reference.clone();
        check.supports.push(Support::clamped("boundary"));
        check.validate()?;
        Self::place(reference, pores)
    }

    fn place(reference: ReferenceModel, pores: Vec<Pore>) -> Result<Self> {
        let mut warnings = Vec::new();
        for (k, p) in pores.iter().enumerate() {
            if pores[..k].iter().any(|q| q.id() == p.id()) {
                return Err(PorodeError::pore(p.id(), "duplicate pore id"));
            }
            let inside = p.boundary().iter().all(|v| reference.domain.contains(v));
            let gap = reference.domain.loop_distance_to_boundary(p.boundary());
            let holes_inside = reference
                .domain
                .holes()
                .iter()
                .any(|h| polygon::contains(p.boundary(), &h.vertices[0]));
            if !inside || gap == 0.0 || holes_inside {
                return Err(PorodeError::pore(
                    p.id(),
                    "overlaps or lies outside the domain boundary",
                ));
            }
            if gap < STANDOFF_FACTOR * p.equivalent_radius() {
                let msg = format!(
                    "pore {} is {:.4} from the domain boundary, less than {} x its equivalent radius {:.4}",
                    p.id(),
                    gap,
                    STANDOFF_FACTOR,
                    p.equivalent_radius()
                );
                log::warn!("{msg}");
                warnings.push(msg);
            }
        }
        for a in 0..pores.len() {
            for b in (a + 1)..pores.len() {
                pore_surface_distance(&pores[a], &pores[b])?;
            }
        }
        Ok(PorousModel {
            reference,
            pores,
            warnings,
        })
    }

    /// Reference (pore-free) problem.
    pub fn reference(&self) -> &ReferenceModel {
        &self.reference
    }

    /// Pores in input order.
    pub fn pores(&self) -> &[Pore] {
        &self.pores
    }

    /// Pore with the given id.
    pub fn pore(&self, id: u32) -> Option<&Pore> {
        self.pores.iter().find(|p| p.id() == id)
    }

    /// Validation warnings (standoff violations).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Copy with pore `id` replaced.
    pub fn with_pore(&self, pore: Pore) -> Result<Self> {
        let pores = self
            .pores
            .iter()
            .map(|p| {
                if p.id() == pore.id() {
                    pore.clone()
                } else {
                    p.clone()
                }
            })
            .collect();
        PorousModel::new(self.reference.clone(), pores)
    }

    /// Copy without pores.
    pub fn without_pores(&self) -> Self {
        PorousModel {
            reference: self.reference.clone(),
            pores: Vec::new(),
            warnings: Vec::new(),
        }
    }

    /// Copy keeping only the listed pore ids.
    pub fn subset(&self, ids: &[u32]) -> Result<Self> {
        PorousModel::new(
            self.reference.clone(),
            self.pores
                .iter()
                .filter(|p| ids.contains(&p.id()))
                .cloned()
                .collect(),
        )
    }

    /// Copy with a modified reference model (pores kept).
    pub fn with_reference(&self, reference: ReferenceModel) -> Result<Self> {
        PorousModel::new(reference, self.pores.clone())
    }
}
