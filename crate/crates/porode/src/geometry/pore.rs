//! Pores: closed polylines removed from the reference domain.

use serde::{Deserialize, Serialize};

use super::polygon;
use crate::error::{PorodeError, Result};
use crate::tensor::Vec2;

/// A pore of the porous domain.
///
/// The boundary is stored clockwise so that the right-hand normal of each
/// segment points out of the material and into the pore. The centroid and
/// equivalent radius are always recomputed from the polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct Pore {
    id: u32,
    boundary: Vec<Vec2>,
    centroid: Vec2,
    area: f64,
    equivalent_radius: f64,
}

impl Pore {
    /// Builds a pore from its boundary vertices (either orientation, closure
    /// implicit). Rejects loops with fewer than three vertices, zero area or
    /// self-intersections.
    pub fn new(id: u32, mut boundary: Vec<Vec2>) -> Result<Pore> {
        if boundary.len() < 3 {
            return Err(PorodeError::pore(
                id,
                "boundary needs at least three vertices",
            ));
        }
        if boundary
            .iter()
            .any(|v| !v.x.is_finite() || !v.y.is_finite())
        {
            return Err(PorodeError::pore(id, "boundary has non-finite coordinates"));
        }
        let signed = polygon::signed_area(&boundary);
        let scale = polygon::perimeter(&boundary);
        if !(signed.abs() > 1e-12 * scale * scale) {
            return Err(PorodeError::pore(id, "boundary encloses zero area"));
        }
        if !polygon::is_simple(&boundary) {
            return Err(PorodeError::pore(id, "boundary is self-intersecting"));
        }
        if signed > 0.0 {
            boundary.reverse();
        }
        let centroid = polygon::area_centroid(&boundary)
            .ok_or_else(|| PorodeError::pore(id, "boundary encloses zero area"))?;
        let area = signed.abs();
        Ok(Pore {
            id,
            boundary,
            centroid,
            area,
            equivalent_radius: (area / std::f64::consts::PI).sqrt(),
        })
    }

    /// Regular `n`-gon inscribed in the circle of the given radius.
    pub fn circle(id: u32, center: Vec2, radius: f64, n: usize) -> Result<Pore> {
        if !(radius > 0.0) {
            return Err(PorodeError::pore(id, "radius must be positive"));
        }
        Pore::new(id, polygon::regular_polygon(center, radius, n, 0.0))
    }

    /// Polygonal ellipse with semi-axes `a` (x) and `b` (y).
    pub fn ellipse(id: u32, center: Vec2, a: f64, b: f64, n: usize) -> Result<Pore> {
        if !(a > 0.0 && b > 0.0) {
            return Err(PorodeError::pore(id, "semi-axes must be positive"));
        }
        Pore::new(id, polygon::ellipse(center, a, b, n))
    }

    /// Identifier.
    pub fn id(&self) -> u32 {
        self.id
    }

    /// Clockwise boundary vertices.
    pub fn boundary(&self) -> &[Vec2] {
        &self.boundary
    }

    /// Area centroid `X_c`.
    pub fn centroid(&self) -> Vec2 {
        self.centroid
    }

    /// Enclosed area.
    pub fn area(&self) -> f64 {
        self.area
    }

    /// Radius of the circle with the same area.
    pub fn equivalent_radius(&self) -> f64 {
        self.equivalent_radius
    }

    /// Twice the equivalent radius.
    pub fn equivalent_diameter(&self) -> f64 {
        2.0 * self.equivalent_radius
    }

    /// Boundary length.
    pub fn perimeter(&self) -> f64 {
        polygon::perimeter(&self.boundary)
    }

    /// Tolerance used to decide whether a point lies on the boundary.
    pub fn snap_tolerance(&self) -> f64 {
        1e-9 * self.perimeter().max(1.0)
    }

    /// True if `p` is within the snap tolerance of the boundary.
    pub fn on_boundary(&self, p: &Vec2) -> bool {
        polygon::distance_to_loop(&self.boundary, p) <= self.snap_tolerance()
    }

    /// True if `p` lies strictly inside the pore (boundary points excluded).
    pub fn contains(&self, p: &Vec2) -> bool {
        !self.on_boundary(p) && polygon::contains(&self.boundary, p)
    }

    /// Copy with the boundary scaled by `eta` about the centroid.
    pub fn scaled(&self, eta: f64) -> Result<Pore> {
        let c = self.centroid;
        Pore::new(
            self.id,
            self.boundary.iter().map(|v| c + (v - c) * eta).collect(),
        )
    }

    /// Copy translated by `offset`.
    pub fn translated(&self, offset: Vec2) -> Pore {
        Pore {
            id: self.id,
            boundary: self.boundary.iter().map(|v| v + offset).collect(),
            centroid: self.centroid + offset,
            area: self.area,
            equivalent_radius: self.equivalent_radius,
        }
    }

    /// Copy with a different identifier.
    pub fn with_id(&self, id: u32) -> Pore {
        Pore { id, ..self.clone() }
    }
}

/// Design velocity of `pore` at `point`: `X − X_c` on the pore boundary and
/// zero everywhere else.
pub fn design_velocity(pore: &Pore, point: &Vec2) -> Vec2 {
    if pore.on_boundary(point) {
        point - pore.centroid
    } else {
        Vec2::zeros()
    }
}

/// Minimum distance between the boundaries of two disjoint pores.
///
/// Symmetric in its arguments; fails if the pores touch, cross or one
/// contains the other.
pub fn pore_surface_distance(a: &Pore, b: &Pore) -> Result<f64> {
    // Canonical argument order makes the result bit-identical under swapping.
    let (p, q) = if (a.id, a.centroid.x, a.centroid.y) <= (b.id, b.centroid.x, b.centroid.y) {
        (a, b)
    } else {
        (b, a)
    };
    let d = polygon::loop_distance(&p.boundary, &q.boundary);
    let nested = polygon::contains(&p.boundary, &q.boundary[0])
        || polygon::contains(&q.boundary, &p.boundary[0]);
    if d == 0.0 || nested {
        return Err(PorodeError::validation(format!(
            "pores {} and {} overlap",
            a.id, b.id
        )));
    }
    Ok(d)
}

/// Serialized form of a pore in pore-set files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoreRecord {
    /// Identifier.
    pub id: u32,
    /// Centroid as stored in the file (informational; recomputed on load).
    pub centroid: [f64; 2],
    /// Boundary vertices without a duplicated closing vertex.
    pub boundary: Vec<[f64; 2]>,
}

impl From<&Pore> for PoreRecord {
    fn from(p: &Pore) -> Self {
        PoreRecord {
            id: p.id,
            centroid: [p.centroid.x, p.centroid.y],
            boundary: p.boundary.iter().map(|v| [v.x, v.y]).collect(),
        }
    }
}

impl PoreRecord {
    /// Validates the record and builds the pore.
    pub fn to_pore(&self) -> Result<Pore> {
        let pts: Vec<Vec2> = self
            .boundary
            .iter()
            .map(|v| Vec2::new(v[0], v[1]))
            .collect();
        if pts.len() >= 2 && pts.first() == pts.last() {
            return Err(PorodeError::pore(
                self.id,
                "boundary repeats its first vertex at the end (closure is implicit)",
            ));
        }
        let pore = Pore::new(self.id, pts)?;
        let given = Vec2::new(self.centroid[0], self.centroid[1]);
        let tol = 1e-6 * pore.equivalent_radius.max(1e-12) + 1e-9 * given.norm();
        if (given - pore.centroid).norm() > tol {
            log::warn!(
                "pore {}: stored centroid ({}, {}) differs from area centroid ({}, {}); using the latter",
                self.id,
                given.x,
                given.y,
                pore.centroid.x,
                pore.centroid.y
            );
        }
        Ok(pore)
    }
}

/// Parses a pore-set JSON document; pore ids must be unique.
pub fn parse_pore_set(json: &str) -> Result<Vec<Pore>> {
    let records: Vec<PoreRecord> = serde_json::from_str(json)?;
    let mut pores = Vec::with_capacity(records.len());
    for r in &records {
        if pores.iter().any(|p: &Pore| p.id == r.id) {
            return Err(PorodeError::pore(r.id, "duplicate pore id"));
        }
        pores.push(r.to_pore()?);
    }
    Ok(pores)
}

/// Reads a pore-set JSON file.
pub fn read_pore_set(path: impl AsRef<std::path::Path>) -> Result<Vec<Pore>> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| PorodeError::io(&path, e))?;
    parse_pore_set(&text)
}

/// Serializes pores as a pore-set JSON document.
pub fn pore_set_to_json(pores: &[Pore]) -> Result<String> {
    let records: Vec<PoreRecord> = pores.iter().map(PoreRecord::from).collect();
    Ok(serde_json::to_string_pretty(&records)?)
}
