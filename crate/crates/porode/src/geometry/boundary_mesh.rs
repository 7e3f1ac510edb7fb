//! Line-element discretization of a pore boundary with Gauss quadrature.

use super::pore::Pore;
use crate::error::{PorodeError, Result};
use crate::tensor::{right_normal, Vec2};

/// Straight boundary element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    /// Start point (in the clockwise traversal of the pore).
    pub start: Vec2,
    /// End point.
    pub end: Vec2,
    /// Midpoint (collocation point of constant boundary elements).
    pub midpoint: Vec2,
    /// Unit tangent in the direction of traversal.
    pub tangent: Vec2,
    /// Unit normal pointing out of the material, into the pore.
    pub normal: Vec2,
    /// Length.
    pub length: f64,
}

/// Quadrature point on a pore boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraturePoint {
    /// Index of the owning segment.
    pub segment: usize,
    /// Location.
    pub point: Vec2,
    /// Quadrature weight (arc length).
    pub weight: f64,
    /// Arc-length coordinate measured from the start of the first segment.
    pub arc_length: f64,
    /// Local coordinate in [−1, 1] along the owning segment.
    pub local: f64,
}

/// Gauss–Legendre abscissae and weights on [−1, 1] for 1 to 4 points.
pub fn gauss_legendre(order: usize) -> (&'static [f64], &'static [f64]) {
    const X1: [f64; 1] = [0.0];
    const W1: [f64; 1] = [2.0];
    const X2: [f64; 2] = [-0.577_350_269_189_625_8, 0.577_350_269_189_625_8];
    const W2: [f64; 2] = [1.0, 1.0];
    const X3: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
    const W3: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
    const X4: [f64; 4] = [
        -0.861_136_311_594_052_6,
        -0.339_981_043_584_856_3,
        0.339_981_043_584_856_3,
        0.861_136_311_594_052_6,
    ];
    const W4: [f64; 4] = [
        0.347_854_845_137_453_9,
        0.652_145_154_862_546_1,
        0.652_145_154_862_546_1,
        0.347_854_845_137_453_9,
    ];
    match order {
        0 | 1 => (&X1, &W1),
        2 => (&X2, &W2),
        3 => (&X3, &W3),
        _ => (&X4, &W4),
    }
}

/// Discretized pore boundary.
#[derive(Debug, Clone)]
pub struct PoreBoundaryMesh {
    pore_id: u32,
    centroid: Vec2,
    segments: Vec<Segment>,
    quadrature: Vec<QuadraturePoint>,
    points_per_segment: usize,
}

impl PoreBoundaryMesh {
    /// Identifier of the discretized pore.
    pub fn pore_id(&self) -> u32 {
        self.pore_id
    }

    /// Centroid of the discretized pore.
    pub fn centroid(&self) -> Vec2 {
        self.centroid
    }

    /// Segments in clockwise order.
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Quadrature points, ordered along the loop.
    pub fn quadrature(&self) -> &[QuadraturePoint] {
        &self.quadrature
    }

    /// Number of quadrature points per segment.
    pub fn points_per_segment(&self) -> usize {
        self.points_per_segment
    }

    /// Sum of segment lengths.
    pub fn perimeter(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    /// Normal of the segment owning quadrature point `q`.
    pub fn normal_at(&self, q: usize) -> Vec2 {
        self.segments[self.quadrature[q].segment].normal
    }

    /// Tangent of the segment owning quadrature point `q`.
    pub fn tangent_at(&self, q: usize) -> Vec2 {
        self.segments[self.quadrature[q].segment].tangent
    }

    /// Design velocity `X − X_c` at quadrature point `q`.
    pub fn velocity_at(&self, q: usize) -> Vec2 {
        self.quadrature[q].point - self.centroid
    }

    /// Boundary integral of a per-quadrature-point scalar.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.quadrature
            .iter()
            .zip(values)
            .map(|(q, v)| q.weight * v)
            .sum()
    }
}

/// Subdivides the pore polyline into segments no longer than
/// `target_segment_length` with the default two-point Gauss rule.
pub fn build_pore_boundary_mesh(
    pore: &Pore,
    target_segment_length: f64,
) -> Result<PoreBoundaryMesh> {
    build_pore_boundary_mesh_with_order(pore, target_segment_length, 2)
}

/// As [`build_pore_boundary_mesh`] with a chosen Gauss order (2 to 4).
pub fn build_pore_boundary_mesh_with_order(
    pore: &Pore,
    target_segment_length: f64,
    order: usize,
) -> Result<PoreBoundaryMesh> {
    if !(target_segment_length > 0.0 && target_segment_length.is_finite()) {
        return Err(PorodeError::validation(format!(
            "target segment length must be positive, got {target_segment_length}"
        )));
    }
    if !(2..=4).contains(&order) {
        return Err(PorodeError::validation(format!(
            "boundary quadrature order must be 2, 3 or 4, got {order}"
        )));
    }
    if !(pore.area() > 0.0) {
        return Err(PorodeError::pore(pore.id(), "degenerate boundary"));
    }
    let verts = pore.boundary();
    let n = verts.len();
    let mut segments = Vec::new();
    for k in 0..n {
        let a = verts[k];
        let b = verts[(k + 1) % n];
        let len = (b - a).norm();
        let pieces = ((len / target_segment_length) * (1.0 - 1e-12))
            .ceil()
            .max(1.0) as usize;
        let tangent = (b - a) / len;
        let normal = right_normal(&tangent);
        for p in 0..pieces {
            let s = a + (b - a) * (p as f64 / pieces as f64);
            let e = if p + 1 == pieces {
                b
            } else {
                a + (b - a) * ((p + 1) as f64 / pieces as f64)
            };
            segments.push(Segment {
                start: s,
                end: e,
                midpoint: (s + e) * 0.5,
                tangent,
                normal,
                length: (e - s).norm(),
            });
        }
    }
    let (xs, ws) = gauss_legendre(order);
    let mut quadrature = Vec::with_capacity(segments.len() * order);
    let mut s0 = 0.0;
    for (i, seg) in segments.iter().enumerate() {
        for (x, w) in xs.iter().zip(ws) {
            quadrature.push(QuadraturePoint {
                segment: i,
                point: seg.midpoint + seg.tangent * (0.5 * seg.length * x),
                weight: 0.5 * seg.length * w,
                arc_length: s0 + 0.5 * seg.length * (1.0 + x),
                local: *x,
            });
        }
        s0 += seg.length;
    }
    Ok(PoreBoundaryMesh {
        pore_id: pore.id(),
        centroid: pore.centroid(),
        segments,
        quadrature,
        points_per_segment: order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::vec2;

    #[test]
    fn circle_mesh_perimeter_and_closure() {
        let pore = Pore::circle(1, vec2(100.0, 50.0), 5.0, 128).unwrap();
        let m = build_pore_boundary_mesh(&pore, 0.5).unwrap();
        assert!(m.segments().len() >= 63);
        let exact = 10.0 * std::f64::consts::PI;
        assert!((m.perimeter() - exact).abs() / exact < 5e-3);
        let closure: Vec2 = m.segments().iter().map(|s| s.normal * s.length).sum();
        assert!(closure.norm() < 1e-9 * m.perimeter());
        let q: f64 = m.quadrature().iter().map(|q| q.weight).sum();
        assert!((q - m.perimeter()).abs() < 1e-12 * m.perimeter());
    }

    #[test]
    fn square_pore_eight_segments_with_inward_normals() {
        let pore = Pore::new(
            2,
            vec![
                vec2(0.0, 0.0),
                vec2(2.0, 0.0),
                vec2(2.0, 2.0),
                vec2(0.0, 2.0),
            ],
        )
        .unwrap();
        let m = build_pore_boundary_mesh(&pore, 1.0).unwrap();
        assert_eq!(m.segments().len(), 8);
        for s in m.segments() {
            // Normals point from the material into the pore, i.e. toward the centroid.
            assert!(s.normal.dot(&(pore.centroid() - s.midpoint)) > 0.0);
        }
        let closure: Vec2 = m.segments().iter().map(|s| s.normal * s.length).sum();
        assert!(closure.norm() < 1e-12);
    }

    #[test]
    fn normal_velocity_is_constant_on_regular_polygon() {
        let n = 96;
        let r = 5.0;
        let pore = Pore::circle(3, vec2(0.0, 0.0), r, n).unwrap();
        let m = build_pore_boundary_mesh(&pore, 10.0).unwrap();
        let apothem = r * (std::f64::consts::PI / n as f64).cos();
        for q in 0..m.quadrature().len() {
            let vn = m.velocity_at(q).dot(&m.normal_at(q));
            // Normals point into the pore, so V·n = −apothem.
            assert!((vn + apothem).abs() < 1e-9 * r);
        }
    }

    #[test]
    fn rejects_bad_target() {
        let pore = Pore::circle(1, vec2(0.0, 0.0), 1.0, 16).unwrap();
        assert!(build_pore_boundary_mesh(&pore, 0.0).is_err());
        assert!(build_pore_boundary_mesh(&pore, f64::NAN).is_err());
    }
}
