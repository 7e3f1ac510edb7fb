//! Constrained-Delaunay mesh generation with graded sizing.
//!
//! The outer boundary, design holes and (optionally) pore boundaries are
//! inserted as constraint loops. Element size follows a [`SizeField`]:
//! triangles larger than the local target receive a centroid Steiner point,
//! after which Delaunay refinement restores the angle bound; the two steps
//! alternate until every triangle satisfies the size target.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use spade::{
    AngleLimit, ConstrainedDelaunayTriangulation, Point2, RefinementParameters, Triangulation,
};

use super::{twice_area, PointLocator, VolumeMesh};
use crate::error::{PorodeError, Result};
use crate::geometry::{polygon, Pore};
use crate::model::ReferenceModel;
use crate::tensor::Vec2;

/// Region of locally prescribed element size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizeZone {
    /// Zone centre.
    pub center: Vec2,
    /// Radius inside which `size` applies.
    pub radius: f64,
    /// Target edge length inside the zone.
    pub size: f64,
}

/// Target edge length as a function of position: `far` everywhere, reduced
/// inside zones and growing linearly with slope `grading` away from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizeField {
    /// Edge length away from all zones.
    pub far: f64,
    /// Growth rate of the edge length per unit distance outside a zone.
    pub grading: f64,
    /// Refinement zones.
    pub zones: Vec<SizeZone>,
}

impl SizeField {
    /// Uniform size.
    pub fn uniform(h: f64) -> Self {
        SizeField {
            far: h,
            grading: 0.0,
            zones: Vec::new(),
        }
    }

    /// Target edge length at `p`.
    pub fn at(&self, p: &Vec2) -> f64 {
        self.zones.iter().fold(self.far, |h, z| {
            let d = ((p - z.center).norm() - z.radius).max(0.0);
            h.min(z.size + self.grading * d)
        })
    }

    fn validate(&self) -> Result<()> {
        let ok = self.far > 0.0
            && self.grading >= 0.0
            && self.zones.iter().all(|z| z.size > 0.0 && z.radius >= 0.0);
        if ok {
            Ok(())
        } else {
            Err(PorodeError::validation(
                "size field parameters must be positive",
            ))
        }
    }
}

/// Mesh generation controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshOptions {
    /// Element size field.
    pub size: SizeField,
    /// Minimum angle enforced by Delaunay refinement (degrees).
    pub min_angle_deg: f64,
    /// Upper bound on the number of Steiner points.
    pub max_vertices: usize,
}

impl MeshOptions {
    /// Options with a given size field and default quality settings.
    pub fn with_size(size: SizeField) -> Self {
        MeshOptions {
            size,
            min_angle_deg: 28.0,
            max_vertices: 3_000_000,
        }
    }
}

/// Result of [`triangulate`]: a mesh of the whole reference domain in which
/// every element is tagged with the pore containing it (if any).
#[derive(Debug, Clone)]
pub struct GeneratedMesh {
    /// Mesh of the reference domain with all boundary conditions applied.
    pub mesh: VolumeMesh,
    /// Pore id of each element (`None` for material elements).
    pub element_pore: Vec<Option<u32>>,
    /// Node loops (clockwise, material on the left) on each constrained pore
    /// boundary.
    pub pore_loops: Vec<(u32, Vec<usize>)>,
}

/// Porous sub-mesh: material elements only, with pore boundary loops.
#[derive(Debug, Clone)]
pub struct PorousMesh {
    /// Mesh of the porous domain.
    pub mesh: VolumeMesh,
    /// Node loops on each pore boundary (clockwise, material on the left).
    pub pore_loops: Vec<(u32, Vec<usize>)>,
}

impl GeneratedMesh {
    /// Number of material (non-pore) elements.
    pub fn material_elements(&self) -> usize {
        self.element_pore.iter().filter(|r| r.is_none()).count()
    }

    /// Extracts the porous domain.
    pub fn porous(&self) -> Result<PorousMesh> {
        let keep: Vec<bool> = self.element_pore.iter().map(Option::is_none).collect();
        let (mesh, map) = self.mesh.submesh(&keep)?;
        let pore_loops = self
            .pore_loops
            .iter()
            .map(|(id, nodes)| {
                let mapped: Option<Vec<usize>> = nodes.iter().map(|&n| map[n]).collect();
                mapped.map(|m| (*id, m)).ok_or_else(|| {
                    PorodeError::Meshing(format!("pore {id} boundary lost in sub-mesh"))
                })
            })
            .collect::<Result<_>>()?;
        Ok(PorousMesh { mesh, pore_loops })
    }
}

/// Splits the closed loop into edges no longer than the local size, keeping
/// every original vertex and inserting `breaks` that lie on a segment.
/// Returns the points and, for each point, the index of the original
/// segment starting there.
fn discretize_loop(
    vertices: &[Vec2],
    size: &dyn Fn(&Vec2) -> f64,
    breaks: &[Vec2],
    tol: f64,
) -> Vec<(Vec2, usize)> {
    let n = vertices.len();
    let mut out = Vec::new();
    for k in 0..n {
        let a = vertices[k];
        let b = vertices[(k + 1) % n];
        let len = (b - a).norm();
        let mut params: Vec<f64> = breaks
            .iter()
            .filter(|p| polygon::point_segment_distance(p, &a, &b) <= tol)
            .map(|p| (p - a).dot(&(b - a)) / (len * len))
            .filter(|&t| t * len > tol && (1.0 - t) * len > tol)
            .collect();
        params.push(0.0);
        params.push(1.0);
        params.sort_by(f64::total_cmp);
        params.dedup();
        for w in params.windows(2) {
            let p = a + (b - a) * w[0];
            let q = a + (b - a) * w[1];
            let mid = (p + q) * 0.5;
            let h = size(&p).min(size(&q)).min(size(&mid));
            let l = (q - p).norm();
            let pieces = ((l / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
            for i in 0..pieces {
                out.push((p + (q - p) * (i as f64 / pieces as f64), k));
            }
        }
    }
    out
}

/// Triangulates the reference domain of `model`.
///
/// `pores` are inserted as constraint loops (their interiors are meshed and
/// tagged); `extra_points` are forced to be mesh vertices (they may lie on
/// the boundary). Supports, edge loads and point loads of `model` are
/// applied to the resulting mesh.
pub fn triangulate(
    model: &ReferenceModel,
    pores: &[Pore],
    extra_points: &[Vec2],
    options: &MeshOptions,
) -> Result<GeneratedMesh> {
    options.size.validate()?;
    let domain = &model.domain;
    let (lo, hi) = domain.bounding_box();
    let diag = (hi - lo).norm();
    let tol = 1e-9 * diag;
    let size = |p: &Vec2| options.size.at(p);

    let mut forced: Vec<Vec2> = extra_points.to_vec();
    forced.extend(model.point_loads.iter().map(|l| l.point));

    let mut vertices: Vec<Vec2> = Vec::new();
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let push_loop = |pts: Vec<Vec2>, vertices: &mut Vec<Vec2>, edges: &mut Vec<[usize; 2]>| {
        let base = vertices.len();
        let n = pts.len();
        vertices.extend(pts);
        for k in 0..n {
            edges.push([base + k, base + (k + 1) % n]);
        }
    };
    let outer = discretize_loop(domain.outer(), &size, &forced, tol);
    push_loop(
        outer.iter().map(|p| p.0).collect(),
        &mut vertices,
        &mut edges,
    );
    for h in domain.holes() {
        let pts = discretize_loop(&h.vertices, &size, &forced, tol);
        push_loop(pts.iter().map(|p| p.0).collect(), &mut vertices, &mut edges);
    }
    for p in pores {
        let pts = discretize_loop(p.boundary(), &size, &[], tol);
        push_loop(pts.iter().map(|p| p.0).collect(), &mut vertices, &mut edges);
    }
    for f in &forced {
        let on_vertex = vertices.iter().any(|v| (v - f).norm() <= tol);
        if !on_vertex {
            if domain.distance_to_boundary(f) <= tol {
                return Err(PorodeError::Meshing(format!(
                    "forced point ({}, {}) could not be placed on the boundary",
                    f.x, f.y
                )));
            }
            if pores.iter().any(|p| p.contains(f) || p.on_boundary(f)) {
                return Err(PorodeError::validation(format!(
                    "point ({}, {}) lies inside or on a pore",
                    f.x, f.y
                )));
            }
            vertices.push(*f);
        }
    }

    let input_count = vertices.len();
    let spade_pts: Vec<Point2<f64>> = vertices.iter().map(|v| Point2::new(v.x, v.y)).collect();
    let mut conflicts = 0usize;
    let mut cdt = ConstrainedDelaunayTriangulation::<Point2<f64>>::try_bulk_load_cdt(
        spade_pts,
        edges,
        |_| conflicts += 1,
    )
    .map_err(|e| PorodeError::Meshing(format!("triangulation failed: {e:?}")))?;
    if conflicts > 0 || cdt.num_vertices() != input_count {
        return Err(PorodeError::Meshing(
            "boundary loops intersect or coincide at this resolution; pores may be too close to each \
             other or to the boundary — refine the mesh size near pores"
                .into(),
        ));
    }

    let budget = options.max_vertices;
    for pass in 0..60 {
        let params = RefinementParameters::<f64>::new()
            .with_angle_limit(AngleLimit::from_deg(options.min_angle_deg))
            .exclude_outer_faces(false)
            .with_max_additional_vertices(budget.saturating_sub(cdt.num_vertices()));
        let result = cdt.refine(params);
        if !result.refinement_complete {
            return Err(PorodeError::Meshing(format!(
                "refinement exceeded the vertex budget of {budget}; increase the element size or the budget"
            )));
        }
        let mut inserts = Vec::new();
        for f in cdt.inner_faces() {
            let [a, b, c] = f.positions();
            let c0 = Vec2::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0);
            if !domain.contains(&c0) {
                continue;
            }
            let h = size(&c0);
            let target = 3f64.sqrt() / 4.0 * h * h;
            if f.area() > 1.5 * target {
                inserts.push(c0);
            }
        }
        if inserts.is_empty() {
            break;
        }
        if pass == 59 || cdt.num_vertices() + inserts.len() > budget {
            return Err(PorodeError::Meshing(
                "size refinement did not converge".into(),
            ));
        }
        for c in inserts {
            cdt.insert(Point2::new(c.x, c.y))
                .map_err(|e| PorodeError::Meshing(format!("vertex insertion failed: {e:?}")))?;
        }
    }

    // Collect material and pore elements.
    let mut node_map: HashMap<usize, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut elements = Vec::new();
    let mut element_pore = Vec::new();
    for f in cdt.inner_faces() {
        let vs = f.vertices();
        let p: Vec<Vec2> = vs
            .iter()
            .map(|v| Vec2::new(v.position().x, v.position().y))
            .collect();
        let c0 = (p[0] + p[1] + p[2]) / 3.0;
        if !domain.contains(&c0) {
            continue;
        }
        let region = pores
            .iter()
            .find(|pore| polygon::contains(pore.boundary(), &c0))
            .map(|pore| pore.id());
        let mut tri = [0usize; 3];
        for k in 0..3 {
            let key = vs[k].fix().index();
            tri[k] = *node_map.entry(key).or_insert_with(|| {
                nodes.push(p[k]);
                nodes.len() - 1
            });
        }
        if twice_area(&nodes[tri[0]], &nodes[tri[1]], &nodes[tri[2]]) < 0.0 {
            tri.swap(1, 2);
        }
        elements.push(tri);
        element_pore.push(region);
    }
    let mut mesh = VolumeMesh::new(nodes, elements, domain.thickness())?;

    // Edge adjacency.
    let mut adjacency: HashMap<(usize, usize), Vec<(usize, [usize; 2])>> = HashMap::new();
    for (e, t) in mesh.elements().iter().enumerate() {
        for k in 0..3 {
            let a = t[k];
            let b = t[(k + 1) % 3];
            adjacency
                .entry((a.min(b), a.max(b)))
                .or_default()
                .push((e, [a, b]));
        }
    }
    let mut keys: Vec<&(usize, usize)> = adjacency.keys().collect();
    keys.sort();

    // Boundary conditions on tagged boundary edges.
    let segments = domain.tagged_segments();
    let mut support_edges = Vec::new();
    let mut load_edges = Vec::new();
    for key in &keys {
        let adj = &adjacency[*key];
        if adj.len() != 1 {
            continue;
        }
        let [a, b] = adj[0].1;
        let pa = mesh.nodes()[a];
        let pb = mesh.nodes()[b];
        let seg = segments.iter().find(|(s, t, _)| {
            polygon::point_segment_distance(&pa, s, t) <= tol
                && polygon::point_segment_distance(&pb, s, t) <= tol
        });
        let Some((_, _, tag)) = seg else {
            return Err(PorodeError::Meshing(format!(
                "boundary edge ({}, {})-({}, {}) does not lie on the domain boundary",
                pa.x, pa.y, pb.x, pb.y
            )));
        };
        for s in model.supports.iter().filter(|s| s.tag == *tag) {
            support_edges.push(([a, b], [s.ux, s.uy]));
        }
        for l in model.edge_loads.iter().filter(|l| l.tag == *tag) {
            load_edges.push(([a, b], l.traction));
        }
    }
    for (nodes, v) in support_edges {
        for n in nodes {
            mesh.set_dirichlet(n, v)?;
        }
    }
    for (nodes, t) in load_edges {
        mesh.add_neumann(nodes, t)?;
    }
    let locator = PointLocator::new(&mesh);
    for l in &model.point_loads {
        match mesh
            .nodes()
            .iter()
            .position(|v| (v - l.point).norm() <= tol)
        {
            Some(n) => mesh.add_nodal_force(n, l.force)?,
            None => mesh.add_point_force(&locator, l.point, l.force)?,
        }
    }

    // Pore boundary loops.
    let mut pore_loops = Vec::new();
    for pore in pores {
        let mut next: HashMap<usize, usize> = HashMap::new();
        for key in &keys {
            let adj = &adjacency[*key];
            if adj.len() != 2 {
                continue;
            }
            let r0 = element_pore[adj[0].0];
            let r1 = element_pore[adj[1].0];
            let (mat, other) = match (r0, r1) {
                (None, Some(id)) if id == pore.id() => (adj[0], id),
                (Some(id), None) if id == pore.id() => (adj[1], id),
                _ => continue,
            };
            let _ = other;
            next.insert(mat.1[0], mat.1[1]);
        }
        let Some(&start) = next.keys().min() else {
            return Err(PorodeError::Meshing(format!(
                "pore {} is not resolved by the mesh",
                pore.id()
            )));
        };
        let mut loop_nodes = vec![start];
        let mut cur = next[&start];
        while cur != start {
            loop_nodes.push(cur);
            cur = *next.get(&cur).ok_or_else(|| {
                PorodeError::Meshing(format!(
                    "boundary of pore {} is not a closed loop",
                    pore.id()
                ))
            })?;
            if loop_nodes.len() > next.len() {
                break;
            }
        }
        if loop_nodes.len() != next.len() {
            return Err(PorodeError::Meshing(format!(
                "boundary of pore {} splits into several loops; pores may touch at this resolution",
                pore.id()
            )));
        }
        pore_loops.push((pore.id(), loop_nodes));
    }

    Ok(GeneratedMesh {
        mesh,
        element_pore,
        pore_loops,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ReferenceDomain;
    use crate::model::{PointLoad, Support};
    use crate::tensor::vec2;

    fn model() -> ReferenceModel {
        ReferenceModel {
            domain: ReferenceDomain::rectangle(0.0, 0.0, 20.0, 10.0, ["b", "r", "t", "l"], 1.0)
                .unwrap(),
            supports: vec![Support::clamped("l")],
            edge_loads: vec![],
            point_loads: vec![PointLoad {
                point: vec2(20.0, 10.0),
                force: vec2(0.0, -1.0),
            }],
        }
    }

    #[test]
    fn uniform_mesh_covers_domain_with_quality() {
        let g = triangulate(
            &model(),
            &[],
            &[],
            &MeshOptions::with_size(SizeField::uniform(1.0)),
        )
        .unwrap();
        let s = g.mesh.stats();
        assert!((s.area - 200.0).abs() < 1e-9);
        assert!(s.min_angle_deg > 20.0, "{}", s.min_angle_deg);
        assert!(s.max_edge < 2.0 * 1.0 + 1e-9, "{}", s.max_edge);
        // Left edge clamped, corner load applied at a node.
        assert!(g.mesh.dirichlet().len() >= 11);
        assert_eq!(g.mesh.nodal_forces().len(), 1);
    }

    #[test]
    fn pores_are_tagged_and_loops_closed() {
        let pore = Pore::circle(3, vec2(10.0, 5.0), 2.0, 48).unwrap();
        let opts = MeshOptions::with_size(SizeField {
            far: 1.5,
            grading: 0.3,
            zones: vec![SizeZone {
                center: vec2(10.0, 5.0),
                radius: 2.5,
                size: 0.3,
            }],
        });
        let g = triangulate(&model(), &[pore.clone()], &[], &opts).unwrap();
        let pore_area: f64 = g
            .element_pore
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == Some(3))
            .map(|(e, _)| g.mesh.element_area(e))
            .sum();
        assert!((pore_area - pore.area()).abs() < 1e-9 * pore.area());
        let porous = g.porous().unwrap();
        let (_, loop_nodes) = &porous.pore_loops[0];
        assert!(loop_nodes.len() >= 48);
        let pts: Vec<Vec2> = loop_nodes.iter().map(|&n| porous.mesh.nodes()[n]).collect();
        assert!(polygon::signed_area(&pts) < 0.0);
        for p in &pts {
            assert!(pore.on_boundary(p) || polygon::distance_to_loop(pore.boundary(), p) < 1e-9);
        }
        assert!(porous.mesh.num_elements() < g.mesh.num_elements());
    }

    #[test]
    fn graded_size_field() {
        let f = SizeField {
            far: 5.0,
            grading: 0.5,
            zones: vec![SizeZone {
                center: vec2(0.0, 0.0),
                radius: 1.0,
                size: 0.1,
            }],
        };
        assert_eq!(f.at(&vec2(0.5, 0.0)), 0.1);
        assert!((f.at(&vec2(3.0, 0.0)) - 1.1).abs() < 1e-12);
        assert_eq!(f.at(&vec2(100.0, 0.0)), 5.0);
    }
}
