//! Triangle meshes: the volume-mesh data structure, point location, the
//! `mesh2d v1` text format and constrained-Delaunay mesh generation.

pub mod generate;
pub mod io;
pub mod locate;
pub mod sizing;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{PorodeError, Result};
use crate::tensor::{cross, Vec2};

pub use generate::{triangulate, GeneratedMesh, MeshOptions, SizeField, SizeZone};
pub use locate::PointLocator;
pub use sizing::MeshSizing;

/// Uniform traction applied on a boundary edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeumannEdge {
    /// End nodes of the edge.
    pub nodes: [usize; 2],
    /// Traction (force per unit area).
    pub traction: Vec2,
}

/// Summary statistics of a mesh.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshStats {
    /// Number of nodes.
    pub nodes: usize,
    /// Number of triangles.
    pub elements: usize,
    /// Smallest interior angle in degrees.
    pub min_angle_deg: f64,
    /// Shortest edge length.
    pub min_edge: f64,
    /// Longest edge length.
    pub max_edge: f64,
    /// Total area.
    pub area: f64,
}

/// Linear-triangle mesh together with its boundary conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeMesh {
    nodes: Vec<Vec2>,
    elements: Vec<[usize; 3]>,
    dirichlet: BTreeMap<usize, [Option<f64>; 2]>,
    neumann: Vec<NeumannEdge>,
    nodal_forces: Vec<(usize, Vec2)>,
    body_force: Vec2,
    thickness: f64,
}

/// Twice the signed area of a triangle.
#[inline]
pub fn twice_area(a: &Vec2, b: &Vec2, c: &Vec2) -> f64 {
    cross(&(b - a), &(c - a))
}

impl VolumeMesh {
    /// Creates a mesh without boundary conditions. Every triangle must be
    /// counterclockwise with a strictly positive Jacobian.
    pub fn new(nodes: Vec<Vec2>, elements: Vec<[usize; 3]>, thickness: f64) -> Result<Self> {
        if !(thickness > 0.0 && thickness.is_finite()) {
            return Err(PorodeError::validation(format!(
                "thickness must be positive, got {thickness}"
            )));
        }
        for (k, e) in elements.iter().enumerate() {
            if e.iter().any(|&n| n >= nodes.len()) {
                return Err(PorodeError::validation(format!(
                    "element {k} references a node index out of range"
                )));
            }
            let det = twice_area(&nodes[e[0]], &nodes[e[1]], &nodes[e[2]]);
            if !(det > 0.0) {
                return Err(PorodeError::validation(format!(
                    "element {k} has non-positive Jacobian determinant {det:e} (inverted or degenerate)"
                )));
            }
        }
        Ok(VolumeMesh {
            nodes,
            elements,
            dirichlet: BTreeMap::new(),
            neumann: Vec::new(),
            nodal_forces: Vec::new(),
            body_force: Vec2::zeros(),
            thickness,
        })
    }

    /// Node coordinates.
    pub fn nodes(&self) -> &[Vec2] {
        &self.nodes
    }

    /// Triangles as counterclockwise node triples.
    pub fn elements(&self) -> &[[usize; 3]] {
        &self.elements
    }

    /// Prescribed displacement components per node.
    pub fn dirichlet(&self) -> &BTreeMap<usize, [Option<f64>; 2]> {
        &self.dirichlet
    }

    /// Edge tractions.
    pub fn neumann(&self) -> &[NeumannEdge] {
        &self.neumann
    }

    /// Concentrated nodal forces.
    pub fn nodal_forces(&self) -> &[(usize, Vec2)] {
        &self.nodal_forces
    }

    /// Body force per unit volume.
    pub fn body_force(&self) -> Vec2 {
        self.body_force
    }

    /// Out-of-plane thickness.
    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    /// Number of nodes.
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Number of triangles.
    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    /// Vertex coordinates of element `e`.
    pub fn element_coords(&self, e: usize) -> [Vec2; 3] {
        let t = self.elements[e];
        [self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]]
    }

    /// Area of element `e`.
    pub fn element_area(&self, e: usize) -> f64 {
        let [a, b, c] = self.element_coords(e);
        0.5 * twice_area(&a, &b, &c)
    }

    /// Centroid of element `e`.
    pub fn element_centroid(&self, e: usize) -> Vec2 {
        let [a, b, c] = self.element_coords(e);
        (a + b + c) / 3.0
    }

    /// Prescribes displacement components at a node; `None` components keep
    /// any previous prescription.
    pub fn set_dirichlet(&mut self, node: usize, values: [Option<f64>; 2]) -> Result<()> {
        if node >= self.nodes.len() {
            return Err(PorodeError::validation(format!(
                "dirichlet node {node} out of range"
            )));
        }
        let entry = self.dirichlet.entry(node).or_insert([None, None]);
        for c in 0..2 {
            if values[c].is_some() {
                entry[c] = values[c];
            }
        }
        if entry.iter().all(Option::is_none) {
            self.dirichlet.remove(&node);
        }
        Ok(())
    }

    /// Adds a uniform traction on the edge between two nodes.
    pub fn add_neumann(&mut self, nodes: [usize; 2], traction: Vec2) -> Result<()> {
        if nodes.iter().any(|&n| n >= self.nodes.len()) || nodes[0] == nodes[1] {
            return Err(PorodeError::validation(
                "neumann edge references invalid nodes",
            ));
        }
        self.neumann.push(NeumannEdge { nodes, traction });
        Ok(())
    }

    /// Adds a concentrated force at a node.
    pub fn add_nodal_force(&mut self, node: usize, force: Vec2) -> Result<()> {
        if node >= self.nodes.len() {
            return Err(PorodeError::validation(format!(
                "force node {node} out of range"
            )));
        }
        self.nodal_forces.push((node, force));
        Ok(())
    }

    /// Adds a concentrated force at an arbitrary point, distributed to the
    /// nodes of the containing element by its shape functions.
    pub fn add_point_force(
        &mut self,
        locator: &PointLocator,
        point: Vec2,
        force: Vec2,
    ) -> Result<()> {
        let (e, bary) = locator.locate(self, &point).ok_or_else(|| {
            PorodeError::validation(format!(
                "point ({}, {}) lies outside the mesh",
                point.x, point.y
            ))
        })?;
        let tri = self.elements[e];
        for k in 0..3 {
            if bary[k] != 0.0 {
                self.nodal_forces.push((tri[k], force * bary[k]));
            }
        }
        Ok(())
    }

    /// Sets the body force per unit volume.
    pub fn set_body_force(&mut self, f: Vec2) {
        self.body_force = f;
    }

    /// Multiplies every load (tractions, nodal forces, body force) and every
    /// prescribed displacement by `factor`.
    pub fn scale_loads(&mut self, factor: f64) {
        for e in &mut self.neumann {
            e.traction *= factor;
        }
        for f in &mut self.nodal_forces {
            f.1 *= factor;
        }
        self.body_force *= factor;
        for v in self.dirichlet.values_mut() {
            for c in v.iter_mut().flatten() {
                *c *= factor;
            }
        }
    }

    /// Copy with a different thickness.
    pub fn with_thickness(&self, thickness: f64) -> Result<Self> {
        if !(thickness > 0.0) {
            return Err(PorodeError::validation("thickness must be positive"));
        }
        let mut m = self.clone();
        m.thickness = thickness;
        Ok(m)
    }

    /// Copy with node coordinates replaced (connectivity and conditions
    /// kept); fails if any element becomes inverted.
    pub fn with_nodes(&self, nodes: Vec<Vec2>) -> Result<Self> {
        if nodes.len() != self.nodes.len() {
            return Err(PorodeError::validation("node count mismatch"));
        }
        let mut m = VolumeMesh::new(nodes, self.elements.clone(), self.thickness)?;
        m.dirichlet = self.dirichlet.clone();
        m.neumann = self.neumann.clone();
        m.nodal_forces = self.nodal_forces.clone();
        m.body_force = self.body_force;
        Ok(m)
    }

    /// Extracts the elements selected by `keep` into a new mesh with
    /// compacted node numbering. Conditions on retained nodes/edges are
    /// carried over. Returns the mesh and the old-to-new node map.
    pub fn submesh(&self, keep: &[bool]) -> Result<(VolumeMesh, Vec<Option<usize>>)> {
        let mut map = vec![None; self.nodes.len()];
        let mut nodes = Vec::new();
        let mut elements = Vec::new();
        for (e, tri) in self.elements.iter().enumerate() {
            if !keep[e] {
                continue;
            }
            let mut t = [0; 3];
            for k in 0..3 {
                let n = tri[k];
                t[k] = *map[n].get_or_insert_with(|| {
                    nodes.push(self.nodes[n]);
                    nodes.len() - 1
                });
            }
            elements.push(t);
        }
        let mut m = VolumeMesh::new(nodes, elements, self.thickness)?;
        for (&n, v) in &self.dirichlet {
            if let Some(k) = map[n] {
                m.dirichlet.insert(k, *v);
            }
        }
        for e in &self.neumann {
            if let (Some(a), Some(b)) = (map[e.nodes[0]], map[e.nodes[1]]) {
                m.neumann.push(NeumannEdge {
                    nodes: [a, b],
                    traction: e.traction,
                });
            }
        }
        for (n, f) in &self.nodal_forces {
            if let Some(k) = map[*n] {
                m.nodal_forces.push((k, *f));
            }
        }
        m.body_force = self.body_force;
        Ok((m, map))
    }

    /// Mesh statistics.
    pub fn stats(&self) -> MeshStats {
        let mut min_angle = f64::INFINITY;
        let mut min_edge = f64::INFINITY;
        let mut max_edge: f64 = 0.0;
        let mut area = 0.0;
        for e in 0..self.elements.len() {
            let p = self.element_coords(e);
            area += self.element_area(e);
            for k in 0..3 {
                let a = p[k];
                let b = p[(k + 1) % 3];
                let c = p[(k + 2) % 3];
                let l = (b - a).norm();
                min_edge = min_edge.min(l);
                max_edge = max_edge.max(l);
                let u = b - a;
                let v = c - a;
                let ang = cross(&u, &v).atan2(u.dot(&v)).abs().to_degrees();
                min_angle = min_angle.min(ang);
            }
        }
        if self.elements.is_empty() {
            min_angle = 0.0;
            min_edge = 0.0;
        }
        MeshStats {
            nodes: self.nodes.len(),
            elements: self.elements.len(),
            min_angle_deg: min_angle,
            min_edge,
            max_edge,
            area,
        }
    }

    /// Closed boundary loops as node sequences, each oriented with the
    /// material on its left: the outer loop counterclockwise, interior
    /// loops clockwise. Loops are listed by decreasing enclosed area.
    pub fn boundary_loops(&self) -> Result<Vec<Vec<usize>>> {
        let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for t in &self.elements {
            for k in 0..3 {
                *directed.entry((t[k], t[(k + 1) % 3])).or_default() += 1;
            }
        }
        let mut next: BTreeMap<usize, usize> = BTreeMap::new();
        for (&(a, b), &count) in &directed {
            if count == 1 && !directed.contains_key(&(b, a)) && next.insert(a, b).is_some() {
                return Err(PorodeError::validation(format!(
                    "mesh boundary is not a set of simple loops (node {a} starts two boundary edges)"
                )));
            }
        }
        let mut loops = Vec::new();
        let mut visited = vec![false; self.nodes.len()];
        for &start in next.keys() {
            if visited[start] {
                continue;
            }
            let mut lp = vec![start];
            visited[start] = true;
            let mut cur = next[&start];
            while cur != start {
                if visited[cur] {
                    return Err(PorodeError::validation(format!(
                        "mesh boundary is not a set of simple loops (node {cur} visited twice)"
                    )));
                }
                visited[cur] = true;
                lp.push(cur);
                cur = *next.get(&cur).ok_or_else(|| {
                    PorodeError::validation(format!("mesh boundary is open at node {cur}"))
                })?;
            }
            loops.push(lp);
        }
        let area = |lp: &Vec<usize>| {
            let pts: Vec<Vec2> = lp.iter().map(|&i| self.nodes[i]).collect();
            crate::geometry::polygon::signed_area(&pts)
        };
        loops.sort_by(|a, b| area(b).abs().total_cmp(&area(a).abs()));
        Ok(loops)
    }

    /// Index of the node closest to `p`.
    pub fn nearest_node(&self, p: &Vec2) -> Option<usize> {
        (0..self.nodes.len()).min_by(|&a, &b| {
            (self.nodes[a] - p)
                .norm_squared()
                .total_cmp(&(self.nodes[b] - p).norm_squared())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::vec2;

    #[test]
    fn boundary_loops_of_a_square_with_a_hole() {
        // 3×3 block of unit squares with the centre square removed.
        let mut nodes = Vec::new();
        for j in 0..4 {
            for i in 0..4 {
                nodes.push(vec2(i as f64, j as f64));
            }
        }
        let id = |i: usize, j: usize| j * 4 + i;
        let mut tris = Vec::new();
        for j in 0..3 {
            for i in 0..3 {
                if (i, j) == (1, 1) {
                    continue;
                }
                tris.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                tris.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        let mesh = VolumeMesh::new(nodes, tris, 1.0).unwrap();
        let loops = mesh.boundary_loops().unwrap();
        assert_eq!(loops.len(), 2);
        assert_eq!(loops[0].len(), 12);
        assert_eq!(loops[1].len(), 4);
        let area = |lp: &Vec<usize>| {
            let pts: Vec<Vec2> = lp.iter().map(|&i| mesh.nodes()[i]).collect();
            crate::geometry::polygon::signed_area(&pts)
        };
        assert!((area(&loops[0]) - 9.0).abs() < 1e-12);
        assert!((area(&loops[1]) + 1.0).abs() < 1e-12);
    }

    fn unit_square() -> VolumeMesh {
        VolumeMesh::new(
            vec![
                vec2(0.0, 0.0),
                vec2(1.0, 0.0),
                vec2(1.0, 1.0),
                vec2(0.0, 1.0),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn rejects_inverted_elements() {
        let err = VolumeMesh::new(
            vec![vec2(0.0, 0.0), vec2(1.0, 0.0), vec2(0.0, 1.0)],
            vec![[0, 2, 1]],
            1.0,
        )
        .unwrap_err();
        assert!(err.to_string().contains("element 0"));
    }

    #[test]
    fn stats_and_submesh() {
        let m = unit_square();
        let s = m.stats();
        assert_eq!(s.elements, 2);
        assert!((s.area - 1.0).abs() < 1e-15);
        assert!((s.min_angle_deg - 45.0).abs() < 1e-12);
        let (sub, map) = m.submesh(&[false, true]).unwrap();
        assert_eq!(sub.num_elements(), 1);
        assert_eq!(sub.num_nodes(), 3);
        assert_eq!(map[1], None);
    }

    #[test]
    fn dirichlet_merges_components() {
        let mut m = unit_square();
        m.set_dirichlet(0, [Some(0.0), None]).unwrap();
        m.set_dirichlet(0, [None, Some(1.0)]).unwrap();
        assert_eq!(m.dirichlet()[&0], [Some(0.0), Some(1.0)]);
    }
}
