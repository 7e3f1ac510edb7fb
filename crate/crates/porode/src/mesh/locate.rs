//! Bucket-grid point location in triangle meshes.

use super::{twice_area, VolumeMesh};
use crate::geometry::polygon::closest_point_on_segment;
use crate::tensor::Vec2;

/// Uniform grid of element buckets for fast point location.
#[derive(Debug, Clone)]
pub struct PointLocator {
    origin: Vec2,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
    tolerance: f64,
}

impl PointLocator {
    /// Builds the locator for `mesh`.
    pub fn new(mesh: &VolumeMesh) -> Self {
        let nodes = mesh.nodes();
        let mut lo = Vec2::repeat(f64::INFINITY);
        let mut hi = Vec2::repeat(f64::NEG_INFINITY);
        for p in nodes {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        if nodes.is_empty() {
            lo = Vec2::zeros();
            hi = Vec2::repeat(1.0);
        }
        let diag = (hi - lo).norm().max(1e-300);
        let ne = mesh.num_elements().max(1);
        let area = mesh.stats().area.max(diag * diag * 1e-12);
        let cell = (2.0 * (area / ne as f64).sqrt()).max(diag * 1e-6);
        let nx = (((hi.x - lo.x) / cell).ceil() as usize).max(1);
        let ny = (((hi.y - lo.y) / cell).ceil() as usize).max(1);
        let mut buckets = vec![Vec::new(); nx * ny];
        for e in 0..mesh.num_elements() {
            let p = mesh.element_coords(e);
            let bl = p[0].inf(&p[1]).inf(&p[2]);
            let tr = p[0].sup(&p[1]).sup(&p[2]);
            let (i0, j0) = Self::cell_of(lo, cell, nx, ny, &bl);
            let (i1, j1) = Self::cell_of(lo, cell, nx, ny, &tr);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    buckets[j * nx + i].push(e as u32);
                }
            }
        }
        PointLocator {
            origin: lo,
            cell,
            nx,
            ny,
            buckets,
            tolerance: 1e-9 * diag,
        }
    }

    fn cell_of(origin: Vec2, cell: f64, nx: usize, ny: usize, p: &Vec2) -> (usize, usize) {
        let fx = ((p.x - origin.x) / cell).floor();
        let fy = ((p.y - origin.y) / cell).floor();
        let i = if fx < 0.0 {
            0
        } else {
            (fx as usize).min(nx - 1)
        };
        let j = if fy < 0.0 {
            0
        } else {
            (fy as usize).min(ny - 1)
        };
        (i, j)
    }

    /// Distance below which points outside the mesh snap onto it.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Element containing `p` and the barycentric coordinates of `p` in it.
    /// Points within the snap tolerance outside the mesh are projected onto
    /// the nearest element edge. Returns `None` for points outside the mesh.
    pub fn locate(&self, mesh: &VolumeMesh, p: &Vec2) -> Option<(usize, [f64; 3])> {
        let (ci, cj) = Self::cell_of(self.origin, self.cell, self.nx, self.ny, p);
        let mut best: Option<(f64, usize, [f64; 3])> = None;
        for j in cj.saturating_sub(1)..=(cj + 1).min(self.ny - 1) {
            for i in ci.saturating_sub(1)..=(ci + 1).min(self.nx - 1) {
                for &e in &self.buckets[j * self.nx + i] {
                    let e = e as usize;
                    let [a, b, c] = mesh.element_coords(e);
                    let det = twice_area(&a, &b, &c);
                    let l0 = twice_area(p, &b, &c) / det;
                    let l1 = twice_area(&a, p, &c) / det;
                    let l2 = 1.0 - l0 - l1;
                    let m = l0.min(l1).min(l2);
                    if m >= -1e-12 {
                        return Some((e, [l0, l1, l2]));
                    }
                    // Distance to the triangle for the snapping fallback.
                    let mut dmin = f64::INFINITY;
                    let mut q = *p;
                    for (s, t) in [(a, b), (b, c), (c, a)] {
                        let cp = closest_point_on_segment(p, &s, &t);
                        let d = (cp - p).norm();
                        if d < dmin {
                            dmin = d;
                            q = cp;
                        }
                    }
                    if dmin <= self.tolerance && best.as_ref().is_none_or(|b| dmin < b.0) {
                        let l0 = (twice_area(&q, &b, &c) / det).max(0.0);
                        let l1 = (twice_area(&a, &q, &c) / det).max(0.0);
                        let l2 = (1.0 - l0 - l1).max(0.0);
                        let s = l0 + l1 + l2;
                        best = Some((dmin, e, [l0 / s, l1 / s, l2 / s]));
                    }
                }
            }
        }
        best.map(|(_, e, l)| (e, l))
    }
}
