//! Kelvin fundamental solution of plane-stress elastostatics and boundary
//! quadrature over straight elements.
//!
//! Plane stress is handled with the plane-strain kernels evaluated at the
//! effective Poisson ratio `ν̄ = ν/(1+ν)` and the true shear modulus.
//! Kernel conventions: `U[(l, k)]` is the `k`-th displacement at the field
//! point `y` due to a unit force in direction `l` at the source `x`;
//! `T[(l, k)]` is the matching `k`-th traction on a boundary with unit
//! normal `n` (outward from the elastic domain). With `r = y − x`:
//!
//! `U_lk = [(3−4ν̄) ln(1/r) δ_lk + r̂_l r̂_k] / (8πμ(1−ν̄))`
//!
//! `T_lk = −[∂r/∂n ((1−2ν̄) δ_lk + 2 r̂_l r̂_k) − (1−2ν̄)(r̂_l n_k − r̂_k n_l)] / (4π(1−ν̄) r)`

use std::f64::consts::PI;

use crate::geometry::boundary_mesh::gauss_legendre;
use crate::geometry::Segment;
use crate::material::MaterialModel;
use crate::tensor::{outer, Mat2, Vec2};

/// Precomputed kernel constants for one material.
#[derive(Debug, Clone, Copy)]
pub struct Kelvin {
    nu: f64,
    c_u: f64,
    c_t: f64,
}

impl Kelvin {
    /// Kernel constants for a plane-stress material.
    pub fn new(material: &MaterialModel) -> Self {
        let nu_p = material.poissons_ratio;
        let nu = nu_p / (1.0 + nu_p);
        let mu = material.shear_modulus();
        Kelvin {
            nu,
            c_u: 1.0 / (8.0 * PI * mu * (1.0 - nu)),
            c_t: -1.0 / (4.0 * PI * (1.0 - nu)),
        }
    }

    /// Effective plane-strain Poisson ratio.
    pub fn effective_poisson(&self) -> f64 {
        self.nu
    }

    /// Displacement kernel at offset `r = y − x`.
    #[inline]
    pub fn u(&self, r: &Vec2) -> Mat2 {
        let d = r.norm();
        let rh = r / d;
        (Mat2::identity() * ((3.0 - 4.0 * self.nu) * (-d.ln())) + outer(&rh, &rh)) * self.c_u
    }

    /// Traction kernel at offset `r = y − x` for normal `n` at `y`.
    #[inline]
    pub fn t(&self, r: &Vec2, n: &Vec2) -> Mat2 {
        let d = r.norm();
        let rh = r / d;
        let drdn = rh.dot(n);
        let a = 1.0 - 2.0 * self.nu;
        let m = (Mat2::identity() * a + outer(&rh, &rh) * 2.0) * drdn
            - (outer(&rh, n) - outer(n, &rh)) * a;
        m * (self.c_t / d)
    }

    /// Integral of the displacement kernel over the element containing the
    /// source point at its midpoint (analytic, logarithmic singularity).
    pub fn u_self(&self, segment: &Segment) -> Mat2 {
        let l = segment.length;
        let log_int = l * (1.0 - (0.5 * l).ln());
        (Mat2::identity() * ((3.0 - 4.0 * self.nu) * log_int)
            + outer(&segment.tangent, &segment.tangent) * l)
            * self.c_u
    }
}

/// Quadrature rule over one element chosen for a given source point:
/// `subdivisions` equal pieces with a 4-point Gauss rule each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementRule {
    /// Number of equal sub-intervals.
    pub subdivisions: usize,
}

impl ElementRule {
    /// Rule adapted to the distance between `x` and the element: one piece
    /// when the element is far, up to 64 pieces when `x` is close.
    pub fn for_point(x: &Vec2, segment: &Segment) -> Self {
        let d = crate::geometry::polygon::point_segment_distance(x, &segment.start, &segment.end);
        let ratio = segment.length / d.max(1e-300);
        let subdivisions = if ratio < 0.25 {
            1
        } else {
            ((4.0 * ratio).ceil() as usize).clamp(1, 64)
        };
        ElementRule { subdivisions }
    }

    /// Calls `f(point, weight)` for every quadrature point.
    pub fn for_each(&self, segment: &Segment, mut f: impl FnMut(Vec2, f64)) {
        let (xs, ws) = gauss_legendre(4);
        let m = self.subdivisions as f64;
        let piece = segment.length / m;
        for p in 0..self.subdivisions {
            let s0 = -0.5 * segment.length + piece * p as f64;
            for (x, w) in xs.iter().zip(ws) {
                let s = s0 + 0.5 * piece * (1.0 + x);
                f(segment.midpoint + segment.tangent * s, 0.5 * piece * w);
            }
        }
    }
}

/// Integrals `(∫U dΓ, ∫T dΓ)` over `segment` for the source point `x`.
pub fn integrate_element(
    kelvin: &Kelvin,
    x: &Vec2,
    segment: &Segment,
    rule: ElementRule,
) -> (Mat2, Mat2) {
    let mut gu = Mat2::zeros();
    let mut ht = Mat2::zeros();
    rule.for_each(segment, |y, w| {
        let r = y - x;
        gu += kelvin.u(&r) * w;
        ht += kelvin.t(&r, &segment.normal) * w;
    });
    (gu, ht)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_pore_boundary_mesh, Pore};
    use crate::tensor::vec2;

    #[test]
    fn kernels_are_symmetric_and_scale_correctly() {
        let m = MaterialModel::new(1000.0, 0.3).unwrap();
        let k = Kelvin::new(&m);
        let r = vec2(0.3, -0.7);
        let u = k.u(&r);
        assert!((u - u.transpose()).norm() < 1e-15);
        // Reciprocity of the displacement kernel: U(r) = U(−r).
        assert!((k.u(&-r) - u).norm() < 1e-15);
        // Traction kernel decays like 1/r.
        let n = vec2(0.0, 1.0);
        let t1 = k.t(&r, &n);
        let t2 = k.t(&(r * 2.0), &n);
        assert!((t1 - t2 * 2.0).norm() < 1e-12 * t1.norm());
    }

    #[test]
    fn rigid_translation_identity_for_exterior_loop() {
        // With the normal pointing into the hole, the traction kernel
        // integrates to zero at points of the elastic region and to the
        // identity at points inside the hole (rigid-translation identity of
        // the hole region, whose outward normal is −n).
        let m = MaterialModel::new(1.0, 0.25).unwrap();
        let k = Kelvin::new(&m);
        let pore = Pore::circle(1, vec2(0.0, 0.0), 1.0, 256).unwrap();
        let mesh = build_pore_boundary_mesh(&pore, 1.0).unwrap();
        let integral = |x: Vec2| {
            let mut s = Mat2::zeros();
            for seg in mesh.segments() {
                s += integrate_element(&k, &x, seg, ElementRule::for_point(&x, seg)).1;
            }
            s
        };
        assert!(integral(vec2(3.0, 0.5)).norm() < 1e-10);
        assert!((integral(vec2(0.2, 0.1)) - Mat2::identity()).norm() < 1e-8);
    }
}
