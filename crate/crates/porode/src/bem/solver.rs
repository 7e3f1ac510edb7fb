//! Collocation boundary-element solver for the exterior Neumann problem of
//! a single pore in an infinite plate.

use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::kernel::{integrate_element, ElementRule, Kelvin};
use crate::error::{PorodeError, Result};
use crate::geometry::PoreBoundaryMesh;
use crate::material::MaterialModel;
use crate::tensor::{cross, outer, sym, Mat2, Vec2};

/// Treatment of the net force and moment of the prescribed traction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equilibration {
    /// Remove the imbalance when it is below `tolerance` (relative to
    /// `max|t| × perimeter`), fail otherwise.
    Strict {
        /// Largest accepted relative imbalance.
        tolerance: f64,
    },
    /// Always project the traction onto the self-equilibrated subspace.
    Project,
}

impl Default for Equilibration {
    fn default() -> Self {
        Equilibration::Strict { tolerance: 0.05 }
    }
}

/// Exterior Neumann problem on one pore boundary.
#[derive(Debug, Clone)]
pub struct ExteriorProblem {
    /// Discretized pore boundary.
    pub boundary: Arc<PoreBoundaryMesh>,
    /// Prescribed traction `σ·n` at each quadrature point (normal into the pore).
    pub traction: Vec<Vec2>,
    /// Material of the surrounding plate.
    pub material: MaterialModel,
}

/// Summary of the equilibration step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EquilibrationRecord {
    /// Net force removed.
    pub removed_force: Vec2,
    /// Net moment removed (about the boundary's centroid of arc length).
    pub removed_moment: f64,
    /// Imbalance relative to `max|t| × perimeter`.
    pub relative_imbalance: f64,
}

/// Projects per-quadrature-point tractions onto zero net force and moment.
pub fn equilibrate(boundary: &PoreBoundaryMesh, traction: &mut [Vec2]) -> EquilibrationRecord {
    let q = boundary.quadrature();
    let perimeter: f64 = q.iter().map(|p| p.weight).sum();
    let tmax = traction.iter().map(|t| t.norm()).fold(0.0_f64, f64::max);
    if tmax == 0.0 {
        return EquilibrationRecord::default();
    }
    let center: Vec2 = q.iter().map(|p| p.point * p.weight).sum::<Vec2>() / perimeter;
    let force: Vec2 = q
        .iter()
        .zip(traction.iter())
        .map(|(p, t)| t * p.weight)
        .sum();
    let mut inertia = 0.0;
    for (p, t) in q.iter().zip(traction.iter_mut()) {
        *t -= force / perimeter;
        inertia += p.weight * (p.point - center).norm_squared();
    }
    let moment: f64 = q
        .iter()
        .zip(traction.iter())
        .map(|(p, t)| p.weight * cross(&(p.point - center), t))
        .sum();
    for (p, t) in q.iter().zip(traction.iter_mut()) {
        let r = p.point - center;
        *t -= Vec2::new(-r.y, r.x) * (moment / inertia);
    }
    let arm = (inertia / perimeter).sqrt();
    EquilibrationRecord {
        removed_force: force,
        removed_moment: moment,
        relative_imbalance: (force.norm() + moment.abs() / arm) / (tmax * perimeter),
    }
}

/// Net force and moment of per-quadrature-point tractions.
pub fn resultants(boundary: &PoreBoundaryMesh, traction: &[Vec2]) -> (Vec2, f64) {
    let q = boundary.quadrature();
    let perimeter: f64 = q.iter().map(|p| p.weight).sum();
    let center: Vec2 = q.iter().map(|p| p.point * p.weight).sum::<Vec2>() / perimeter;
    let f = q.iter().zip(traction).map(|(p, t)| t * p.weight).sum();
    let m = q
        .iter()
        .zip(traction)
        .map(|(p, t)| p.weight * cross(&(p.point - center), t))
        .sum();
    (f, m)
}

/// Factorized boundary-element operator of one pore boundary; reused for
/// every exterior problem on that boundary.
#[derive(Debug)]
pub struct ExteriorOperator {
    boundary: Arc<PoreBoundaryMesh>,
    material: MaterialModel,
    kelvin: Kelvin,
    h_lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    g: DMatrix<f64>,
}

impl ExteriorOperator {
    /// Assembles `H = ½I + ∫T` and `G = ∫U` for constant elements with
    /// midpoint collocation and factorizes `H`.
    pub fn new(boundary: Arc<PoreBoundaryMesh>, material: MaterialModel) -> Result<Self> {
        material.validate()?;
        let segs = boundary.segments();
        let n = segs.len();
        if n < 3 {
            return Err(PorodeError::Exterior {
                pore: boundary.pore_id(),
                message: "boundary needs at least three elements".into(),
            });
        }
        let kelvin = Kelvin::new(&material);
        let mut h = DMatrix::<f64>::zeros(2 * n, 2 * n);
        let mut g = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for i in 0..n {
            let x = segs[i].midpoint;
            for (j, seg) in segs.iter().enumerate() {
                let (gu, ht) = if i == j {
                    (kelvin.u_self(seg), Mat2::identity() * 0.5)
                } else {
                    integrate_element(&kelvin, &x, seg, ElementRule::for_point(&x, seg))
                };
                for a in 0..2 {
                    for b in 0..2 {
                        h[(2 * i + a, 2 * j + b)] = ht[(a, b)];
                        g[(2 * i + a, 2 * j + b)] = gu[(a, b)];
                    }
                }
            }
        }
        let h_lu = h.lu();
        if !h_lu.is_invertible() {
            return Err(PorodeError::Exterior {
                pore: boundary.pore_id(),
                message: "boundary-element matrix is singular".into(),
            });
        }
        Ok(ExteriorOperator {
            boundary,
            material,
            kelvin,
            h_lu,
            g,
        })
    }

    /// Boundary discretization.
    pub fn boundary(&self) -> &Arc<PoreBoundaryMesh> {
        &self.boundary
    }

    /// Material.
    pub fn material(&self) -> &MaterialModel {
        &self.material
    }

    /// Solves for the prescribed per-quadrature-point traction.
    pub fn solve(
        &self,
        traction: &[Vec2],
        equilibration: Equilibration,
    ) -> Result<ExteriorSolution> {
        let b = &self.boundary;
        let q = b.quadrature();
        if traction.len() != q.len() {
            return Err(PorodeError::Exterior {
                pore: b.pore_id(),
                message: format!(
                    "expected {} traction values, got {}",
                    q.len(),
                    traction.len()
                ),
            });
        }
        if traction
            .iter()
            .any(|t| !t.x.is_finite() || !t.y.is_finite())
        {
            return Err(PorodeError::Exterior {
                pore: b.pore_id(),
                message: "traction is not finite".into(),
            });
        }
        let mut t = traction.to_vec();
        let record = equilibrate(b, &mut t);
        if let Equilibration::Strict { tolerance } = equilibration {
            if record.relative_imbalance > tolerance {
                return Err(PorodeError::Exterior {
                    pore: b.pore_id(),
                    message: format!(
                        "traction is not self-equilibrated: relative imbalance {:.3e} exceeds {:.3e}",
                        record.relative_imbalance, tolerance
                    ),
                });
            }
        }
        let segs = b.segments();
        let n = segs.len();
        let mut t_elem = vec![Vec2::zeros(); n];
        for (p, tv) in q.iter().zip(&t) {
            t_elem[p.segment] += tv * (p.weight / segs[p.segment].length);
        }
        let tv = DVector::<f64>::from_fn(2 * n, |k, _| t_elem[k / 2][k % 2]);
        let rhs = &self.g * tv;
        let u = self.h_lu.solve(&rhs).ok_or_else(|| PorodeError::Exterior {
            pore: b.pore_id(),
            message: "boundary-element solve failed".into(),
        })?;
        let u_elem: Vec<Vec2> = (0..n).map(|k| Vec2::new(u[2 * k], u[2 * k + 1])).collect();
        Ok(ExteriorSolution::new(
            b.clone(),
            self.material,
            self.kelvin,
            t,
            t_elem,
            u_elem,
            record,
        ))
    }
}

/// Solves one exterior problem (assembling a fresh operator).
pub fn solve_exterior(
    problem: &ExteriorProblem,
    equilibration: Equilibration,
) -> Result<ExteriorSolution> {
    ExteriorOperator::new(problem.boundary.clone(), problem.material)?
        .solve(&problem.traction, equilibration)
}

/// Field values at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointFields {
    /// Displacement.
    pub displacement: Vec2,
    /// Displacement gradient `∂u_i/∂x_j`.
    pub gradient: Mat2,
    /// Strain.
    pub strain: Mat2,
    /// Stress.
    pub stress: Mat2,
}

/// Solution of an exterior problem.
#[derive(Debug, Clone)]
pub struct ExteriorSolution {
    boundary: Arc<PoreBoundaryMesh>,
    material: MaterialModel,
    kelvin: Kelvin,
    traction: Vec<Vec2>,
    element_traction: Vec<Vec2>,
    element_displacement: Vec<Vec2>,
    boundary_fields: Vec<PointFields>,
    equilibration: EquilibrationRecord,
}

/// Non-uniform three-point derivative at the middle of `(s0, f0), (s1, f1), (s2, f2)`.
fn centered_derivative<T>(h1: f64, h2: f64, f0: T, f1: T, f2: T) -> T
where
    T: std::ops::Sub<Output = T>
        + std::ops::Mul<f64, Output = T>
        + std::ops::Add<Output = T>
        + Copy,
{
    ((f2 - f1) * (h1 * h1) + (f1 - f0) * (h2 * h2)) * (1.0 / (h1 * h2 * (h1 + h2)))
}

/// Arc-length derivative at every element midpoint of a per-element field
/// on a closed boundary (non-uniform centred differences).
pub(crate) fn midpoint_derivative<T>(segs: &[crate::geometry::Segment], values: &[T]) -> Vec<T>
where
    T: std::ops::Sub<Output = T>
        + std::ops::Mul<f64, Output = T>
        + std::ops::Add<Output = T>
        + Copy,
{
    let n = segs.len();
    (0..n)
        .map(|k| {
            let p = (k + n - 1) % n;
            let nx = (k + 1) % n;
            let h1 = 0.5 * (segs[p].length + segs[k].length);
            let h2 = 0.5 * (segs[k].length + segs[nx].length);
            centered_derivative(h1, h2, values[p], values[k], values[nx])
        })
        .collect()
}

/// Linear interpolation between element midpoints: for quadrature point
/// `qi` returns the neighbouring element on the same side of the owning
/// element's midpoint and the weight of that neighbour.
pub(crate) fn midpoint_neighbour(boundary: &PoreBoundaryMesh, qi: usize) -> (usize, f64) {
    let segs = boundary.segments();
    let n = segs.len();
    let qp = &boundary.quadrature()[qi];
    let k = qp.segment;
    let offset = 0.5 * segs[k].length * qp.local;
    let other = if offset >= 0.0 {
        (k + 1) % n
    } else {
        (k + n - 1) % n
    };
    let dist = 0.5 * (segs[k].length + segs[other].length);
    (other, offset.abs() / dist)
}

impl ExteriorSolution {
    fn new(
        boundary: Arc<PoreBoundaryMesh>,
        material: MaterialModel,
        kelvin: Kelvin,
        traction: Vec<Vec2>,
        element_traction: Vec<Vec2>,
        element_displacement: Vec<Vec2>,
        equilibration: EquilibrationRecord,
    ) -> Self {
        let segs = boundary.segments();
        // Tangential derivative of the displacement at element midpoints.
        let dmid = midpoint_derivative(segs, &element_displacement);
        let mut fields = Vec::with_capacity(boundary.quadrature().len());
        for (qi, qp) in boundary.quadrature().iter().enumerate() {
            let k = qp.segment;
            let seg = &segs[k];
            let (other, w) = midpoint_neighbour(&boundary, qi);
            let u = element_displacement[k] * (1.0 - w) + element_displacement[other] * w;
            let du = dmid[k] * (1.0 - w) + dmid[other] * w;
            let tq = traction[qi];
            let nrm = seg.normal;
            let tan = seg.tangent;
            let s_nn = nrm.dot(&tq);
            let s_nt = tan.dot(&tq);
            let e_tt = tan.dot(&du);
            let s_tt = material.youngs_modulus * e_tt + material.poissons_ratio * s_nn;
            let stress = outer(&nrm, &nrm) * s_nn
                + (outer(&nrm, &tan) + outer(&tan, &nrm)) * s_nt
                + outer(&tan, &tan) * s_tt;
            let strain = material.compliance(&stress);
            let e_nn = nrm.dot(&(strain * nrm));
            let e_nt = nrm.dot(&(strain * tan));
            let g_n = nrm * e_nn + tan * (2.0 * e_nt - nrm.dot(&du));
            let gradient = outer(&du, &tan) + outer(&g_n, &nrm);
            fields.push(PointFields {
                displacement: u,
                gradient,
                strain,
                stress,
            });
        }
        ExteriorSolution {
            boundary,
            material,
            kelvin,
            traction,
            element_traction,
            element_displacement,
            boundary_fields: fields,
            equilibration,
        }
    }

    /// Boundary discretization.
    pub fn boundary(&self) -> &Arc<PoreBoundaryMesh> {
        &self.boundary
    }

    /// Material.
    pub fn material(&self) -> &MaterialModel {
        &self.material
    }

    /// Equilibrated traction at the quadrature points.
    pub fn traction(&self) -> &[Vec2] {
        &self.traction
    }

    /// Element-average traction.
    pub fn element_traction(&self) -> &[Vec2] {
        &self.element_traction
    }

    /// Displacement at the collocation points (element midpoints).
    pub fn boundary_displacements(&self) -> &[Vec2] {
        &self.element_displacement
    }

    /// Equilibration summary.
    pub fn equilibration(&self) -> EquilibrationRecord {
        self.equilibration
    }

    /// On-boundary fields at every quadrature point (boundary-limit values).
    pub fn boundary_fields(&self) -> &[PointFields] {
        &self.boundary_fields
    }

    /// Displacement at a point of the exterior domain (not on the boundary).
    pub fn displacement_at(&self, x: &Vec2) -> Vec2 {
        self.displacement_with_rules(x, &self.rules_for(x))
    }

    fn rules_for(&self, x: &Vec2) -> Vec<ElementRule> {
        self.boundary
            .segments()
            .iter()
            .map(|s| ElementRule::for_point(x, s))
            .collect()
    }

    fn displacement_with_rules(&self, x: &Vec2, rules: &[ElementRule]) -> Vec2 {
        let mut u = Vec2::zeros();
        for (j, seg) in self.boundary.segments().iter().enumerate() {
            let (gu, ht) = integrate_element(&self.kelvin, x, seg, rules[j]);
            u += gu * self.element_traction[j] - ht * self.element_displacement[j];
        }
        u
    }

    /// Displacement, gradient, strain and stress at an exterior point. The
    /// gradient uses central differences of the integral representation
    /// with a step proportional to the distance from the boundary.
    pub fn fields_at(&self, x: &Vec2) -> PointFields {
        let d = self
            .boundary
            .segments()
            .iter()
            .map(|s| crate::geometry::polygon::point_segment_distance(x, &s.start, &s.end))
            .fold(f64::INFINITY, f64::min);
        let h = 1e-3 * d;
        let rules = self.rules_for(x);
        let u = self.displacement_with_rules(x, &rules);
        let ex = Vec2::new(h, 0.0);
        let ey = Vec2::new(0.0, h);
        let dx = (self.displacement_with_rules(&(x + ex), &rules)
            - self.displacement_with_rules(&(x - ex), &rules))
            / (2.0 * h);
        let dy = (self.displacement_with_rules(&(x + ey), &rules)
            - self.displacement_with_rules(&(x - ey), &rules))
            / (2.0 * h);
        let gradient = Mat2::new(dx.x, dy.x, dx.y, dy.y);
        let strain = sym(&gradient);
        PointFields {
            displacement: u,
            gradient,
            strain,
            stress: self.material.stress(&strain),
        }
    }

    /// Debug dump `s,x,y,nx,ny,tx,ty,ux,uy` per quadrature point.
    pub fn debug_csv(&self) -> String {
        let mut s = String::from("s,x,y,nx,ny,tx,ty,ux,uy\n");
        for (qi, q) in self.boundary.quadrature().iter().enumerate() {
            let n = self.boundary.segments()[q.segment].normal;
            let t = self.traction[qi];
            let u = self.boundary_fields[qi].displacement;
            let _ = writeln!(
                s,
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                q.arc_length, q.point.x, q.point.y, n.x, n.y, t.x, t.y, u.x, u.y
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_pore_boundary_mesh, Pore};
    use crate::tensor::vec2;

    fn circle_operator(elements: usize) -> (ExteriorOperator, MaterialModel) {
        let material = MaterialModel::new(6.89e10, 0.35).unwrap();
        let pore = Pore::circle(1, vec2(3.0, -2.0), 5.0, elements).unwrap();
        let boundary = Arc::new(build_pore_boundary_mesh(&pore, 1.0).unwrap());
        (ExteriorOperator::new(boundary, material).unwrap(), material)
    }

    fn hoop_errors(remote: Mat2, expected: impl Fn(f64) -> f64) -> f64 {
        let (op, _) = circle_operator(128);
        let b = op.boundary().clone();
        let t: Vec<Vec2> = b
            .quadrature()
            .iter()
            .map(|q| -(remote * b.segments()[q.segment].normal))
            .collect();
        let sol = op.solve(&t, Equilibration::default()).unwrap();
        let c = b.centroid();
        let mut worst = 0.0_f64;
        for (q, f) in b.quadrature().iter().zip(sol.boundary_fields()) {
            let tau = b.segments()[q.segment].tangent;
            let total = remote + f.stress;
            let hoop = tau.dot(&(total * tau));
            let theta = (q.point.y - c.y).atan2(q.point.x - c.x);
            worst = worst.max((hoop - expected(theta)).abs());
        }
        worst
    }

    #[test]
    fn kirsch_uniaxial_hoop_stress() {
        let s = 1.0e6;
        let err = hoop_errors(Mat2::new(s, 0.0, 0.0, 0.0), |th| {
            s * (1.0 - 2.0 * (2.0 * th).cos())
        });
        assert!(err < 0.02 * 3.0 * s, "max hoop error {err}");
    }

    #[test]
    fn kirsch_hydrostatic_hoop_stress() {
        let p = 2.5e5;
        let err = hoop_errors(Mat2::new(p, 0.0, 0.0, p), |_| 2.0 * p);
        assert!(err < 0.01 * 2.0 * p, "max hoop error {err}");
    }

    #[test]
    fn zero_traction_gives_zero_field_and_solve_is_linear() {
        let (op, _) = circle_operator(64);
        let n = op.boundary().quadrature().len();
        let sol = op
            .solve(&vec![Vec2::zeros(); n], Equilibration::default())
            .unwrap();
        assert!(sol.boundary_displacements().iter().all(|u| u.norm() == 0.0));
        let t: Vec<Vec2> = op
            .boundary()
            .quadrature()
            .iter()
            .map(|q| {
                let nrm = op.boundary().segments()[q.segment].normal;
                -(Mat2::new(1.0, 0.3, 0.3, -0.4) * nrm)
            })
            .collect();
        let a = op.solve(&t, Equilibration::default()).unwrap();
        let t3: Vec<Vec2> = t.iter().map(|v| v * 3.0).collect();
        let b = op.solve(&t3, Equilibration::default()).unwrap();
        for (x, y) in a
            .boundary_displacements()
            .iter()
            .zip(b.boundary_displacements())
        {
            assert!((x * 3.0 - y).norm() <= 1e-10 * y.norm().max(1e-300));
        }
    }

    #[test]
    fn field_evaluation_decays_and_matches_boundary_limit() {
        let (op, _) = circle_operator(128);
        let b = op.boundary().clone();
        let remote = Mat2::new(1.0, 0.0, 0.0, 0.0);
        let t: Vec<Vec2> = b
            .quadrature()
            .iter()
            .map(|q| -(remote * b.segments()[q.segment].normal))
            .collect();
        let sol = op.solve(&t, Equilibration::default()).unwrap();
        let c = b.centroid();
        let on_boundary = sol
            .boundary_fields()
            .iter()
            .map(|f| crate::tensor::max_abs(&f.stress))
            .fold(0.0, f64::max);
        let far = (0..16)
            .map(|k| {
                let th = k as f64 * std::f64::consts::PI / 8.0;
                let x = c + vec2(th.cos(), th.sin()) * 250.0;
                crate::tensor::max_abs(&sol.fields_at(&x).stress)
            })
            .fold(0.0, f64::max);
        assert!(far <= 0.05 * on_boundary);
        // Kirsch field at r = 2a, θ = 90°, where cos 2θ = −1:
        // σ_rr = S/2(1 − a²/r²) + S/2(1 − 4a²/r² + 3a⁴/r⁴)cos 2θ,
        // σ_θθ = S/2(1 + a²/r²) − S/2(1 + 3a⁴/r⁴)cos 2θ; x is the θ direction.
        let a = 5.0_f64;
        let r = 2.0 * a;
        let x = c + vec2(0.0, r);
        let f = sol.fields_at(&x);
        let q2 = a * a / (r * r);
        let srr = 0.5 * (1.0 - q2) - 0.5 * (1.0 - 4.0 * q2 + 3.0 * q2 * q2);
        let stt = 0.5 * (1.0 + q2) + 0.5 * (1.0 + 3.0 * q2 * q2);
        let total = remote + f.stress;
        assert!(
            (total[(0, 0)] - stt).abs() < 0.01,
            "{} vs {stt}",
            total[(0, 0)]
        );
        assert!(
            (total[(1, 1)] - srr).abs() < 0.01,
            "{} vs {srr}",
            total[(1, 1)]
        );
    }

    #[test]
    fn strict_equilibration_rejects_unbalanced_traction() {
        let (op, _) = circle_operator(64);
        let n = op.boundary().quadrature().len();
        let err = op
            .solve(&vec![vec2(1.0, 0.0); n], Equilibration::default())
            .unwrap_err();
        assert!(matches!(err, PorodeError::Exterior { pore: 1, .. }));
        let sol = op
            .solve(&vec![vec2(1.0, 0.0); n], Equilibration::Project)
            .unwrap();
        let (f, m) = resultants(op.boundary(), sol.traction());
        assert!(f.norm() < 1e-9 && m.abs() < 1e-9);
    }
}
