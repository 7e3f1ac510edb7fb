//! First- and second-order shape terms integrated over the shape-parameter
//! interval `[ξ, 1]`.

use std::fmt::Write as _;

use super::bundle::{BoundaryFieldBundle, FieldSample, MultiplierSolutions};
use crate::error::{PorodeError, Result};
use crate::tensor::{ddot, Mat2};

/// First-order shape term of one pore:
/// `∫ −(V_n/2) σ(z):ε(λ) (1 − ξ²) dΓ` with the augmented fields
/// `σ(z) = σ₀(z) + σ_E(z)` and `ε(λ) = ε₀(λ) + ε_E(λ)`, `V_n = V·n` and the
/// normal pointing into the pore.
pub fn first_order_term(bundle: &BoundaryFieldBundle, xi: f64) -> Result<f64> {
    check_xi(xi)?;
    let q = bundle.boundary().quadrature();
    let mut sum = 0.0;
    for (k, p) in q.iter().enumerate() {
        sum += p.weight * first_order_integrand(bundle, k);
    }
    Ok(sum * (1.0 - xi * xi))
}

fn first_order_integrand(bundle: &BoundaryFieldBundle, k: usize) -> f64 {
    let vn = bundle.velocity()[k].dot(&bundle.normal()[k]);
    -0.5 * vn * ddot(&bundle.z_total(k).stress, &bundle.lambda_total(k).strain)
}

/// Shape derivative `dΨ/dη` at `η = 1` in boundary form,
/// `−∫ σ(z):ε(λ) V_n dΓ`, from the augmented exterior-approximated fields.
pub fn first_order_derivative(bundle: &BoundaryFieldBundle) -> f64 {
    let q = bundle.boundary().quadrature();
    q.iter()
        .enumerate()
        .map(|(k, p)| 2.0 * p.weight * first_order_integrand(bundle, k))
        .sum()
}

fn check_xi(xi: f64) -> Result<()> {
    if (0.0..=1.0).contains(&xi) {
        Ok(())
    } else {
        Err(PorodeError::validation(format!(
            "shape-parameter lower limit must lie in [0, 1], got {xi}"
        )))
    }
}

/// Tensor `M` of the second-order integrand at one point, whose
/// contraction `(M·W)·n` is integrated. `z` and `l` are the augmented
/// primary and adjoint fields at the point, `p` and `q` the multiplier
/// fields; every gradient is the Jacobian `∂u_i/∂x_j`.
pub fn second_order_tensor(
    z: &FieldSample,
    l: &FieldSample,
    p: &FieldSample,
    q: &FieldSample,
) -> Mat2 {
    Mat2::identity() * (ddot(&z.stress, &p.strain) + ddot(&l.stress, &q.strain))
        - p.stress * z.gradient
        - z.stress * p.gradient
        - q.stress * l.gradient
        - l.stress * q.gradient
}

fn second_order_integrands(
    multipliers: &MultiplierSolutions,
    target: &BoundaryFieldBundle,
) -> Vec<f64> {
    let (ps, qs) = multipliers.samples_on(target);
    let own = multipliers.source() == target.pore().id();
    (0..ps.len())
        .map(|k| {
            let z = target.z_total(k);
            let l = target.lambda_total(k);
            let m = second_order_tensor(&z, &l, &ps[k], &qs[k]);
            let w = target.velocity()[k];
            let n = target.normal()[k];
            let mut value = (m * w).dot(&n);
            if own {
                // The boundary form is derived for a velocity carried by the
                // pore surface alone. Referring the self term to the smooth
                // velocity X − X_c around the pore (∇V = I, so
                // ⟨DΨ; (∇V)V⟩ = dΨ/dη) adds twice the first-order
                // integrand −σ(z):ε(λ) V_n.
                value -= 2.0 * w.dot(&n) * ddot(&z.stress, &l.strain);
            }
            value
        })
        .collect()
}

/// Second-order term of the ordered pair (source → target): the
/// multipliers driven by the source pore's velocity are combined with the
/// target's augmented fields and velocity `W` over the target boundary and
/// scaled by `(1 − ξ)²`. When source and target coincide the result is the
/// self term: the shape Hessian of the pore for the smooth velocity
/// `X − X_c`, with an extra factor ½.
pub fn second_order_term(
    multipliers: &MultiplierSolutions,
    target: &BoundaryFieldBundle,
    xi: f64,
) -> Result<f64> {
    check_xi(xi)?;
    if multipliers.p().material() != target.material() {
        return Err(PorodeError::validation(
            "multiplier and target solutions use different materials",
        ));
    }
    let values = second_order_integrands(multipliers, target);
    let sum: f64 = target
        .boundary()
        .quadrature()
        .iter()
        .zip(&values)
        .map(|(p, v)| p.weight * v)
        .sum();
    let half = if multipliers.source() == target.pore().id() {
        0.5
    } else {
        1.0
    };
    Ok(half * sum * (1.0 - xi) * (1.0 - xi))
}

/// Debug CSV of per-quadrature-point integrands of a pore:
/// `s,x,y,first_order,second_order_self`.
pub fn integrand_csv(
    bundle: &BoundaryFieldBundle,
    own_multipliers: Option<&MultiplierSolutions>,
) -> String {
    let second = own_multipliers.map(|m| second_order_integrands(m, bundle));
    let mut out = String::from("s,x,y,first_order,second_order_self\n");
    for (k, p) in bundle.boundary().quadrature().iter().enumerate() {
        let s2 = second.as_ref().map_or(f64::NAN, |v| v[k]);
        let _ = writeln!(
            out,
            "{:e},{:e},{:e},{:e},{:e}",
            p.arc_length,
            p.point.x,
            p.point.y,
            first_order_integrand(bundle, k),
            s2
        );
    }
    out
}
