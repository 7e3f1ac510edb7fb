//! Small fixed-size vector and tensor helpers for two-dimensional mechanics.
//!
//! Displacement gradients follow the convention `G[(i, j)] = ∂u_i/∂x_j`, so
//! that `G * v` is the directional derivative of `u` along `v`.

use nalgebra::{Matrix2, Vector2};

/// Point or vector in the plane (millimetres for coordinates).
pub type Vec2 = Vector2<f64>;

/// Second-order tensor in the plane (stress, strain, displacement gradient).
pub type Mat2 = Matrix2<f64>;

/// Builds a vector from its components.
#[inline]
pub fn vec2(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

/// Symmetric part `½(A + Aᵀ)`.
#[inline]
pub fn sym(a: &Mat2) -> Mat2 {
    (a + a.transpose()) * 0.5
}

/// Double contraction `A : B = Σ A_ij B_ij`.
#[inline]
pub fn ddot(a: &Mat2, b: &Mat2) -> f64 {
    a.component_mul(b).sum()
}

/// Dyadic product `a ⊗ b` with components `a_i b_j`.
#[inline]
pub fn outer(a: &Vec2, b: &Vec2) -> Mat2 {
    a * b.transpose()
}

/// Two-dimensional cross product `a_x b_y − a_y b_x`.
#[inline]
pub fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Unit vector rotated by −90° from `t`; for a loop traversed clockwise this
/// points to the right of the direction of travel.
#[inline]
pub fn right_normal(t: &Vec2) -> Vec2 {
    Vec2::new(t.y, -t.x)
}

/// Largest absolute entry of a tensor.
#[inline]
pub fn max_abs(a: &Mat2) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym_and_ddot() {
        let a = Mat2::new(1.0, 2.0, 4.0, 3.0);
        let s = sym(&a);
        assert_eq!(s, Mat2::new(1.0, 3.0, 3.0, 3.0));
        assert_eq!(ddot(&a, &Mat2::identity()), 4.0);
        assert_eq!(ddot(&a, &a), 1.0 + 4.0 + 16.0 + 9.0);
    }

    #[test]
    fn outer_and_cross() {
        let a = vec2(1.0, 2.0);
        let b = vec2(3.0, 5.0);
        assert_eq!(outer(&a, &b), Mat2::new(3.0, 5.0, 6.0, 10.0));
        assert_eq!(cross(&a, &b), -1.0);
        assert_eq!(right_normal(&vec2(1.0, 0.0)), vec2(0.0, -1.0));
    }
}
