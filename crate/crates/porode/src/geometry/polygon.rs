//! Elementary computational geometry on closed polylines.
//!
//! A closed polyline is a slice of vertices with implicit closure: the last
//! vertex connects back to the first and is never duplicated.

use crate::tensor::{cross, Vec2};

/// Signed area (positive for counterclockwise loops).
pub fn signed_area(vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    let mut a = 0.0;
    for k in 0..n {
        a += cross(&vertices[k], &vertices[(k + 1) % n]);
    }
    0.5 * a
}

/// Area centroid of the enclosed region. Coordinates are taken relative to
/// the first vertex to limit cancellation for loops far from the origin.
pub fn area_centroid(vertices: &[Vec2]) -> Option<Vec2> {
    let n = vertices.len();
    if n < 3 {
        return None;
    }
    let o = vertices[0];
    let mut a = 0.0;
    let mut c = Vec2::zeros();
    for k in 0..n {
        let p = vertices[k] - o;
        let q = vertices[(k + 1) % n] - o;
        let w = cross(&p, &q);
        a += w;
        c += (p + q) * w;
    }
    if a.abs() <= f64::MIN_POSITIVE {
        return None;
    }
    Some(o + c / (3.0 * a))
}

/// Total length of the closed loop.
pub fn perimeter(vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|k| (vertices[(k + 1) % n] - vertices[k]).norm())
        .sum()
}

/// Iterator over the closing segments `(v_k, v_{k+1})`.
pub fn segments(vertices: &[Vec2]) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
    let n = vertices.len();
    (0..n).map(move |k| (vertices[k], vertices[(k + 1) % n]))
}

/// Distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance(p: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    (p - closest_point_on_segment(p, a, b)).norm()
}

/// Closest point to `p` on the segment `[a, b]`.
pub fn closest_point_on_segment(p: &Vec2, a: &Vec2, b: &Vec2) -> Vec2 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return *a;
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    a + ab * t
}

fn orientation(a: &Vec2, b: &Vec2, c: &Vec2) -> f64 {
    cross(&(b - a), &(c - a))
}

/// True when the closed segments `[a, b]` and `[c, d]` share at least one point.
pub fn segments_intersect(a: &Vec2, b: &Vec2, c: &Vec2, d: &Vec2) -> bool {
    let d1 = orientation(c, d, a);
    let d2 = orientation(c, d, b);
    let d3 = orientation(a, b, c);
    let d4 = orientation(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: &Vec2, q: &Vec2, r: &Vec2, o: f64| {
        o == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(c, d, a, d1) || on(c, d, b, d2) || on(a, b, c, d3) || on(a, b, d, d4)
}

/// Minimum distance between the segments `[a, b]` and `[c, d]`.
pub fn segment_segment_distance(a: &Vec2, b: &Vec2, c: &Vec2, d: &Vec2) -> f64 {
    if segments_intersect(a, b, c, d) {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

/// True when no two non-adjacent segments of the loop touch and no vertex
/// is repeated.
pub fn is_simple(vertices: &[Vec2]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        if a == b {
            return false;
        }
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            if adjacent {
                // Adjacent segments may only share their common vertex:
                // reject folding back onto each other.
                let shared = if j == i + 1 { b } else { a };
                let other_ab = if j == i + 1 { a } else { b };
                let other_cd = if j == i + 1 { d } else { c };
                if orientation(&shared, &other_ab, &other_cd) == 0.0
                    && (other_ab - shared).dot(&(other_cd - shared)) > 0.0
                {
                    return false;
                }
                continue;
            }
            if segments_intersect(&a, &b, &c, &d) {
                return false;
            }
        }
    }
    true
}

/// Winding-number point-in-polygon test; points on the boundary may be
/// classified either way.
pub fn contains(vertices: &[Vec2], p: &Vec2) -> bool {
    let mut winding = 0i32;
    for (a, b) in segments(vertices) {
        if a.y <= p.y {
            if b.y > p.y && orientation(&a, &b, p) > 0.0 {
                winding += 1;
            }
        } else if b.y <= p.y && orientation(&a, &b, p) < 0.0 {
            winding -= 1;
        }
    }
    winding != 0
}

/// Distance from `p` to the closed loop.
pub fn distance_to_loop(vertices: &[Vec2], p: &Vec2) -> f64 {
    segments(vertices)
        .map(|(a, b)| point_segment_distance(p, &a, &b))
        .fold(f64::INFINITY, f64::min)
}

/// Minimum distance between two closed loops (zero if they touch or cross).
pub fn loop_distance(a: &[Vec2], b: &[Vec2]) -> f64 {
    let mut best = f64::INFINITY;
    for (p, q) in segments(a) {
        for (r, s) in segments(b) {
            best = best.min(segment_segment_distance(&p, &q, &r, &s));
            if best == 0.0 {
                return 0.0;
            }
        }
    }
    best
}

/// Axis-aligned bounding box `(min, max)` of a vertex set.
pub fn bounding_box(vertices: &[Vec2]) -> (Vec2, Vec2) {
    let mut lo = Vec2::repeat(f64::INFINITY);
    let mut hi = Vec2::repeat(f64::NEG_INFINITY);
    for v in vertices {
        lo = lo.inf(v);
        hi = hi.sup(v);
    }
    (lo, hi)
}

/// Vertices of a regular polygon inscribed in a circle, counterclockwise,
/// starting at angle `phase` (radians).
pub fn regular_polygon(center: Vec2, radius: f64, n: usize, phase: f64) -> Vec<Vec2> {
    (0..n)
        .map(|k| {
            let t = phase + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            center + Vec2::new(t.cos(), t.sin()) * radius
        })
        .collect()
}

/// Vertices of an ellipse with semi-axes `a` (along x) and `b` (along y),
/// counterclockwise.
pub fn ellipse(center: Vec2, a: f64, b: f64, n: usize) -> Vec<Vec2> {
    (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            center + Vec2::new(a * t.cos(), b * t.sin())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::vec2;

    fn square() -> Vec<Vec2> {
        vec![
            vec2(0.0, 0.0),
            vec2(2.0, 0.0),
            vec2(2.0, 2.0),
            vec2(0.0, 2.0),
        ]
    }

    #[test]
    fn area_centroid_perimeter_of_square() {
        let s = square();
        assert_eq!(signed_area(&s), 4.0);
        let mut r = s.clone();
        r.reverse();
        assert_eq!(signed_area(&r), -4.0);
        let c = area_centroid(&s).unwrap();
        assert!((c - vec2(1.0, 1.0)).norm() < 1e-15);
        assert_eq!(perimeter(&s), 8.0);
    }

    #[test]
    fn centroid_of_l_shape() {
        // Two unit squares side by side plus one on top of the left one.
        let l = vec![
            vec2(0.0, 0.0),
            vec2(2.0, 0.0),
            vec2(2.0, 1.0),
            vec2(1.0, 1.0),
            vec2(1.0, 2.0),
            vec2(0.0, 2.0),
        ];
        let c = area_centroid(&l).unwrap();
        // Centroids (0.5,0.5), (1.5,0.5), (0.5,1.5) with equal weight.
        assert!((c - vec2(2.5 / 3.0, 2.5 / 3.0)).norm() < 1e-14);
    }

    #[test]
    fn simplicity_detects_bow_tie() {
        assert!(is_simple(&square()));
        let bow = vec![
            vec2(0.0, 0.0),
            vec2(2.0, 2.0),
            vec2(2.0, 0.0),
            vec2(0.0, 2.0),
        ];
        assert!(!is_simple(&bow));
        let folded = vec![vec2(0.0, 0.0), vec2(2.0, 0.0), vec2(1.0, 0.0)];
        assert!(!is_simple(&folded));
    }

    #[test]
    fn containment_and_distances() {
        let s = square();
        assert!(contains(&s, &vec2(1.0, 1.0)));
        assert!(!contains(&s, &vec2(3.0, 1.0)));
        assert!((distance_to_loop(&s, &vec2(3.0, 1.0)) - 1.0).abs() < 1e-15);
        let moved: Vec<Vec2> = s.iter().map(|v| v + vec2(5.0, 0.0)).collect();
        assert!((loop_distance(&s, &moved) - 3.0).abs() < 1e-15);
        assert_eq!(loop_distance(&s, &s), 0.0);
    }

    #[test]
    fn regular_polygon_is_ccw() {
        let p = regular_polygon(vec2(1.0, 1.0), 2.0, 16, 0.0);
        assert!(signed_area(&p) > 0.0);
        assert!(is_simple(&p));
    }
}
