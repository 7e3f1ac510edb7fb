//! Pore-free reference domain: outer polygon, optional interior holes that
//! belong to the design (not pores), boundary tags and thickness.

use serde::{Deserialize, Serialize};

use super::polygon;
use crate::error::{PorodeError, Result};
use crate::tensor::Vec2;

/// Interior hole of the design (for example a fixture bore). Unlike pores,
/// holes are part of the reference domain and are always meshed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoleLoop {
    /// Boundary vertices (any orientation; stored clockwise).
    pub vertices: Vec<Vec2>,
    /// Boundary group of every segment of the hole.
    pub tag: String,
}

/// Reference domain `Ω` without pores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceDomain {
    outer: Vec<Vec2>,
    outer_tags: Vec<String>,
    holes: Vec<HoleLoop>,
    thickness: f64,
}

impl ReferenceDomain {
    /// Builds a domain from a counterclockwise outer polygon, one tag per
    /// outer segment (segment `k` joins vertex `k` to `k+1`), interior holes
    /// and the out-of-plane thickness.
    pub fn new(
        outer: Vec<Vec2>,
        outer_tags: Vec<String>,
        holes: Vec<HoleLoop>,
        thickness: f64,
    ) -> Result<Self> {
        if !polygon::is_simple(&outer) {
            return Err(PorodeError::validation(
                "outer boundary is not a simple polygon",
            ));
        }
        if polygon::signed_area(&outer) <= 0.0 {
            return Err(PorodeError::validation(
                "outer boundary must be counterclockwise",
            ));
        }
        if outer_tags.len() != outer.len() {
            return Err(PorodeError::validation(format!(
                "outer boundary has {} segments but {} tags",
                outer.len(),
                outer_tags.len()
            )));
        }
        if !(thickness > 0.0 && thickness.is_finite()) {
            return Err(PorodeError::validation(format!(
                "thickness must be positive, got {thickness}"
            )));
        }
        let mut stored = Vec::with_capacity(holes.len());
        for (k, mut h) in holes.into_iter().enumerate() {
            if !polygon::is_simple(&h.vertices) {
                return Err(PorodeError::validation(format!(
                    "hole {k} is not a simple polygon"
                )));
            }
            if polygon::signed_area(&h.vertices) > 0.0 {
                h.vertices.reverse();
            }
            let inside = h.vertices.iter().all(|v| polygon::contains(&outer, v))
                && polygon::loop_distance(&h.vertices, &outer) > 0.0;
            if !inside {
                return Err(PorodeError::validation(format!(
                    "hole {k} is not strictly inside the outer boundary"
                )));
            }
            for (m, other) in stored.iter().enumerate() {
                let o: &HoleLoop = other;
                if polygon::loop_distance(&h.vertices, &o.vertices) == 0.0
                    || polygon::contains(&o.vertices, &h.vertices[0])
                    || polygon::contains(&h.vertices, &o.vertices[0])
                {
                    return Err(PorodeError::validation(format!(
                        "holes {m} and {k} overlap"
                    )));
                }
            }
            stored.push(h);
        }
        Ok(ReferenceDomain {
            outer,
            outer_tags,
            holes: stored,
            thickness,
        })
    }

    /// Axis-aligned rectangle `[x0, x0+w] × [y0, y0+h]` with tags for the
    /// bottom, right, top and left edges (in that order).
    pub fn rectangle(
        x0: f64,
        y0: f64,
        w: f64,
        h: f64,
        tags: [&str; 4],
        thickness: f64,
    ) -> Result<Self> {
        ReferenceDomain::new(
            vec![
                Vec2::new(x0, y0),
                Vec2::new(x0 + w, y0),
                Vec2::new(x0 + w, y0 + h),
                Vec2::new(x0, y0 + h),
            ],
            tags.iter().map(|s| s.to_string()).collect(),
            Vec::new(),
            thickness,
        )
    }

    /// Counterclockwise outer polygon.
    pub fn outer(&self) -> &[Vec2] {
        &self.outer
    }

    /// Tag of outer segment `k`.
    pub fn outer_tag(&self, k: usize) -> &str {
        &self.outer_tags[k]
    }

    /// All outer tags.
    pub fn outer_tags(&self) -> &[String] {
        &self.outer_tags
    }

    /// Interior holes (clockwise).
    pub fn holes(&self) -> &[HoleLoop] {
        &self.holes
    }

    /// Out-of-plane thickness.
    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    /// Copy with a different thickness.
    pub fn with_thickness(&self, thickness: f64) -> Result<Self> {
        ReferenceDomain::new(
            self.outer.clone(),
            self.outer_tags.clone(),
            self.holes.clone(),
            thickness,
        )
    }

    /// True for points inside the outer polygon and outside every hole.
    pub fn contains(&self, p: &Vec2) -> bool {
        polygon::contains(&self.outer, p)
            && !self.holes.iter().any(|h| polygon::contains(&h.vertices, p))
    }

    /// Distance from `p` to the nearest boundary (outer or hole).
    pub fn distance_to_boundary(&self, p: &Vec2) -> f64 {
        self.holes
            .iter()
            .map(|h| polygon::distance_to_loop(&h.vertices, p))
            .fold(polygon::distance_to_loop(&self.outer, p), f64::min)
    }

    /// Minimum distance between a closed loop and the domain boundary.
    pub fn loop_distance_to_boundary(&self, loop_vertices: &[Vec2]) -> f64 {
        self.holes
            .iter()
            .map(|h| polygon::loop_distance(&h.vertices, loop_vertices))
            .fold(polygon::loop_distance(&self.outer, loop_vertices), f64::min)
    }

    /// Every boundary segment with its tag: outer segments first, then hole
    /// segments.
    pub fn tagged_segments(&self) -> Vec<(Vec2, Vec2, &str)> {
        let mut out: Vec<(Vec2, Vec2, &str)> = polygon::segments(&self.outer)
            .zip(self.outer_tags.iter())
            .map(|((a, b), t)| (a, b, t.as_str()))
            .collect();
        for h in &self.holes {
            out.extend(polygon::segments(&h.vertices).map(|(a, b)| (a, b, h.tag.as_str())));
        }
        out
    }

    /// Set of distinct tag names.
    pub fn tag_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.outer_tags.clone();
        names.extend(self.holes.iter().map(|h| h.tag.clone()));
        names.sort();
        names.dedup();
        names
    }

    /// Bounding box of the outer polygon.
    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        polygon::bounding_box(&self.outer)
    }

    /// Area of the domain (outer minus holes).
    pub fn area(&self) -> f64 {
        polygon::signed_area(&self.outer)
            - self
                .holes
                .iter()
                .map(|h| polygon::signed_area(&h.vertices).abs())
                .sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::vec2;

    #[test]
    fn rectangle_tags_and_containment() {
        let d =
            ReferenceDomain::rectangle(0.0, 0.0, 200.0, 100.0, ["b", "r", "t", "l"], 1.0).unwrap();
        assert_eq!(d.outer_tag(3), "l");
        assert!(d.contains(&vec2(100.0, 50.0)));
        assert!(!d.contains(&vec2(-1.0, 50.0)));
        assert!((d.distance_to_boundary(&vec2(100.0, 45.0)) - 45.0).abs() < 1e-12);
        assert_eq!(d.area(), 20000.0);
    }

    #[test]
    fn rejects_clockwise_outer_and_bad_tags() {
        let cw = vec![
            vec2(0.0, 0.0),
            vec2(0.0, 1.0),
            vec2(1.0, 1.0),
            vec2(1.0, 0.0),
        ];
        assert!(ReferenceDomain::new(cw.clone(), vec!["a".into(); 4], vec![], 1.0).is_err());
        let mut ccw = cw;
        ccw.reverse();
        assert!(ReferenceDomain::new(ccw.clone(), vec!["a".into(); 3], vec![], 1.0).is_err());
        assert!(ReferenceDomain::new(ccw, vec!["a".into(); 4], vec![], 0.0).is_err());
    }

    #[test]
    fn holes_are_excluded_and_validated() {
        let hole = HoleLoop {
            vertices: polygon::regular_polygon(vec2(5.0, 5.0), 1.0, 16, 0.0),
            tag: "bore".into(),
        };
        let outer = vec![
            vec2(0.0, 0.0),
            vec2(10.0, 0.0),
            vec2(10.0, 10.0),
            vec2(0.0, 10.0),
        ];
        let d = ReferenceDomain::new(outer.clone(), vec!["e".into(); 4], vec![hole], 1.0).unwrap();
        assert!(!d.contains(&vec2(5.0, 5.0)));
        assert!(polygon::signed_area(&d.holes()[0].vertices) < 0.0);
        let outside = HoleLoop {
            vertices: polygon::regular_polygon(vec2(9.5, 5.0), 1.0, 16, 0.0),
            tag: "bore".into(),
        };
        assert!(ReferenceDomain::new(outer, vec!["e".into(); 4], vec![outside], 1.0).is_err());
    }
}
