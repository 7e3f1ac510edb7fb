//! Built-in geometries: the cantilever beam benchmark and the bracket case
//! study, with their functionals and pore layouts.

use std::f64::consts::PI;

use crate::error::Result;
use crate::fem::{Functional, FunctionalTerm};
use crate::geometry::{polygon, HoleLoop, Pore, ReferenceDomain};
use crate::material::MaterialModel;
use crate::model::{EdgeLoad, PointLoad, PorousModel, ReferenceModel, Support};
use crate::tensor::{vec2, Vec2};

/// Young's modulus of the benchmark material.
pub const YOUNGS_MODULUS: f64 = 6.89e10;
/// Poisson ratio of the benchmark material.
pub const POISSONS_RATIO: f64 = 0.35;

/// Benchmark material.
pub fn benchmark_material() -> MaterialModel {
    MaterialModel {
        youngs_modulus: YOUNGS_MODULUS,
        poissons_ratio: POISSONS_RATIO,
    }
}

/// Number of polygon vertices used for a circular pore of radius `r`:
/// edges of at most 0.25, never fewer than 64 vertices, a multiple of 8.
pub fn circle_vertices(r: f64) -> usize {
    let n = (2.0 * PI * r / 0.25).ceil() as usize;
    n.max(64).div_ceil(8) * 8
}

/// Circular pore discretized with [`circle_vertices`].
pub fn circular_pore(id: u32, center: Vec2, r: f64) -> Result<Pore> {
    Pore::circle(id, center, r, circle_vertices(r))
}

/// Beam length.
pub const BEAM_LENGTH: f64 = 200.0;
/// Beam height.
pub const BEAM_HEIGHT: f64 = 100.0;
/// Tip load magnitude.
pub const BEAM_LOAD: f64 = 1000.0;

/// Cantilever beam `[0, 200] × [0, 100]`, clamped on the left edge, with a
/// downward 1000 force at the top-right corner; unit thickness.
pub fn beam_reference() -> Result<ReferenceModel> {
    Ok(ReferenceModel {
        domain: ReferenceDomain::rectangle(
            0.0,
            0.0,
            BEAM_LENGTH,
            BEAM_HEIGHT,
            ["bottom", "right", "top", "left"],
            1.0,
        )?,
        supports: vec![Support::clamped("left")],
        edge_loads: Vec::new(),
        point_loads: vec![PointLoad {
            point: vec2(BEAM_LENGTH, BEAM_HEIGHT),
            force: vec2(0.0, -BEAM_LOAD),
        }],
    })
}

/// Downward displacement of the bottom-right corner (positive under the
/// tip load).
pub fn beam_functional() -> Functional {
    Functional {
        terms: vec![FunctionalTerm {
            point: vec2(BEAM_LENGTH, 0.0),
            direction: vec2(0.0, -1.0),
            weight: 1.0,
        }],
    }
}

/// Beam with the given pores.
pub fn beam_model(pores: Vec<Pore>) -> Result<PorousModel> {
    PorousModel::new(beam_reference()?, pores)
}

/// Two circular pores of radius `r` on the beam's neutral axis, centred
/// about the beam centre with surface distance `distance`.
pub fn two_pore_beam(distance: f64, r: f64) -> Result<PorousModel> {
    let half = r + 0.5 * distance;
    let c = vec2(0.5 * BEAM_LENGTH, 0.5 * BEAM_HEIGHT);
    beam_model(vec![
        circular_pore(1, c - vec2(half, 0.0), r)?,
        circular_pore(2, c + vec2(half, 0.0), r)?,
    ])
}

/// Two elliptical pores with horizontal semi-axis `a` and vertical
/// semi-axis `b`, horizontal surface distance `distance`.
pub fn two_ellipse_beam(distance: f64, a: f64, b: f64) -> Result<PorousModel> {
    let half = a + 0.5 * distance;
    let c = vec2(0.5 * BEAM_LENGTH, 0.5 * BEAM_HEIGHT);
    let n = circle_vertices(a.max(b));
    beam_model(vec![
        Pore::ellipse(1, c - vec2(half, 0.0), a, b, n)?,
        Pore::ellipse(2, c + vec2(half, 0.0), a, b, n)?,
    ])
}

/// Single circular pore of radius `r` at the beam centre.
pub fn single_pore_beam(r: f64) -> Result<PorousModel> {
    beam_model(vec![circular_pore(
        1,
        vec2(0.5 * BEAM_LENGTH, 0.5 * BEAM_HEIGHT),
        r,
    )?])
}

/// Four-pore cluster: two radius-5 pores 1.0 apart horizontally (ids 1, 2)
/// and two radius-2 pores above and below the gap (ids 3, 4), 0.78 from
/// each large pore and 7.0 apart.
pub fn four_pore_beam() -> Result<PorousModel> {
    let c = vec2(0.5 * BEAM_LENGTH, 0.5 * BEAM_HEIGHT);
    beam_model(vec![
        circular_pore(1, c - vec2(5.5, 0.0), 5.0)?,
        circular_pore(2, c + vec2(5.5, 0.0), 5.0)?,
        circular_pore(3, c - vec2(0.0, 5.5), 2.0)?,
        circular_pore(4, c + vec2(0.0, 5.5), 2.0)?,
    ])
}

/// Bracket body extent in x.
pub const BRACKET_LENGTH: f64 = 100.0;
/// Bracket half height.
pub const BRACKET_HALF_HEIGHT: f64 = 40.0;
/// Gap half height between the arms.
pub const BRACKET_GAP_HALF: f64 = 10.0;
/// Depth of the gap from the left edge.
pub const BRACKET_GAP_DEPTH: f64 = 50.0;
/// Fixture-hole centre.
pub const BRACKET_HOLE_CENTER: [f64; 2] = [75.0, 0.0];
/// Fixture-hole radius.
pub const BRACKET_HOLE_RADIUS: f64 = 10.0;
/// Total force on each arm.
pub const BRACKET_LOAD: f64 = 1000.0;
/// Length of the loaded patch at each arm tip.
pub const BRACKET_LOAD_PATCH: f64 = 10.0;

/// Bracket: a `100 × 80` block with a `50 × 20` gap cut from the left
/// side, leaving two arms; clamped on a radius-10 fixture hole at (75, 0);
/// the arm tips are pressed towards each other by uniform tractions on
/// 10-long patches of the top and bottom faces (1000 per arm in total).
pub fn bracket_reference() -> Result<ReferenceModel> {
    let (l, h, g, d, p) = (
        BRACKET_LENGTH,
        BRACKET_HALF_HEIGHT,
        BRACKET_GAP_HALF,
        BRACKET_GAP_DEPTH,
        BRACKET_LOAD_PATCH,
    );
    let outer = vec![
        vec2(0.0, -h),
        vec2(p, -h),
        vec2(l, -h),
        vec2(l, h),
        vec2(p, h),
        vec2(0.0, h),
        vec2(0.0, g),
        vec2(2.0, g),
        vec2(d, g),
        vec2(d, -g),
        vec2(2.0, -g),
        vec2(0.0, -g),
    ];
    let tags = [
        "bottom_load",
        "bottom",
        "right",
        "top",
        "top_load",
        "left_top",
        "gap_top",
        "gap_top",
        "gap_end",
        "gap_bottom",
        "gap_bottom",
        "left_bottom",
    ];
    let c = vec2(BRACKET_HOLE_CENTER[0], BRACKET_HOLE_CENTER[1]);
    let hole = HoleLoop {
        vertices: polygon::regular_polygon(c, BRACKET_HOLE_RADIUS, 128, 0.0),
        tag: "fixture".to_string(),
    };
    let traction = BRACKET_LOAD / p;
    Ok(ReferenceModel {
        domain: ReferenceDomain::new(
            outer,
            tags.iter().map(|s| s.to_string()).collect(),
            vec![hole],
            1.0,
        )?,
        supports: vec![Support::clamped("fixture")],
        edge_loads: vec![
            EdgeLoad {
                tag: "top_load".to_string(),
                traction: vec2(0.0, -traction),
            },
            EdgeLoad {
                tag: "bottom_load".to_string(),
                traction: vec2(0.0, traction),
            },
        ],
        point_loads: Vec::new(),
    })
}

/// Gap narrowing `u_y(lower arm, (2, −10)) − u_y(upper arm, (2, 10))`,
/// measured on the inner arm faces near the tips.
pub fn bracket_functional() -> Functional {
    Functional {
        terms: vec![
            FunctionalTerm {
                point: vec2(2.0, -BRACKET_GAP_HALF),
                direction: vec2(0.0, 1.0),
                weight: 1.0,
            },
            FunctionalTerm {
                point: vec2(2.0, BRACKET_GAP_HALF),
                direction: vec2(0.0, -1.0),
                weight: 1.0,
            },
        ],
    }
}

/// Bracket with the given pores.
pub fn bracket_model(pores: Vec<Pore>) -> Result<PorousModel> {
    PorousModel::new(bracket_reference()?, pores)
}

/// Two circular pores of diameter 3 placed symmetrically about the
/// bracket's mid-plane on a circle of radius 17.5 around the fixture-hole
/// centre, at `±angle_deg/2` from the direction pointing at the gap.
pub fn bracket_angle_pores(angle_deg: f64) -> Result<Vec<Pore>> {
    let c = vec2(BRACKET_HOLE_CENTER[0], BRACKET_HOLE_CENTER[1]);
    let ring = 17.5;
    let half = 0.5 * angle_deg.to_radians();
    let at = |s: f64| c + vec2(-(half.cos()), s * half.sin()) * ring;
    Ok(vec![
        circular_pore(1, at(1.0), 1.5)?,
        circular_pore(2, at(-1.0), 1.5)?,
    ])
}

/// Star-shaped pore: radius `r0 (1 + a cos(k θ + φ))` sampled at `n`
/// points, rotated by `phase`.
pub fn star_pore(
    id: u32,
    center: Vec2,
    r0: f64,
    amplitude: f64,
    lobes: u32,
    phase: f64,
) -> Result<Pore> {
    let n = 96;
    let pts = (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            let r = r0 * (1.0 + amplitude * (lobes as f64 * t + phase).cos());
            center + vec2(t.cos(), t.sin()) * r
        })
        .collect();
    Pore::new(id, pts)
}

/// Six irregular pores in three nearest-neighbour pairs in the region
/// between the gap end and the fixture hole. Pair mean equivalent
/// diameters are about 1.00, 1.28 and 1.10 and pair surface distances about
/// 2.24, 2.50 and 1.81.
pub fn bracket_six_pores() -> Result<Vec<Pore>> {
    // (id, centre, base radius, lobe amplitude, lobes, phase)
    let spec: [(u32, [f64; 2], f64, f64, u32, f64); 6] = [
        (1, [56.0, 12.0], 0.50, 0.18, 3, 0.3),
        (2, [56.0, 8.69], 0.50, 0.15, 4, 1.1),
        (3, [57.0, 1.65], 0.64, 0.20, 3, 0.7),
        (4, [57.0, -2.15], 0.64, 0.12, 5, 2.0),
        (5, [56.0, -9.0], 0.55, 0.16, 4, 0.4),
        (6, [56.0, -12.1], 0.55, 0.20, 3, 1.9),
    ];
    spec.iter()
        .map(|&(id, c, r0, a, k, ph)| star_pore(id, vec2(c[0], c[1]), r0, a, k, ph))
        .collect()
}
