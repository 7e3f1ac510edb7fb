//! Geometric model: reference domain, pores, design velocities, pore
//! boundary discretization and the pairing policy for interaction terms.

pub mod boundary_mesh;
pub mod domain;
pub mod pairing;
pub mod polygon;
pub mod pore;

pub use boundary_mesh::{
    build_pore_boundary_mesh, build_pore_boundary_mesh_with_order, PoreBoundaryMesh,
    QuadraturePoint, Segment,
};
pub use domain::{HoleLoop, ReferenceDomain};
pub use pairing::{select_interaction_pairs, PairPolicy, PorePair};
pub use pore::{
    design_velocity, parse_pore_set, pore_set_to_json, pore_surface_distance, read_pore_set, Pore,
    PoreRecord,
};
