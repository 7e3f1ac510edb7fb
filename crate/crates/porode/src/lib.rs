//! Second-order porosity defeaturing estimator for two-dimensional
//! plane-stress linear elasticity.
//!
//! Given a pore-free reference model and a set of pores, the crate predicts
//! how a pointwise displacement functional changes when the pores are
//! introduced, without meshing or solving the porous domain. The prediction
//! combines a topological term, first-order shape sensitivities and
//! second-order (self and pore-pair interaction) shape sensitivities, all
//! evaluated from reference finite-element fields and exterior
//! boundary-element corrections on each pore boundary.
//!
//! Module map:
//! - [`geometry`]: reference domain, pores, design velocities, pore pairing;
//! - [`mesh`]: triangle meshes, mesh generation and the `mesh2d v1` format;
//! - [`fem`]: plane-stress finite-element solves and field evaluation;
//! - [`bem`]: exterior Neumann boundary-element solves on pore boundaries;
//! - [`sensitivity`]: topological, first- and second-order terms;
//! - [`estimator`]: assembly of the TSE / FOE / SOE estimates and reports;
//! - [`verify`]: direct porous FEA, finite-difference and analytic oracles,
//!   and the built-in benchmark sweeps.

pub mod bem;
pub mod error;
pub mod estimator;
pub mod fem;
pub mod geometry;
pub mod material;
pub mod mesh;
pub mod model;
mod clock;
mod par;
pub mod sensitivity;
pub mod tensor;
pub mod verify;

pub use error::{PorodeError, Result};
pub use material::MaterialModel;
pub use model::{EdgeLoad, PointLoad, PorousModel, ReferenceModel, Support};
pub use tensor::{Mat2, Vec2};
