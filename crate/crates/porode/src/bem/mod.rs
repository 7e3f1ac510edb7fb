//! Exterior elasticity problems for single pores in an infinite plate,
//! solved with a collocation boundary-element method.

pub mod kernel;
pub mod solver;
pub mod traction;

pub use kernel::{ElementRule, Kelvin};
pub use solver::{
    equilibrate, resultants, solve_exterior, Equilibration, EquilibrationRecord, ExteriorOperator,
    ExteriorProblem, ExteriorSolution, PointFields,
};
pub use traction::{
    exterior_traction_for_multiplier, exterior_traction_for_z, MIN_DIFFERENCING_SEGMENTS,
};
