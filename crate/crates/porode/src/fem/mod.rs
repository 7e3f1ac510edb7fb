//! Linear plane-stress finite elements: assembly, constrained direct solves
//! for primary and adjoint problems, and field evaluation with gradient
//! recovery.

pub mod assemble;
pub mod functional;
pub mod porous;
pub mod solution;
pub mod solver;

pub use functional::{Functional, FunctionalTerm};
pub use porous::{solve_porous, PorousSolution};
pub use solution::{evaluate_functional, FieldSolution};
pub use solver::{solve_adjoint, solve_primary, unconstrained_rigid_modes, StiffnessSystem};
