//! Sensitivity contributions evaluated on pore boundaries: the topological
//! term at the pore centroid, the first-order shape term and the
//! second-order self and pore-pair interaction terms.

pub mod bundle;
pub mod shape;
pub mod topological;

pub use bundle::{
    solve_multipliers, BoundaryFieldBundle, EquilibrationSummary, FieldSample, MultiplierSolutions,
};
pub use shape::{
    first_order_derivative, first_order_term, integrand_csv, second_order_tensor, second_order_term,
};
pub use topological::{
    seed_measure, spherical_derivative, topo_derivative_at_pore, topo_sensitivity,
    topological_derivative, TopoFormula, TopoParams,
};
