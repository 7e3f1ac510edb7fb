//! Verification machinery: direct porous analysis (ground truth), the
//! finite-difference shape-sensitivity oracle, analytic hole solutions and
//! the built-in benchmark sweeps.

pub mod benchmark;
pub mod fd;
pub mod ground_truth;
pub mod kirsch;
pub mod models;

pub use benchmark::{
    benchmark_names, find_benchmark, registry, run_benchmark, BenchmarkResult, BenchmarkSpec,
    SWEEP_CSV_HEADER,
};
pub use fd::{
    fd_mixed_shape_sensitivity, fd_second_shape_sensitivity, fd_shape_sensitivity,
    morphed_functional, morphing_band, porous_boundary_sensitivity,
};
pub use ground_truth::{
    analyze_porous, attach_ground_truth, ground_truth, GroundTruth, PorousAnalysis,
};
pub use kirsch::{
    boundary_hoop_stress, hole_compliance_change, hole_stress, kirsch_hoop_check, kirsch_polar,
    HoopCheck, HoopSample,
};
