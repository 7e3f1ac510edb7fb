//! Browser demo of the porode estimator.
//!
//! Three operations, each returning a JSON document:
//!
//! * [`kirsch_hoop`]: boundary-element hoop stress around a circular hole
//!   under remote biaxial stress, against the closed form;
//! * [`pair_estimate`]: topological, first- and second-order estimates for
//!   two pores in the cantilever beam at a given surface distance;
//! * [`topology_map`]: topological derivative of the beam's tip deflection
//!   sampled on a grid over the pore-free beam.
//!
//! The computations live in [`demo`] as plain Rust functions so that they
//! can be tested natively; the exported wrappers only convert errors.

use wasm_bindgen::prelude::*;

pub mod demo {
    //! Target-independent implementations of the exported operations.

    use serde::Serialize;

    use porode::estimator::{estimate, solve_reference, EstimateOptions};
    use porode::sensitivity::{topological_derivative, TopoFormula};
    use porode::tensor::vec2;
    use porode::verify::kirsch_hoop_check;
    use porode::verify::models::{
        beam_functional, beam_model, benchmark_material, two_pore_beam, BEAM_HEIGHT, BEAM_LENGTH,
    };

    fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
        serde_json::to_string(value).map_err(|e| e.to_string())
    }

    fn check(name: &str, value: f64, lo: f64, hi: f64) -> Result<(), String> {
        if value.is_finite() && value >= lo && value <= hi {
            Ok(())
        } else {
            Err(format!("{name} must lie in [{lo}, {hi}], got {value}"))
        }
    }

    /// Hoop stress on a unit circular hole with `elements` boundary
    /// elements under remote principal stresses `s1` (x) and `s2` (y).
    pub fn kirsch_hoop(s1: f64, s2: f64, elements: u32) -> Result<String, String> {
        check("s1", s1, -1e6, 1e6)?;
        check("s2", s2, -1e6, 1e6)?;
        check("elements", f64::from(elements), 16.0, 1024.0)?;
        let result = kirsch_hoop_check(&benchmark_material(), 1.0, elements as usize, s1, s2)
            .map_err(|e| e.to_string())?;
        to_json(&result)
    }

    #[derive(Serialize)]
    struct PairResult {
        distance: f64,
        radius: f64,
        psi0: f64,
        tse: f64,
        foe: f64,
        soe: f64,
        d_topo: f64,
        d1_shape: f64,
        d2_self: f64,
        d2_int: f64,
        interaction_share: f64,
    }

    /// Estimates for two circular pores of radius `radius` on the beam's
    /// neutral axis with surface distance `distance`.
    pub fn pair_estimate(distance: f64, radius: f64) -> Result<String, String> {
        check("distance", distance, 0.5, 60.0)?;
        check("radius", radius, 1.0, 12.0)?;
        let model = two_pore_beam(distance, radius).map_err(|e| e.to_string())?;
        let report = estimate(&model, &benchmark_material(), &beam_functional(), &EstimateOptions::default())
            .map_err(|e| e.to_string())?;
        let t = report.breakdown.totals;
        to_json(&PairResult {
            distance,
            radius,
            psi0: report.psi0,
            tse: report.tse,
            foe: report.foe,
            soe: report.soe,
            d_topo: t.d_topo,
            d1_shape: t.d1_shape,
            d2_self: t.d2_self,
            d2_int: t.d2_int,
            interaction_share: report.breakdown.shares.interaction,
        })
    }

    #[derive(Serialize)]
    struct TopologyMap {
        nx: usize,
        ny: usize,
        width: f64,
        height: f64,
        /// Row-major values, row 0 at the bottom edge.
        values: Vec<f64>,
    }

    /// Topological derivative of the tip deflection at the centres of an
    /// `nx × ny` grid of cells covering the beam.
    pub fn topology_map(nx: u32, ny: u32) -> Result<String, String> {
        check("nx", f64::from(nx), 2.0, 400.0)?;
        check("ny", f64::from(ny), 2.0, 200.0)?;
        let model = beam_model(Vec::new()).map_err(|e| e.to_string())?;
        let material = benchmark_material();
        let sizing = EstimateOptions::default().sizing;
        let reference =
            solve_reference(&model, &material, &beam_functional(), &sizing).map_err(|e| e.to_string())?;
        let (nx, ny) = (nx as usize, ny as usize);
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let p = vec2(
                    (i as f64 + 0.5) * BEAM_LENGTH / nx as f64,
                    (j as f64 + 0.5) * BEAM_HEIGHT / ny as f64,
                );
                let sz = reference.z.stress(&p).map_err(|e| e.to_string())?;
                let sl = reference.lambda.stress(&p).map_err(|e| e.to_string())?;
                values.push(topological_derivative(TopoFormula::PlaneStress, &sz, &sl, &material));
            }
        }
        to_json(&TopologyMap {
            nx,
            ny,
            width: BEAM_LENGTH,
            height: BEAM_HEIGHT,
            values,
        })
    }
}

/// Boundary-element hoop stress around a unit hole against the closed form
/// (JSON: `samples[{theta, computed, exact}]`, `max_relative_error`).
#[wasm_bindgen]
pub fn kirsch_hoop(s1: f64, s2: f64, elements: u32) -> Result<String, JsError> {
    demo::kirsch_hoop(s1, s2, elements).map_err(|e| JsError::new(&e))
}

/// Estimates for two pores in the beam at surface distance `distance`.
#[wasm_bindgen]
pub fn pair_estimate(distance: f64, radius: f64) -> Result<String, JsError> {
    demo::pair_estimate(distance, radius).map_err(|e| JsError::new(&e))
}

/// Topological-derivative map of the pore-free beam on an `nx × ny` grid.
#[wasm_bindgen]
pub fn topology_map(nx: u32, ny: u32) -> Result<String, JsError> {
    demo::topology_map(nx, ny).map_err(|e| JsError::new(&e))
}
