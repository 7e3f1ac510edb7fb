//! Report types, effectivity indices and serialization.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{PorodeError, Result};
use crate::mesh::MeshStats;
use crate::sensitivity::EquilibrationSummary;

/// Per-pore contributions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoreTerms {
    /// Pore id.
    pub id: u32,
    /// Equivalent radius `sqrt(A/π)`.
    pub equivalent_radius: f64,
    /// Topological term with the seed-hole measure (part of FOE/SOE).
    pub d_topo: f64,
    /// Topological derivative times the full pore area (the TSE term).
    pub d_topo_full: f64,
    /// First-order shape term.
    pub d1_shape: f64,
    /// Second-order self term.
    pub d2_self: f64,
    /// Relative resultant imbalance removed from each exterior traction.
    pub equilibration: EquilibrationSummary,
}

/// Interaction term of one ordered pair (or of an unordered pair, as the
/// mean of both orders, when so configured).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairTerm {
    /// Pore whose velocity drives the multipliers.
    pub source: u32,
    /// Pore over whose boundary the term is integrated.
    pub target: u32,
    /// Minimum distance between the two pore boundaries.
    pub surface_distance: f64,
    /// Interaction term.
    pub d2_int: f64,
}

/// Summed contributions.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Totals {
    /// Σ topological terms (seed measure).
    pub d_topo: f64,
    /// Σ topological terms with the full pore areas.
    pub d_topo_full: f64,
    /// Σ first-order shape terms.
    pub d1_shape: f64,
    /// Σ second-order self terms.
    pub d2_self: f64,
    /// Σ interaction terms.
    pub d2_int: f64,
    /// `d_topo + d1_shape + d2_self + d2_int`.
    pub d_pore: f64,
}

/// Shares of each contribution in the sum of their magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Shares {
    /// Topological share.
    pub topological: f64,
    /// First-order share.
    pub first_order: f64,
    /// Second-order share (self + interaction).
    pub second_order: f64,
    /// Interaction share.
    pub interaction: f64,
}

/// Per-pore and per-pair contributions with totals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityBreakdown {
    /// One entry per pore, in model order.
    pub pores: Vec<PoreTerms>,
    /// One entry per selected (ordered) pair.
    pub pairs: Vec<PairTerm>,
    /// Totals.
    pub totals: Totals,
    /// Contribution shares.
    pub shares: Shares,
}

impl SensitivityBreakdown {
    /// Builds the breakdown and its totals.
    pub fn new(pores: Vec<PoreTerms>, pairs: Vec<PairTerm>) -> Self {
        let d_topo: f64 = pores.iter().map(|p| p.d_topo).sum();
        let d_topo_full: f64 = pores.iter().map(|p| p.d_topo_full).sum();
        let d1_shape: f64 = pores.iter().map(|p| p.d1_shape).sum();
        let d2_self: f64 = pores.iter().map(|p| p.d2_self).sum();
        let d2_int: f64 = pairs.iter().map(|p| p.d2_int).sum();
        let totals = Totals {
            d_topo,
            d_topo_full,
            d1_shape,
            d2_self,
            d2_int,
            d_pore: d_topo + d1_shape + d2_self + d2_int,
        };
        let mag = d_topo.abs() + d1_shape.abs() + d2_self.abs() + d2_int.abs();
        let share = |v: f64| if mag > 0.0 { v / mag } else { 0.0 };
        let shares = Shares {
            topological: share(d_topo.abs()),
            first_order: share(d1_shape.abs()),
            second_order: share(d2_self.abs() + d2_int.abs()),
            interaction: share(d2_int.abs()),
        };
        SensitivityBreakdown {
            pores,
            pairs,
            totals,
            shares,
        }
    }

    /// Interaction magnitude of the unordered pair `{a, b}` (sum of both
    /// orders present in the breakdown).
    pub fn pair_interaction(&self, a: u32, b: u32) -> f64 {
        self.pairs
            .iter()
            .filter(|p| (p.source == a && p.target == b) || (p.source == b && p.target == a))
            .map(|p| p.d2_int)
            .sum()
    }
}

/// Effectivity indices `(Ψ − Ψ₀)/D`; `None` when undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Effectivity {
    /// Topological-sensitivity estimator.
    pub tse: Option<f64>,
    /// First-order estimator.
    pub foe: Option<f64>,
    /// Second-order estimator.
    pub soe: Option<f64>,
}

/// Mesh statistics of the reference mesh and, with ground truth, of the
/// porous mesh.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshStatsReport {
    /// Reference (pore-free) mesh of the estimator.
    pub reference: MeshStats,
    /// Porous mesh of the direct analysis.
    pub porous: Option<MeshStats>,
    /// Reference elements / porous elements.
    pub reference_to_porous_ratio: Option<f64>,
}

/// Wall-clock time per stage (s).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Timings {
    /// Reference meshing.
    pub meshing: f64,
    /// Reference primary and adjoint solves.
    pub reference_solve: f64,
    /// Exterior correction solves (summed over pores).
    pub exterior_solves: f64,
    /// Multiplier solves (summed over pores).
    pub multiplier_solves: f64,
    /// Sensitivity evaluation and assembly.
    pub sensitivity: f64,
    /// Direct porous analysis, when run.
    pub ground_truth: Option<f64>,
    /// Total estimator time.
    pub total: f64,
}

/// Result of an estimator run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    /// Reference functional value `Ψ₀`.
    pub psi0: f64,
    /// `Ψ₀ + Σ T·|pore|` (topological-sensitivity estimate).
    pub tse: f64,
    /// `Ψ₀ + D_topo + D¹` (first-order estimate).
    pub foe: f64,
    /// `FOE + D²_self + D²_int` (second-order estimate).
    pub soe: f64,
    /// Contributions.
    pub breakdown: SensitivityBreakdown,
    /// Direct-analysis functional value on the porous domain.
    pub ground_truth: Option<f64>,
    /// Direct-analysis functional value on the matching pore-free mesh.
    pub ground_truth_psi0: Option<f64>,
    /// Effectivity indices against the ground truth.
    pub effectivity: Option<Effectivity>,
    /// Mesh statistics.
    pub mesh_stats: MeshStatsReport,
    /// Stage timings.
    pub timings: Timings,
    /// Model and evaluation warnings.
    pub warnings: Vec<String>,
}

/// Effectivity index `(Ψ − Ψ₀)/D`. Returns `+∞` when `D = 0` and fails when
/// `Ψ = Ψ₀`.
pub fn effectivity_index(estimate: f64, psi: f64, psi0: f64) -> Result<f64> {
    if psi == psi0 {
        return Err(PorodeError::validation(
            "effectivity index is undefined when psi equals psi0",
        ));
    }
    if estimate == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((psi - psi0) / estimate)
}

/// Header of the flat CSV row variant of a report.
pub const CSV_HEADER: &str = "psi0,tse,foe,soe,d_topo,d_topo_full,d1_shape,d2_self,d2_int,ground_truth,ground_truth_psi0,i_tse,i_foe,i_soe,int_share,reference_elements,porous_elements";

/// Flat CSV row of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow(pub String);

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

impl EstimateReport {
    /// Checks the report invariants: finite estimates and totals equal to
    /// the recomputed sums.
    pub fn check(&self) -> Result<()> {
        let t = &self.breakdown.totals;
        let values = [self.psi0, self.tse, self.foe, self.soe, t.d_pore];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(PorodeError::solver("estimator produced a non-finite value"));
        }
        let sum = t.d_topo + t.d1_shape + t.d2_self + t.d2_int;
        if (sum - t.d_pore).abs() > 1e-12 * sum.abs().max(f64::MIN_POSITIVE) {
            return Err(PorodeError::solver("breakdown totals are inconsistent"));
        }
        Ok(())
    }

    /// Attaches a direct-analysis result and computes effectivity indices.
    /// `psi0_direct` is the functional on the pore-free mesh matching the
    /// porous one, so that `Ψ − Ψ₀` is free of the reference-mesh error.
    pub fn with_ground_truth(
        mut self,
        psi: f64,
        psi0_direct: f64,
        porous: Option<MeshStats>,
    ) -> Self {
        self.ground_truth = Some(psi);
        self.ground_truth_psi0 = Some(psi0_direct);
        let idx = |estimate: f64| effectivity_index(estimate - self.psi0, psi, psi0_direct).ok();
        if psi == psi0_direct {
            self.warnings.push(
                "effectivity undefined: the porous and reference functionals coincide".to_string(),
            );
            self.effectivity = None;
        } else {
            self.effectivity = Some(Effectivity {
                tse: idx(self.tse),
                foe: idx(self.foe),
                soe: idx(self.soe),
            });
        }
        if let Some(p) = porous {
            self.mesh_stats.reference_to_porous_ratio =
                Some(self.mesh_stats.reference.elements as f64 / p.elements as f64);
            self.mesh_stats.porous = Some(p);
        }
        self
    }

    /// Pretty JSON. With `include_timings == false` the `timings` field is
    /// `null`, making the output a pure function of the input.
    pub fn to_json(&self, include_timings: bool) -> Result<String> {
        let mut v = serde_json::to_value(self)
            .map_err(|e| PorodeError::solver(format!("report serialization: {e}")))?;
        if !include_timings {
            v["timings"] = serde_json::Value::Null;
        }
        serde_json::to_string_pretty(&v)
            .map_err(|e| PorodeError::solver(format!("report serialization: {e}")))
    }

    /// Flat CSV row matching [`CSV_HEADER`].
    pub fn csv_row(&self) -> CsvRow {
        let t = &self.breakdown.totals;
        let e = self.effectivity;
        let mut s = String::new();
        let _ = write!(
            s,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{},{},{},{},{:e},{},{}",
            self.psi0,
            self.tse,
            self.foe,
            self.soe,
            t.d_topo,
            t.d_topo_full,
            t.d1_shape,
            t.d2_self,
            t.d2_int,
            opt(self.ground_truth),
            opt(self.ground_truth_psi0),
            opt(e.and_then(|e| e.tse)),
            opt(e.and_then(|e| e.foe)),
            opt(e.and_then(|e| e.soe)),
            self.breakdown.shares.interaction,
            self.mesh_stats.reference.elements,
            self.mesh_stats
                .porous
                .map(|p| p.elements.to_string())
                .unwrap_or_default()
        );
        CsvRow(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn effectivity_examples() {
        assert_eq!(effectivity_index(2.0, 3.0, 1.0).unwrap(), 1.0);
        assert!((effectivity_index(4.81e-9, 6.21e-9, 0.0).unwrap() - 1.29).abs() < 0.005);
        assert!((effectivity_index(1.22e-7, 2.19e-7, 0.0).unwrap() - 1.79).abs() < 0.01);
        assert_eq!(effectivity_index(0.0, 1.0, 0.0).unwrap(), f64::INFINITY);
        assert!(effectivity_index(1.0, 2.0, 2.0).is_err());
    }
}
