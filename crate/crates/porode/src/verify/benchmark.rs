//! Built-in benchmark sweeps: each row builds a porous model, runs the
//! estimator and the direct analysis, and records the effectivity indices;
//! a benchmark then checks its accuracy assertions on the finished table.

use std::fmt::Write as _;

use serde::Serialize;

use super::ground_truth::{attach_ground_truth, ground_truth};
use super::models::{
    beam_functional, benchmark_material, bracket_angle_pores, bracket_functional, bracket_model,
    bracket_six_pores, four_pore_beam, two_ellipse_beam, two_pore_beam,
};
use crate::error::{PorodeError, Result};
use crate::estimator::{estimate, EstimateOptions, EstimateReport};
use crate::fem::Functional;
use crate::geometry::PairPolicy;
use crate::material::MaterialModel;
use crate::model::PorousModel;

/// Header of the sweep CSV files.
pub const SWEEP_CSV_HEADER: &str = "sweep,psi,psi0,tse,foe,soe,i_tse,i_foe,i_soe,int_share";

/// Quantity varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Surface distance between two pores (mm).
    Distance,
    /// Pore radius (mm).
    Radius,
    /// Vertical semi-axis of elliptical pores (mm).
    MinorAxis,
    /// Angular separation of two pores around the bracket fixture (deg).
    Angle,
    /// Single configuration.
    None,
}

/// Model family of a benchmark; the sweep value is its free parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeometryBuilder {
    /// Two circular pores of fixed radius on the beam's neutral axis; the
    /// sweep value is their surface distance.
    BeamTwoPoreDistance {
        /// Pore radius.
        radius: f64,
    },
    /// Two circular pores at fixed surface distance; the sweep value is
    /// their radius.
    BeamTwoPoreSize {
        /// Surface distance.
        distance: f64,
    },
    /// Two elliptical pores at fixed distance and horizontal semi-axis; the
    /// sweep value is the vertical semi-axis.
    BeamTwoEllipse {
        /// Surface distance.
        distance: f64,
        /// Horizontal semi-axis.
        semi_axis: f64,
    },
    /// Two large and two small circular pores in a cluster.
    BeamFourPore,
    /// Two diameter-3 pores around the bracket fixture hole; the sweep value
    /// is their angular separation.
    BracketAngle,
    /// Six irregular pores in three pairs in the bracket.
    BracketSixPore,
}

impl GeometryBuilder {
    /// Model for one sweep value.
    pub fn build(&self, value: f64) -> Result<PorousModel> {
        match *self {
            GeometryBuilder::BeamTwoPoreDistance { radius } => two_pore_beam(value, radius),
            GeometryBuilder::BeamTwoPoreSize { distance } => two_pore_beam(distance, value),
            GeometryBuilder::BeamTwoEllipse {
                distance,
                semi_axis,
            } => two_ellipse_beam(distance, semi_axis, value),
            GeometryBuilder::BeamFourPore => four_pore_beam(),
            GeometryBuilder::BracketAngle => bracket_model(bracket_angle_pores(value)?),
            GeometryBuilder::BracketSixPore => bracket_model(bracket_six_pores()?),
        }
    }

    /// Functional of the model family.
    pub fn functional(&self) -> Functional {
        match self {
            GeometryBuilder::BracketAngle | GeometryBuilder::BracketSixPore => bracket_functional(),
            _ => beam_functional(),
        }
    }
}

/// Accuracy assertion evaluated on a finished sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expectation {
    /// At `at`, the SOE index is strictly closer to 1 (in `|ln I|`) than
    /// the FOE and TSE indices.
    SoeBestAt {
        /// Sweep value.
        at: f64,
    },
    /// The SOE index is closest to 1 at every row.
    SoeBestEverywhere,
    /// All three indices lie in `[lo, hi]` for every row with sweep value
    /// `≥ from`.
    AllWithin {
        /// First sweep value checked.
        from: f64,
        /// Lower bound.
        lo: f64,
        /// Upper bound.
        hi: f64,
    },
    /// Interaction share of the estimator magnitude below `max` for every
    /// row with sweep value `≥ from`.
    InteractionBelow {
        /// First sweep value checked.
        from: f64,
        /// Largest admissible share.
        max: f64,
    },
    /// Decomposition shares at `at`: first order within `first ± tol`,
    /// second order within `second ± tol`, interaction within
    /// `interaction ± interaction_tol`, topological below `topo_max`.
    SharesAt {
        /// Sweep value.
        at: f64,
        /// First-order share.
        first: f64,
        /// Second-order share.
        second: f64,
        /// Tolerance on the first- and second-order shares.
        tol: f64,
        /// Interaction share.
        interaction: f64,
        /// Tolerance on the interaction share.
        interaction_tol: f64,
        /// Largest topological share.
        topo_max: f64,
    },
    /// Index bands at `at`: `I_soe ∈ soe`, `I_tse ≥ tse_min`,
    /// `I_foe ≤ foe_max`.
    SizeAnchor {
        /// Sweep value.
        at: f64,
        /// SOE band.
        soe: [f64; 2],
        /// Lower bound of the TSE index.
        tse_min: f64,
        /// Upper bound of the FOE index.
        foe_max: f64,
    },
    /// Index bands of a single configuration: TSE and FOE in `first`, SOE
    /// in `soe`, and SOE closer to 1 than FOE.
    IndexBands {
        /// TSE and FOE band.
        first: [f64; 2],
        /// SOE band.
        soe: [f64; 2],
    },
    /// Four-pore interaction ranking: the pair of the two largest pores has
    /// the largest magnitude and a share within `dominant ± tol`, each
    /// large–small pair a share within `mixed`, the small–small pair a share
    /// below `small_max` (shares of the summed pair magnitudes).
    InteractionRanking {
        /// Dominant-pair share.
        dominant: f64,
        /// Tolerance on the dominant share.
        tol: f64,
        /// Band of each large–small share.
        mixed: [f64; 2],
        /// Largest small–small share.
        small_max: f64,
    },
    /// SOE index strictly closer to 1 than the FOE index, and every
    /// selected pair's interaction within `share` of that pair's
    /// second-order estimate.
    PairShares {
        /// Band of the per-pair interaction share.
        share: [f64; 2],
    },
}

/// A benchmark definition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkSpec {
    /// Registry name.
    pub name: &'static str,
    /// One-line description.
    pub description: &'static str,
    /// Model family.
    pub geometry: GeometryBuilder,
    /// Swept quantity.
    pub sweep_variable: SweepVariable,
    /// Sweep values (strictly increasing).
    pub sweep_values: Vec<f64>,
    /// Estimator options; the mesh sizes are shared with the direct
    /// analysis.
    pub options: EstimateOptions,
    /// Assertions checked after the sweep.
    pub expectations: Vec<Expectation>,
}

impl BenchmarkSpec {
    /// Checks that the sweep values are strictly increasing and non-empty.
    pub fn validate(&self) -> Result<()> {
        if self.sweep_values.is_empty() || self.sweep_values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(PorodeError::validation(format!(
                "benchmark '{}': sweep values must be non-empty and strictly increasing",
                self.name
            )));
        }
        self.options.validate()
    }
}

/// The built-in benchmarks.
pub fn registry() -> Vec<BenchmarkSpec> {
    let defaults = EstimateOptions::default();
    let all_pairs = EstimateOptions {
        pair_policy: PairPolicy::AllPairs {
            cutoff_factor: None,
        },
        ..defaults
    };
    vec![
        BenchmarkSpec {
            name: "distance",
            description: "two radius-5 pores in the cantilever beam, surface distance 1 to 45 mm",
            geometry: GeometryBuilder::BeamTwoPoreDistance { radius: 5.0 },
            sweep_variable: SweepVariable::Distance,
            sweep_values: vec![1.0, 2.0, 3.0, 5.0, 7.5, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0],
            options: defaults,
            expectations: vec![
                Expectation::SoeBestAt { at: 1.0 },
                Expectation::AllWithin {
                    from: 20.0,
                    lo: 0.8,
                    hi: 1.25,
                },
                Expectation::SharesAt {
                    at: 1.0,
                    first: 0.797,
                    second: 0.203,
                    tol: 0.08,
                    interaction: 0.102,
                    interaction_tol: 0.05,
                    topo_max: 0.001,
                },
                Expectation::InteractionBelow { from: 20.0, max: 0.01 },
            ],
        },
        BenchmarkSpec {
            name: "size",
            description: "two pores 1 mm apart in the cantilever beam, radius 1.5 to 10 mm",
            geometry: GeometryBuilder::BeamTwoPoreSize { distance: 1.0 },
            sweep_variable: SweepVariable::Radius,
            sweep_values: vec![1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0],
            options: defaults,
            expectations: vec![Expectation::SizeAnchor {
                at: 10.0,
                soe: [0.9, 1.3],
                tse_min: 1.4,
                foe_max: 0.75,
            }],
        },
        BenchmarkSpec {
            name: "ellipse",
            description: "two elliptical pores 1 mm apart, horizontal semi-axis 5, vertical semi-axis 3.5 to 6.5 mm",
            geometry: GeometryBuilder::BeamTwoEllipse {
                distance: 1.0,
                semi_axis: 5.0,
            },
            sweep_variable: SweepVariable::MinorAxis,
            sweep_values: vec![3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5],
            options: defaults,
            expectations: vec![Expectation::SoeBestEverywhere],
        },
        BenchmarkSpec {
            name: "four_pore",
            description: "two radius-5 and two radius-2 pores clustered in the cantilever beam",
            geometry: GeometryBuilder::BeamFourPore,
            sweep_variable: SweepVariable::None,
            sweep_values: vec![0.0],
            options: all_pairs,
            expectations: vec![
                Expectation::IndexBands {
                    first: [1.10, 1.50],
                    soe: [0.78, 1.08],
                },
                Expectation::InteractionRanking {
                    dominant: 0.63,
                    tol: 0.15,
                    mixed: [0.03, 0.20],
                    small_max: 0.01,
                },
            ],
        },
        BenchmarkSpec {
            name: "bracket_angle",
            description: "two diameter-3 pores around the bracket fixture hole, angular separation 15 to 120 deg",
            geometry: GeometryBuilder::BracketAngle,
            sweep_variable: SweepVariable::Angle,
            sweep_values: vec![15.0, 20.0, 30.0, 45.0, 60.0, 90.0, 120.0],
            options: defaults,
            expectations: vec![
                Expectation::SoeBestAt { at: 15.0 },
                Expectation::AllWithin {
                    from: 120.0,
                    lo: 0.8,
                    hi: 1.25,
                },
            ],
        },
        BenchmarkSpec {
            name: "bracket_six",
            description: "six irregular pores in three nearest-neighbour pairs in the bracket",
            geometry: GeometryBuilder::BracketSixPore,
            sweep_variable: SweepVariable::None,
            sweep_values: vec![0.0],
            options: defaults,
            expectations: vec![Expectation::PairShares { share: [0.01, 0.15] }],
        },
    ]
}

/// Names of the built-in benchmarks.
pub fn benchmark_names() -> Vec<&'static str> {
    registry().iter().map(|b| b.name).collect()
}

/// Looks a benchmark up by name.
pub fn find_benchmark(name: &str) -> Option<BenchmarkSpec> {
    registry().into_iter().find(|b| b.name == name)
}

/// One row of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    /// Sweep value.
    pub sweep: f64,
    /// Estimator report with ground truth attached, or the failure message.
    #[serde(skip)]
    pub outcome: std::result::Result<EstimateReport, String>,
}

impl SweepRow {
    /// The report, when the row succeeded.
    pub fn report(&self) -> Option<&EstimateReport> {
        self.outcome.as_ref().ok()
    }

    /// Effectivity indices `[tse, foe, soe]`, when all are defined.
    pub fn indices(&self) -> Option<[f64; 3]> {
        let e = self.report()?.effectivity?;
        Some([e.tse?, e.foe?, e.soe?])
    }

    /// CSV line matching [`SWEEP_CSV_HEADER`]; failed rows keep only the
    /// sweep value.
    pub fn csv_line(&self) -> String {
        match self.report() {
            Some(r) => {
                let idx = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
                let e = r.effectivity;
                format!(
                    "{},{},{:e},{:e},{:e},{:e},{},{},{},{:e}",
                    self.sweep,
                    idx(r.ground_truth),
                    r.psi0,
                    r.tse,
                    r.foe,
                    r.soe,
                    idx(e.and_then(|e| e.tse)),
                    idx(e.and_then(|e| e.foe)),
                    idx(e.and_then(|e| e.soe)),
                    r.breakdown.shares.interaction
                )
            }
            None => format!("{},,,,,,,,,", self.sweep),
        }
    }
}

/// Outcome of one assertion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssertionOutcome {
    /// Assertion name.
    pub name: String,
    /// Whether it holds.
    pub passed: bool,
    /// Measured values.
    pub detail: String,
}

/// A finished benchmark.
#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkResult {
    /// Benchmark name.
    pub name: String,
    /// Rows in sweep order.
    pub rows: Vec<SweepRow>,
    /// Assertion outcomes.
    pub assertions: Vec<AssertionOutcome>,
    /// Row failures as `(sweep value, message)`.
    pub failures: Vec<(f64, String)>,
}

impl BenchmarkResult {
    /// Whether every row succeeded and every assertion holds.
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.assertions.iter().all(|a| a.passed)
    }

    /// Sweep table as CSV.
    pub fn csv(&self) -> String {
        let mut s = String::from(SWEEP_CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.csv_line());
            s.push('\n');
        }
        s
    }

    /// One `PASS`/`FAIL` line per assertion and per failed row.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for a in &self.assertions {
            let _ = writeln!(
                s,
                "{} {}/{}: {}",
                if a.passed { "PASS" } else { "FAIL" },
                self.name,
                a.name,
                a.detail
            );
        }
        for (v, msg) in &self.failures {
            let _ = writeln!(s, "FAIL {}/row {v}: {msg}", self.name);
        }
        s
    }
}

/// Runs one row: the estimator and the direct analysis on the same model.
pub fn run_row(
    geometry: &GeometryBuilder,
    value: f64,
    material: &MaterialModel,
    options: &EstimateOptions,
) -> Result<EstimateReport> {
    let model = geometry.build(value)?;
    let functional = geometry.functional();
    let report = estimate(&model, material, &functional, options)?;
    let truth = ground_truth(&model, material, &functional, &options.sizing)?;
    Ok(attach_ground_truth(report, &truth))
}

/// Runs a benchmark: rows in parallel (each owns its meshes and solves),
/// collected in sweep order; failed rows are recorded and the sweep goes on.
pub fn run_benchmark(spec: &BenchmarkSpec) -> Result<BenchmarkResult> {
    spec.validate()?;
    let material = benchmark_material();
    let outcomes = crate::par::map(&spec.sweep_values, |&v| {
        run_row(&spec.geometry, v, &material, &spec.options)
    });
    let rows: Vec<SweepRow> = spec
        .sweep_values
        .iter()
        .zip(outcomes)
        .map(|(&sweep, outcome)| SweepRow {
            sweep,
            outcome: outcome.map_err(|e| e.to_string()),
        })
        .collect();
    let failures = rows
        .iter()
        .filter_map(|r| r.outcome.as_ref().err().map(|e| (r.sweep, e.clone())))
        .collect();
    let assertions = spec
        .expectations
        .iter()
        .map(|e| evaluate(e, &rows))
        .collect();
    Ok(BenchmarkResult {
        name: spec.name.to_string(),
        rows,
        assertions,
        failures,
    })
}

/// `|ln I|`: distance of an effectivity index from 1 on a log scale.
pub fn log_distance(index: f64) -> f64 {
    if index > 0.0 {
        index.ln().abs()
    } else {
        f64::INFINITY
    }
}

fn row_at(rows: &[SweepRow], at: f64) -> Option<&SweepRow> {
    rows.iter()
        .find(|r| (r.sweep - at).abs() <= 1e-9 * at.abs().max(1.0))
}

fn outcome(name: &str, passed: bool, detail: String) -> AssertionOutcome {
    AssertionOutcome {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn missing(name: &str, what: &str) -> AssertionOutcome {
    outcome(name, false, format!("no result for {what}"))
}

fn soe_best(i: [f64; 3]) -> bool {
    let [t, f, s] = i.map(log_distance);
    s < f && s < t
}

fn fmt_indices(i: [f64; 3]) -> String {
    format!("I_tse={:.3} I_foe={:.3} I_soe={:.3}", i[0], i[1], i[2])
}

/// Evaluates one assertion on a finished sweep.
pub fn evaluate(expectation: &Expectation, rows: &[SweepRow]) -> AssertionOutcome {
    match *expectation {
        Expectation::SoeBestAt { at } => {
            let name = format!("soe_best_at_{at}");
            match row_at(rows, at).and_then(|r| r.indices()) {
                Some(i) => outcome(&name, soe_best(i), fmt_indices(i)),
                None => missing(&name, &format!("sweep value {at}")),
            }
        }
        Expectation::SoeBestEverywhere => {
            let name = "soe_best_everywhere";
            let mut ok = true;
            let mut detail = String::new();
            for r in rows {
                match r.indices() {
                    Some(i) => {
                        let best = soe_best(i);
                        ok &= best;
                        let _ = write!(
                            detail,
                            "[{}: {}{}] ",
                            r.sweep,
                            fmt_indices(i),
                            if best { "" } else { " ✗" }
                        );
                    }
                    None => return missing(name, &format!("sweep value {}", r.sweep)),
                }
            }
            outcome(name, ok, detail.trim_end().to_string())
        }
        Expectation::AllWithin { from, lo, hi } => {
            let name = format!("all_within_{lo}_{hi}_from_{from}");
            let mut ok = true;
            let mut detail = String::new();
            for r in rows.iter().filter(|r| r.sweep >= from) {
                match r.indices() {
                    Some(i) => {
                        let inside = i.iter().all(|&v| v >= lo && v <= hi);
                        ok &= inside;
                        let _ = write!(
                            detail,
                            "[{}: {}{}] ",
                            r.sweep,
                            fmt_indices(i),
                            if inside { "" } else { " ✗" }
                        );
                    }
                    None => return missing(&name, &format!("sweep value {}", r.sweep)),
                }
            }
            outcome(&name, ok, detail.trim_end().to_string())
        }
        Expectation::InteractionBelow { from, max } => {
            let name = format!("interaction_below_{max}_from_{from}");
            let mut ok = true;
            let mut detail = String::new();
            for r in rows.iter().filter(|r| r.sweep >= from) {
                match r.report() {
                    Some(rep) => {
                        let s = rep.breakdown.shares.interaction;
                        ok &= s < max;
                        let _ = write!(detail, "[{}: {:.2}%] ", r.sweep, 100.0 * s);
                    }
                    None => return missing(&name, &format!("sweep value {}", r.sweep)),
                }
            }
            outcome(&name, ok, detail.trim_end().to_string())
        }
        Expectation::SharesAt {
            at,
            first,
            second,
            tol,
            interaction,
            interaction_tol,
            topo_max,
        } => {
            let name = format!("shares_at_{at}");
            match row_at(rows, at).and_then(|r| r.report()) {
                Some(rep) => {
                    let s = rep.breakdown.shares;
                    let ok = (s.first_order - first).abs() <= tol
                        && (s.second_order - second).abs() <= tol
                        && (s.interaction - interaction).abs() <= interaction_tol
                        && s.topological < topo_max;
                    let detail = format!(
                        "first {:.1}% second {:.1}% interaction {:.1}% topological {:.4}%",
                        100.0 * s.first_order,
                        100.0 * s.second_order,
                        100.0 * s.interaction,
                        100.0 * s.topological
                    );
                    outcome(&name, ok, detail)
                }
                None => missing(&name, &format!("sweep value {at}")),
            }
        }
        Expectation::SizeAnchor {
            at,
            soe,
            tse_min,
            foe_max,
        } => {
            let name = format!("anchor_at_{at}");
            match row_at(rows, at).and_then(|r| r.indices()) {
                Some(i) => {
                    let ok = i[2] >= soe[0] && i[2] <= soe[1] && i[0] >= tse_min && i[1] <= foe_max;
                    outcome(&name, ok, fmt_indices(i))
                }
                None => missing(&name, &format!("sweep value {at}")),
            }
        }
        Expectation::IndexBands { first, soe } => {
            let name = "index_bands";
            match rows.first().and_then(|r| r.indices()) {
                Some(i) => {
                    let inside = |v: f64, b: [f64; 2]| v >= b[0] && v <= b[1];
                    let ok = inside(i[0], first)
                        && inside(i[1], first)
                        && inside(i[2], soe)
                        && log_distance(i[2]) < log_distance(i[1]);
                    outcome(name, ok, fmt_indices(i))
                }
                None => missing(name, "the configuration"),
            }
        }
        Expectation::InteractionRanking {
            dominant,
            tol,
            mixed,
            small_max,
        } => {
            let name = "interaction_ranking";
            let Some(rep) = rows.first().and_then(|r| r.report()) else {
                return missing(name, "the configuration");
            };
            interaction_ranking(name, rep, dominant, tol, mixed, small_max)
        }
        Expectation::PairShares { share } => {
            let name = "pair_shares";
            let Some(r) = rows.first() else {
                return missing(name, "the configuration");
            };
            let (Some(rep), Some(i)) = (r.report(), r.indices()) else {
                return missing(name, "the configuration");
            };
            let shares = pair_shares(rep);
            let mut ok = log_distance(i[2]) < log_distance(i[1]);
            let mut detail = fmt_indices(i);
            for (a, b, s) in &shares {
                let inside = *s >= share[0] && *s <= share[1];
                ok &= inside;
                let _ = write!(
                    detail,
                    "; pair {a}-{b}: {:.2}%{}",
                    100.0 * s,
                    if inside { "" } else { " ✗" }
                );
            }
            outcome(name, ok && !shares.is_empty(), detail)
        }
    }
}

/// Unordered pairs of a breakdown with their summed interaction.
pub fn unordered_pairs(report: &EstimateReport) -> Vec<(u32, u32, f64)> {
    let mut keys: Vec<(u32, u32)> = report
        .breakdown
        .pairs
        .iter()
        .map(|p| (p.source.min(p.target), p.source.max(p.target)))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .map(|(a, b)| (a, b, report.breakdown.pair_interaction(a, b)))
        .collect()
}

/// Per-pair interaction share `|D²_int| / |D²_pair|`, where the pair's
/// second-order estimate is the sum of both pores' topological, first-order
/// and self terms plus the pair's interaction.
pub fn pair_shares(report: &EstimateReport) -> Vec<(u32, u32, f64)> {
    let pore_total = |id: u32| {
        report
            .breakdown
            .pores
            .iter()
            .find(|p| p.id == id)
            .map_or(0.0, |p| p.d_topo + p.d1_shape + p.d2_self)
    };
    unordered_pairs(report)
        .into_iter()
        .map(|(a, b, int)| {
            let total = pore_total(a) + pore_total(b) + int;
            (
                a,
                b,
                if total != 0.0 {
                    int.abs() / total.abs()
                } else {
                    f64::INFINITY
                },
            )
        })
        .collect()
}

fn interaction_ranking(
    name: &str,
    report: &EstimateReport,
    dominant: f64,
    tol: f64,
    mixed: [f64; 2],
    small_max: f64,
) -> AssertionOutcome {
    let pairs = unordered_pairs(report);
    let total: f64 = pairs.iter().map(|p| p.2.abs()).sum();
    if pairs.is_empty() || total == 0.0 {
        return missing(name, "interaction pairs");
    }
    let radius = |id: u32| {
        report
            .breakdown
            .pores
            .iter()
            .find(|p| p.id == id)
            .map_or(0.0, |p| p.equivalent_radius)
    };
    let r_max = report
        .breakdown
        .pores
        .iter()
        .map(|p| p.equivalent_radius)
        .fold(0.0, f64::max);
    let large = |id: u32| radius(id) > 0.75 * r_max;
    let mut ok = true;
    let mut detail = String::new();
    let strongest = pairs
        .iter()
        .max_by(|a, b| a.2.abs().total_cmp(&b.2.abs()))
        .map(|p| (p.0, p.1));
    for &(a, b, v) in &pairs {
        let share = v.abs() / total;
        let pass = match (large(a), large(b)) {
            (true, true) => Some((a, b)) == strongest && (share - dominant).abs() <= tol,
            (false, false) => share < small_max,
            _ => share >= mixed[0] && share <= mixed[1],
        };
        ok &= pass;
        let _ = write!(
            detail,
            "{a}-{b}: {:.2}%{}; ",
            100.0 * share,
            if pass { "" } else { " ✗" }
        );
    }
    outcome(name, ok, detail.trim_end_matches([';', ' ']).to_string())
}
