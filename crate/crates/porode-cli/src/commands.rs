//! Subcommand implementations. Each returns `Ok(true)` when the run
//! succeeded, `Ok(false)` when it completed but failed its own checks
//! (benchmark assertions), and an error otherwise.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use porode::estimator::{estimate, estimate_with_reference, solve_reference_on_mesh, EstimateReport, CSV_HEADER};
use porode::geometry::{select_interaction_pairs, PorePair};
use porode::mesh::io::write_mesh2d;
use porode::mesh::{triangulate, MeshStats};
use porode::verify::{attach_ground_truth, benchmark_names, find_benchmark, ground_truth, registry, run_benchmark};
use porode::{PorodeError, PorousModel, Result};

use crate::config::{echo, ResolvedModel, ResolvedRun, RunConfig};

/// Creates `<parent>/<command>-<UTC timestamp>`, adding a numeric suffix if
/// a directory of that name already exists.
pub fn create_run_dir(parent: &Path, command: &str) -> Result<PathBuf> {
    let io = |p: &Path, e: std::io::Error| PorodeError::Io {
        path: p.display().to_string(),
        source: e,
    };
    fs::create_dir_all(parent).map_err(|e| io(parent, e))?;
    let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ").to_string();
    for k in 0.. {
        let name = if k == 0 {
            format!("{command}-{stamp}")
        } else {
            format!("{command}-{stamp}-{k}")
        };
        let dir = parent.join(name);
        match fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(io(&dir, e)),
        }
    }
    unreachable!("unbounded suffix search always returns")
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| PorodeError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Geometric model with validated pore placement.
fn porous_model(run: &ResolvedRun) -> Result<PorousModel> {
    match &run.model {
        ResolvedModel::Geometric(reference) => PorousModel::new(reference.clone(), run.pores.clone()),
        ResolvedModel::Mesh { .. } => Err(PorodeError::validation(
            "this command needs a geometric model (builtin or model file); a mesh model has no geometry to re-mesh",
        )),
    }
}

fn run_estimate(run: &ResolvedRun) -> Result<(Option<PorousModel>, EstimateReport)> {
    match &run.model {
        ResolvedModel::Geometric(_) => {
            let model = porous_model(run)?;
            let report = estimate(&model, &run.material, &run.functional, &run.options)?;
            Ok((Some(model), report))
        }
        ResolvedModel::Mesh { mesh, point_loads } => {
            let start = Instant::now();
            let (model, reference) = solve_reference_on_mesh(
                (**mesh).clone(),
                point_loads.clone(),
                run.pores.clone(),
                &run.material,
                &run.functional,
            )?;
            let mut report = estimate_with_reference(&model, &reference, &run.options)?;
            report.timings.reference_solve = reference.solving_seconds;
            report.timings.total = start.elapsed().as_secs_f64();
            Ok((None, report))
        }
    }
}

fn write_report(dir: &Path, report: &EstimateReport) -> Result<()> {
    report.check()?;
    write(dir, "report.json", &(report.to_json(false)? + "\n"))?;
    write(dir, "timings.json", &json(&report.timings)?)?;
    write(dir, "report.csv", &format!("{CSV_HEADER}\n{}\n", report.csv_row().0))
}

fn print_estimates(report: &EstimateReport) {
    println!("psi0 = {:e}", report.psi0);
    println!("tse  = {:e}", report.tse);
    println!("foe  = {:e}", report.foe);
    println!("soe  = {:e}", report.soe);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
}

/// `estimate`: estimator only.
pub fn estimate_cmd(config: &RunConfig, run: &ResolvedRun, out: &Path) -> Result<bool> {
    let dir = create_run_dir(out, "estimate")?;
    write(&dir, "config.json", &(echo(config, run)? + "\n"))?;
    let (_, report) = run_estimate(run)?;
    write_report(&dir, &report)?;
    print_estimates(&report);
    println!("output: {}", dir.display());
    Ok(true)
}

/// `verify`: estimator plus direct analysis of the porous domain.
pub fn verify_cmd(config: &RunConfig, run: &ResolvedRun, out: &Path) -> Result<bool> {
    let model = porous_model(run)?;
    let dir = create_run_dir(out, "verify")?;
    write(&dir, "config.json", &(echo(config, run)? + "\n"))?;
    let (_, report) = run_estimate(run)?;
    let truth = ground_truth(&model, &run.material, &run.functional, &run.options.sizing)?;
    let mut report = attach_ground_truth(report, &truth);
    if let Some(porous) = report.mesh_stats.porous {
        if report.mesh_stats.reference.elements >= porous.elements {
            report.warnings.push(format!(
                "reference mesh ({} elements) is not smaller than the conforming porous mesh ({} elements)",
                report.mesh_stats.reference.elements, porous.elements
            ));
        }
    }
    write_report(&dir, &report)?;
    print_estimates(&report);
    println!("psi  = {:e} (direct analysis)", truth.psi);
    match report.effectivity {
        Some(e) => {
            let f = |v: Option<f64>| v.map_or("null".to_string(), |x| format!("{x:.4}"));
            println!("effectivity: tse {} foe {} soe {}", f(e.tse), f(e.foe), f(e.soe));
        }
        None => println!("effectivity: null"),
    }
    if let Some(r) = report.mesh_stats.reference_to_porous_ratio {
        println!("mesh-size ratio (reference/porous elements) = {r:.4}");
    }
    println!("output: {}", dir.display());
    Ok(true)
}

/// `benchmark NAME|all`.
pub fn benchmark_cmd(name: &str, out: &Path) -> Result<bool> {
    let specs = if name == "all" {
        registry()
    } else {
        match find_benchmark(name) {
            Some(spec) => vec![spec],
            None => {
                return Err(PorodeError::validation(format!(
                    "unknown benchmark '{name}'; available: {}, all",
                    benchmark_names().join(", ")
                )))
            }
        }
    };
    let dir = create_run_dir(out, &format!("benchmark-{name}"))?;
    let mut summary = String::new();
    let mut all_passed = true;
    for spec in &specs {
        log::info!("running benchmark {}", spec.name);
        let result = run_benchmark(spec)?;
        write(&dir, &format!("{}.csv", spec.name), &result.csv())?;
        let s = result.summary();
        print!("{s}");
        summary.push_str(&s);
        all_passed &= result.passed();
    }
    let verdict = if all_passed { "PASS" } else { "FAIL" };
    summary.push_str(&format!("overall: {verdict}\n"));
    println!("overall: {verdict}");
    write(&dir, "summary.txt", &summary)?;
    println!("output: {}", dir.display());
    Ok(all_passed)
}

#[derive(Serialize)]
struct PoreInfo {
    id: u32,
    equivalent_radius: f64,
    centroid: [f64; 2],
    boundary_distance: f64,
}

#[derive(Serialize)]
struct MeshInfo {
    reference: MeshStats,
    porous: Option<MeshStats>,
    reference_to_porous_ratio: Option<f64>,
    boundary_loops: usize,
    pores: Vec<PoreInfo>,
    interaction_pairs: Vec<PorePair>,
    warnings: Vec<String>,
}

/// `mesh-info`: reference (and, for geometric models, conforming porous)
/// mesh statistics, pore standoffs and the selected interaction pairs.
pub fn mesh_info_cmd(config: &RunConfig, run: &ResolvedRun, out: &Path) -> Result<bool> {
    let dir = create_run_dir(out, "mesh-info")?;
    write(&dir, "config.json", &(echo(config, run)? + "\n"))?;
    let sizing = run.options.sizing;
    let points = run.functional.points();
    let (reference_mesh, porous, domain, warnings) = match &run.model {
        ResolvedModel::Geometric(_) => {
            let model = porous_model(run)?;
            let reference = triangulate(model.reference(), &[], &points, &sizing.reference_options(model.pores()))?;
            let conforming = triangulate(
                model.reference(),
                model.pores(),
                &points,
                &sizing.conforming_options(model.pores()),
            )?;
            let porous = conforming.porous()?.mesh.stats();
            let domain = model.reference().domain.clone();
            (reference.mesh, Some(porous), domain, model.warnings().to_vec())
        }
        ResolvedModel::Mesh { mesh, point_loads } => {
            let model = PorousModel::on_mesh_domain(
                porode::estimator::domain_from_mesh(mesh)?,
                point_loads.clone(),
                run.pores.clone(),
            )?;
            ((**mesh).clone(), None, model.reference().domain.clone(), model.warnings().to_vec())
        }
    };
    let reference = reference_mesh.stats();
    let pores = run
        .pores
        .iter()
        .map(|p| PoreInfo {
            id: p.id(),
            equivalent_radius: p.equivalent_radius(),
            centroid: [p.centroid().x, p.centroid().y],
            boundary_distance: domain.loop_distance_to_boundary(p.boundary()),
        })
        .collect();
    let info = MeshInfo {
        reference,
        porous,
        reference_to_porous_ratio: porous.map(|p| reference.elements as f64 / p.elements as f64),
        boundary_loops: reference_mesh.boundary_loops()?.len(),
        pores,
        interaction_pairs: select_interaction_pairs(&run.pores, run.options.pair_policy)?,
        warnings,
    };
    let text = json(&info)?;
    write(&dir, "mesh_info.json", &text)?;
    write(&dir, "reference.mesh2d", &write_mesh2d(&reference_mesh))?;
    print!("{text}");
    println!("output: {}", dir.display());
    Ok(true)
}
