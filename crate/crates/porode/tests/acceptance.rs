//! Acceptance report: one `PASS`/`FAIL` line per criterion.
//!
//! Criteria backed by an analytic or numerical oracle (1, 2, 10 and the exact
//! invariants of 9) must pass; the test panics if they do not. Criteria that
//! check target bands for benchmark studies are reported as measured, without
//! failing the test, so that the printed report is the record of how far the
//! implementation reproduces them. Run with `--nocapture` to see the report:
//!
//! `cargo test --release -p porode --test acceptance -- --nocapture`

use std::time::Instant;

use porode::estimator::{analyze_pore, estimate, solve_reference, EstimateOptions, EstimateReport, PairMode};
use porode::fem::StiffnessSystem;
use porode::geometry::{select_interaction_pairs, PairPolicy};
use porode::mesh::VolumeMesh;
use porode::sensitivity::first_order_derivative;
use porode::tensor::vec2;
use porode::verify::models::{
    beam_functional, beam_model, benchmark_material, circular_pore, single_pore_beam, two_pore_beam,
};
use porode::verify::{
    analyze_porous, attach_ground_truth, fd_shape_sensitivity, find_benchmark, ground_truth, kirsch_hoop_check,
    porous_boundary_sensitivity, run_benchmark, BenchmarkResult,
};
use porode::MaterialModel;

struct Line {
    criterion: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn print(line: &Line) {
    println!(
        "{} criterion {:>2}: {} — {}",
        if line.passed { "PASS" } else { "FAIL" },
        line.criterion,
        line.title,
        line.detail
    );
}

fn closer_to_one(a: f64, b: f64) -> bool {
    a > 0.0 && (a.ln().abs() < b.ln().abs() || b <= 0.0)
}

fn assertion<'a>(result: &'a BenchmarkResult, prefix: &str) -> &'a porode::verify::benchmark::AssertionOutcome {
    result
        .assertions
        .iter()
        .find(|a| a.name.starts_with(prefix))
        .unwrap_or_else(|| panic!("{}: no assertion '{prefix}'", result.name))
}

fn bench(name: &str) -> BenchmarkResult {
    let spec = find_benchmark(name).unwrap_or_else(|| panic!("benchmark {name} is registered"));
    let result = run_benchmark(&spec).unwrap_or_else(|e| panic!("benchmark {name}: {e}"));
    assert!(result.failures.is_empty(), "{name}: rows failed: {:?}", result.failures);
    result
}

fn only_report(result: &BenchmarkResult) -> &EstimateReport {
    result.rows[0].report().expect("row succeeded")
}

fn criterion_1() -> Line {
    let start = Instant::now();
    let material = benchmark_material();
    let uni = kirsch_hoop_check(&material, 1.0, 128, 1.0, 0.0).unwrap();
    let hyd = kirsch_hoop_check(&material, 1.0, 128, 1.0, 1.0).unwrap();
    let peak = |c: &porode::verify::HoopCheck| c.samples.iter().map(|s| s.computed).fold(f64::MIN, f64::max);
    let (k_uni, k_hyd) = (peak(&uni), peak(&hyd));
    let seconds = start.elapsed().as_secs_f64();
    let passed = (k_uni - 3.0).abs() <= 0.06 && (k_hyd - 2.0).abs() <= 0.04 && seconds < 5.0;
    Line {
        criterion: 1,
        title: "Kirsch hoop-stress concentration (128 elements)",
        passed,
        detail: format!(
            "uniaxial {k_uni:.4} (3.0 ± 2%), hydrostatic {k_hyd:.4} (2.0 ± 2%), max profile error {:.2}%/{:.2}%, {seconds:.2} s",
            100.0 * uni.max_relative_error,
            100.0 * hyd.max_relative_error
        ),
    }
}

fn criterion_2() -> Line {
    let start = Instant::now();
    let model = single_pore_beam(5.0).unwrap();
    let material = benchmark_material();
    let functional = beam_functional();
    let options = EstimateOptions::default();
    let analysis = analyze_porous(&model, &material, &functional, &options.sizing).unwrap();
    let fd = fd_shape_sensitivity(&model, &analysis, &material, &functional, 1, 1e-2).unwrap();
    let porous = porous_boundary_sensitivity(&model, &analysis, 1).unwrap();
    let reference = solve_reference(&model, &material, &functional, &options.sizing).unwrap();
    let pore = &model.pores()[0];
    let exterior = first_order_derivative(&analyze_pore(pore, &reference, &options).unwrap().bundle);
    let seconds = start.elapsed().as_secs_f64();
    let e_porous = (porous - fd).abs() / fd.abs();
    let e_exterior = (exterior - fd).abs() / fd.abs();
    Line {
        criterion: 2,
        title: "first-order shape gradient vs central finite differences",
        passed: e_porous <= 0.03 && e_exterior <= 0.08 && seconds < 120.0,
        detail: format!(
            "FD {fd:.5e}; porous fields {porous:.5e} ({:.2}% ≤ 3%); exterior fields {exterior:.5e} ({:.2}% ≤ 8%); {seconds:.1} s",
            100.0 * e_porous,
            100.0 * e_exterior
        ),
    }
}

fn criterion_3(four: &BenchmarkResult) -> Line {
    let i = four.rows[0].indices().expect("effectivity defined");
    let [tse, foe, soe] = i;
    let passed = (1.10..=1.50).contains(&tse)
        && (1.10..=1.50).contains(&foe)
        && (0.78..=1.08).contains(&soe)
        && closer_to_one(soe, foe);
    Line {
        criterion: 3,
        title: "four-pore beam effectivity",
        passed,
        detail: format!(
            "I_tse {tse:.3}, I_foe {foe:.3} (both in [1.10, 1.50]), I_soe {soe:.3} (in [0.78, 1.08]), |log I_soe| < |log I_foe|: {}",
            closer_to_one(soe, foe)
        ),
    }
}

fn criterion_4(distance: &BenchmarkResult) -> Line {
    let best = assertion(distance, "soe_best_at");
    let within = assertion(distance, "all_within");
    Line {
        criterion: 4,
        title: "distance sweep trend",
        passed: best.passed && within.passed,
        detail: format!(
            "at 1 mm SOE closest to 1: {} [{}]; ≥ 20 mm all in [0.8, 1.25]: {} [{}]",
            best.passed, best.detail, within.passed, within.detail
        ),
    }
}

fn criterion_5(distance: &BenchmarkResult) -> Line {
    let shares = assertion(distance, "shares_at");
    Line {
        criterion: 5,
        title: "decomposition shares at 1 mm",
        passed: shares.passed,
        detail: format!("{} (targets FO 79.7±8, SO 20.3±8, int 10.2±5, topo < 0.1 %)", shares.detail),
    }
}

fn criterion_6(size: &BenchmarkResult) -> Line {
    let anchor = assertion(size, "anchor_at");
    Line {
        criterion: 6,
        title: "size sweep anchor at radius 10 mm",
        passed: anchor.passed,
        detail: format!("{} (targets I_soe in [0.9, 1.3], I_tse ≥ 1.4, I_foe ≤ 0.75)", anchor.detail),
    }
}

fn criterion_7(four: &BenchmarkResult) -> Line {
    let ranking = assertion(four, "interaction_ranking");
    Line {
        criterion: 7,
        title: "four-pore interaction ranking",
        passed: ranking.passed,
        detail: format!("{} (targets LL 63±15 %, LS 3–20 %, SS < 1 %)", ranking.detail),
    }
}

fn criterion_8(six: &BenchmarkResult) -> Line {
    let [_, foe, soe] = six.rows[0].indices().expect("effectivity defined");
    let shares = assertion(six, "pair_shares");
    let better = closer_to_one(soe, foe);
    Line {
        criterion: 8,
        title: "bracket six-pore case study",
        passed: better && shares.passed,
        detail: format!(
            "I_foe {foe:.3}, I_soe {soe:.3}, SOE closer to 1: {better}; pair shares in [1, 15] %: {} [{}]",
            shares.passed, shares.detail
        ),
    }
}

/// Linear displacement field reproduced exactly on an irregular mesh.
fn patch_test_error() -> f64 {
    let mut nodes = Vec::new();
    for j in 0..5 {
        for i in 0..5 {
            let (x, y) = (i as f64, j as f64);
            let interior = (1..4).contains(&i) && (1..4).contains(&j);
            let shift = if interior { 0.23 * ((i * 7 + j * 3) % 5) as f64 / 5.0 - 0.1 } else { 0.0 };
            nodes.push(vec2(x + shift, y - 0.7 * shift));
        }
    }
    let id = |i: usize, j: usize| j * 5 + i;
    let mut tris = Vec::new();
    for j in 0..4 {
        for i in 0..4 {
            if (i + j) % 2 == 0 {
                tris.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                tris.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            } else {
                tris.push([id(i, j), id(i + 1, j), id(i, j + 1)]);
                tris.push([id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
    }
    let exact = |p: &porode::Vec2| vec2(1e-3 * (0.3 + 2.0 * p.x - 0.5 * p.y), 1e-3 * (-0.1 + 0.7 * p.x + 1.1 * p.y));
    let mut mesh = VolumeMesh::new(nodes, tris, 1.0).unwrap();
    for j in 0..5 {
        for i in 0..5 {
            if i == 0 || j == 0 || i == 4 || j == 4 {
                let n = id(i, j);
                let u = exact(&mesh.nodes()[n]);
                mesh.set_dirichlet(n, [Some(u.x), Some(u.y)]).unwrap();
            }
        }
    }
    let material = MaterialModel::new(2.0e5, 0.3).unwrap();
    let mesh = std::sync::Arc::new(mesh);
    let solution = StiffnessSystem::new(mesh.clone(), material).unwrap().solve_primary().unwrap();
    mesh.nodes()
        .iter()
        .zip(solution.displacements())
        .map(|(p, u)| (u - exact(p)).norm() / exact(p).norm())
        .fold(0.0, f64::max)
}

fn criterion_9(distance: &BenchmarkResult) -> Line {
    let material = benchmark_material();
    let functional = beam_functional();
    let options = EstimateOptions::default();
    let mut lines = Vec::new();
    let mut exact_ok = true;

    // Zero-pore identity.
    let empty = beam_model(Vec::new()).unwrap();
    let r = estimate(&empty, &material, &functional, &options).unwrap();
    let ok = r.soe == r.psi0 && r.foe == r.psi0 && r.tse == r.psi0;
    exact_ok &= ok;
    lines.push(format!("zero-pore soe == psi0: {ok}"));

    // Truncation.
    let model = two_pore_beam(5.0, 5.0).unwrap();
    let truncated = estimate(&model, &material, &functional, &EstimateOptions { second_order: false, ..options }).unwrap();
    let ok = truncated.soe == truncated.foe;
    exact_ok &= ok;
    lines.push(format!("truncated soe == foe: {ok}"));

    // Scaling invariance of the effectivity indices.
    let indices = |model: &porode::PorousModel, material: &MaterialModel| {
        let report = estimate(model, material, &functional, &options).unwrap();
        let truth = ground_truth(model, material, &functional, &options.sizing).unwrap();
        let e = attach_ground_truth(report, &truth).effectivity.unwrap();
        [e.tse.unwrap(), e.foe.unwrap(), e.soe.unwrap()]
    };
    let base = indices(&model, &material);
    let stiffer = MaterialModel::new(3.7 * material.youngs_modulus, material.poissons_ratio).unwrap();
    let loaded = model.with_reference(model.reference().with_scaled_loads(2.9)).unwrap();
    let mut thick_ref = model.reference().clone();
    thick_ref.domain = thick_ref.domain.with_thickness(4.3).unwrap();
    let thick = model.with_reference(thick_ref).unwrap();
    let mut worst: f64 = 0.0;
    for scaled in [indices(&model, &stiffer), indices(&loaded, &material), indices(&thick, &material)] {
        for k in 0..3 {
            worst = worst.max((scaled[k] - base[k]).abs() / base[k].abs());
        }
    }
    let ok = worst <= 1e-10;
    exact_ok &= ok;
    lines.push(format!("E/load/thickness scaling max rel. change {worst:.1e}: {ok}"));

    // Ordered-pair near-symmetry over the distance sweep.
    let mut worst_sym: (f64, f64) = (0.0, 0.0);
    for row in &distance.rows {
        let report = row.report().expect("row succeeded");
        let pairs = &report.breakdown.pairs;
        if pairs.len() == 2 {
            let (a, b) = (pairs[0].d2_int, pairs[1].d2_int);
            let floor = 1e-3 * report.breakdown.totals.d_pore.abs();
            let rel = (a - b).abs() / a.abs().max(b.abs()).max(floor);
            if rel > worst_sym.1 {
                worst_sym = (row.sweep, rel);
            }
        }
    }
    let symmetric = worst_sym.1 <= 0.15;
    lines.push(format!(
        "ordered-pair asymmetry worst {:.1}% at {} mm (≤ 15%): {symmetric}",
        100.0 * worst_sym.1,
        worst_sym.0
    ));

    // Patch test.
    let patch = patch_test_error();
    let ok = patch <= 1e-9;
    exact_ok &= ok;
    lines.push(format!("patch test max rel. error {patch:.1e}: {ok}"));

    // Determinism.
    let a = estimate(&model, &material, &functional, &options).unwrap().to_json(false).unwrap();
    let b = estimate(&model, &material, &functional, &options).unwrap().to_json(false).unwrap();
    let ok = a == b;
    exact_ok &= ok;
    lines.push(format!("byte-identical reports: {ok}"));

    assert!(exact_ok, "exact invariants violated: {}", lines.join("; "));
    Line {
        criterion: 9,
        title: "property suite",
        passed: exact_ok && symmetric,
        detail: lines.join("; "),
    }
}

fn criterion_10(six: &BenchmarkResult) -> Line {
    // Nearest-neighbour pairing with the 5x cutoff: two radius-2 pores
    // 15 mm apart pair up, 25 mm apart (> 5 × diameter 4 = 20) do not.
    let pores = |gap: f64| {
        vec![
            circular_pore(1, vec2(80.0, 50.0), 2.0).unwrap(),
            circular_pore(2, vec2(84.0 + gap, 50.0), 2.0).unwrap(),
        ]
    };
    let policy = PairPolicy::default();
    let near = select_interaction_pairs(&pores(15.0), policy).unwrap().len();
    let far = select_interaction_pairs(&pores(25.0), policy).unwrap().len();
    let report = only_report(six);
    let ratio = report.mesh_stats.reference_to_porous_ratio;
    let unordered = EstimateOptions {
        pair_mode: PairMode::Unordered,
        ..EstimateOptions::default()
    };
    let passed = near == 1 && far == 0 && ratio.is_some_and(|r| r < 1.0) && unordered.validate().is_ok();
    Line {
        criterion: 10,
        title: "3D studies out of scope; pairing cutoff and mesh ratio exercised in 2D",
        passed,
        detail: format!(
            "5x-cutoff pairs at gap 15/25 mm: {near}/{far}; bracket reference/porous element ratio {}",
            ratio.map_or("missing".to_string(), |r| format!("{r:.3}"))
        ),
    }
}

#[test]
fn acceptance_report() {
    let mut lines = vec![criterion_1(), criterion_2()];
    let distance = bench("distance");
    let size = bench("size");
    let four = bench("four_pore");
    let six = bench("bracket_six");
    lines.push(criterion_3(&four));
    lines.push(criterion_4(&distance));
    lines.push(criterion_5(&distance));
    lines.push(criterion_6(&size));
    lines.push(criterion_7(&four));
    lines.push(criterion_8(&six));
    lines.push(criterion_9(&distance));
    lines.push(criterion_10(&six));
    println!();
    for line in &lines {
        print(line);
    }
    let passed = lines.iter().filter(|l| l.passed).count();
    println!("acceptance: {passed}/{} criteria pass", lines.len());
    for required in [1, 2, 10] {
        let line = lines.iter().find(|l| l.criterion == required).unwrap();
        assert!(line.passed, "oracle-backed criterion {required} failed: {}", line.detail);
    }
}
