//! Invariants of the estimator that must hold exactly (or to round-off),
//! plus randomized checks over pore layouts.

use porode::estimator::{estimate, EstimateOptions, EstimateReport, PairMode};
use porode::tensor::vec2;
use porode::verify::models::{
    beam_functional, beam_model, benchmark_material, circular_pore, four_pore_beam, two_pore_beam,
};
use porode::verify::{attach_ground_truth, find_benchmark, ground_truth};
use porode::{MaterialModel, PorousModel};
use proptest::prelude::*;

fn run(model: &PorousModel, material: &MaterialModel, options: &EstimateOptions) -> EstimateReport {
    estimate(model, material, &beam_functional(), options).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

#[test]
fn zero_pores_leave_the_reference_value_unchanged() {
    let report = run(&beam_model(Vec::new()).unwrap(), &benchmark_material(), &EstimateOptions::default());
    assert_eq!(report.soe, report.psi0);
    assert_eq!(report.foe, report.psi0);
    assert_eq!(report.tse, report.psi0);
    assert!(report.breakdown.pairs.is_empty());
}

#[test]
fn truncating_at_first_order_gives_the_first_order_estimate() {
    let options = EstimateOptions {
        second_order: false,
        ..EstimateOptions::default()
    };
    let report = run(&two_pore_beam(3.0, 5.0).unwrap(), &benchmark_material(), &options);
    assert_eq!(report.soe, report.foe);
    assert_eq!(report.breakdown.totals.d2_int, 0.0);
}

#[test]
fn effectivity_is_invariant_under_stiffness_load_and_thickness_scaling() {
    let material = benchmark_material();
    let functional = beam_functional();
    let options = EstimateOptions::default();
    let model = two_pore_beam(5.0, 5.0).unwrap();
    let indices = |model: &PorousModel, material: &MaterialModel| {
        let report = estimate(model, material, &functional, &options).unwrap();
        let truth = ground_truth(model, material, &functional, &options.sizing).unwrap();
        let e = attach_ground_truth(report, &truth).effectivity.unwrap();
        [e.tse.unwrap(), e.foe.unwrap(), e.soe.unwrap()]
    };
    let base = indices(&model, &material);
    let stiffer = MaterialModel::new(3.7 * material.youngs_modulus, material.poissons_ratio).unwrap();
    let loaded = model.with_reference(model.reference().with_scaled_loads(2.9)).unwrap();
    let mut thick = model.reference().clone();
    thick.domain = thick.domain.with_thickness(4.3).unwrap();
    let thick = model.with_reference(thick).unwrap();
    for scaled in [indices(&model, &stiffer), indices(&loaded, &material), indices(&thick, &material)] {
        for k in 0..3 {
            assert!(rel(scaled[k], base[k]) <= 1e-10, "{scaled:?} vs {base:?}");
        }
    }
}

#[test]
fn every_correction_scales_inversely_with_thickness() {
    let material = benchmark_material();
    let model = two_pore_beam(4.0, 5.0).unwrap();
    let base = run(&model, &material, &EstimateOptions::default());
    let mut thick = model.reference().clone();
    thick.domain = thick.domain.with_thickness(2.5).unwrap();
    let scaled = run(&model.with_reference(thick).unwrap(), &material, &EstimateOptions::default());
    let (a, b) = (base.breakdown.totals, scaled.breakdown.totals);
    for (x, y) in [
        (a.d_topo, b.d_topo),
        (a.d1_shape, b.d1_shape),
        (a.d2_self, b.d2_self),
        (a.d2_int, b.d2_int),
    ] {
        assert!(rel(x, 2.5 * y) <= 1e-9, "{x} vs 2.5 × {y}");
    }
    assert!(rel(base.psi0, 2.5 * scaled.psi0) <= 1e-9);
}

#[test]
fn identical_inputs_give_byte_identical_reports() {
    let model = four_pore_beam().unwrap();
    let options = find_benchmark("four_pore").unwrap().options;
    let a = run(&model, &benchmark_material(), &options).to_json(false).unwrap();
    let b = run(&model, &benchmark_material(), &options).to_json(false).unwrap();
    assert_eq!(a, b);
}

#[test]
fn halving_the_mesh_size_changes_the_true_defeaturing_error_by_less_than_ten_percent() {
    let model = four_pore_beam().unwrap();
    let sizing = find_benchmark("four_pore").unwrap().options.sizing;
    let fine = porode::mesh::MeshSizing {
        far: 0.5 * sizing.far,
        near: 0.5 * sizing.near,
        reference_near: 0.5 * sizing.reference_near,
        ..sizing
    };
    let material = benchmark_material();
    let functional = beam_functional();
    let coarse = ground_truth(&model, &material, &functional, &sizing).unwrap();
    let fine = ground_truth(&model, &material, &functional, &fine).unwrap();
    let (ec, ef) = (coarse.psi - coarse.psi0, fine.psi - fine.psi0);
    assert!(rel(ec, ef) < 0.10, "coarse {ec:e}, fine {ef:e}");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn single_pore_has_no_interaction_and_consistent_shares(
        x in 30.0f64..170.0, y in 25.0f64..75.0, r in 1.0f64..8.0,
    ) {
        let model = beam_model(vec![circular_pore(1, vec2(x, y), r).unwrap()]).unwrap();
        let report = run(&model, &benchmark_material(), &EstimateOptions::default());
        let t = report.breakdown.totals;
        prop_assert!(report.breakdown.pairs.is_empty());
        prop_assert_eq!(t.d2_int, 0.0);
        prop_assert!(report.tse.is_finite() && report.foe.is_finite() && report.soe.is_finite());
        prop_assert!((report.soe - report.foe - t.d2_self).abs() <= 1e-12 * report.psi0.abs());
        let s = report.breakdown.shares;
        prop_assert!((s.topological + s.first_order + s.second_order - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pore_order_does_not_change_the_estimate(
        dx in 15.0f64..60.0, dy in -20.0f64..20.0, r1 in 2.0f64..6.0, r2 in 2.0f64..6.0,
    ) {
        let a = circular_pore(1, vec2(70.0, 50.0), r1).unwrap();
        let b = circular_pore(2, vec2(70.0 + dx, 50.0 + dy), r2).unwrap();
        let material = benchmark_material();
        let options = EstimateOptions::default();
        let fwd = run(&beam_model(vec![a.clone(), b.clone()]).unwrap(), &material, &options);
        let rev = run(&beam_model(vec![b, a]).unwrap(), &material, &options);
        prop_assert!(rel(fwd.soe - fwd.psi0, rev.soe - rev.psi0) <= 1e-10);
        prop_assert!(rel(fwd.foe - fwd.psi0, rev.foe - rev.psi0) <= 1e-10);
    }

    #[test]
    fn unordered_pairs_average_the_two_orders(distance in 1.0f64..30.0, r in 2.0f64..8.0) {
        let model = two_pore_beam(distance, r).unwrap();
        let material = benchmark_material();
        let ordered = run(&model, &material, &EstimateOptions::default());
        let unordered = run(&model, &material, &EstimateOptions { pair_mode: PairMode::Unordered, ..EstimateOptions::default() });
        prop_assert_eq!(ordered.breakdown.pairs.len(), 2);
        prop_assert_eq!(unordered.breakdown.pairs.len(), 1);
        let sum: f64 = ordered.breakdown.pairs.iter().map(|p| p.d2_int).sum();
        prop_assert!(rel(sum, 2.0 * unordered.breakdown.pairs[0].d2_int) <= 1e-12);
        prop_assert_eq!(ordered.foe, unordered.foe);
    }

    #[test]
    fn corrections_scale_inversely_with_youngs_modulus(factor in 0.1f64..10.0) {
        let model = two_pore_beam(5.0, 5.0).unwrap();
        let material = benchmark_material();
        let scaled = MaterialModel::new(factor * material.youngs_modulus, material.poissons_ratio).unwrap();
        let a = run(&model, &material, &EstimateOptions::default());
        let b = run(&model, &scaled, &EstimateOptions::default());
        prop_assert!(rel(a.psi0, factor * b.psi0) <= 1e-9);
        prop_assert!(rel(a.soe - a.psi0, factor * (b.soe - b.psi0)) <= 1e-9);
    }
}
