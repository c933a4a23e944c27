mod common;

use common::random_submodular;
use fwsfm::functions::{concave_cardinality_oracle, cut_oracle, iwata_oracle, modular_oracle};
use fwsfm::graph::{path_instance, random_cut_instance, WeightedGraph};
use fwsfm::maxflow::max_flow;
use fwsfm::oracle::FnSetFunction;
use fwsfm::sfm::{minimize, prefix_sweep, robust_round, telescoping_sum, SfmOptions};
use fwsfm::verify::brute_min;
use fwsfm::wolfe::Termination;
use fwsfm::{SetFunction, SubmodularOracle};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn exact_on_random_integer_functions(n in 1usize..=12, seed in any::<u64>()) {
        let o = random_submodular(n, seed);
        let brute = brute_min(&o).unwrap();
        let res = minimize(&o, &SfmOptions::default()).unwrap();
        prop_assert_eq!(res.min_value, brute.min_value);
        prop_assert!(brute.minimizers.contains(&res.min_set));
        prop_assert!(res.is_certified_exact());
        prop_assert!(res.gap >= -1e-9);
        prop_assert!(res.gap <= 2.0 * n as f64 * res.epsilon_used + 1e-9);
        prop_assert!(res.lower_bound <= brute.min_value + 1e-9);
        prop_assert_eq!(res.min_value, o.eval_indices(&res.min_set));
    }

    #[test]
    fn robust_rounding_alone_is_exact(n in 1usize..=10, seed in any::<u64>()) {
        let o = random_submodular(n, seed);
        let brute = brute_min(&o).unwrap();
        let res = minimize(&o, &SfmOptions::default().prefix_sweep(false)).unwrap();
        prop_assume!(res.termination == Termination::Converged);
        prop_assert_eq!(res.min_value, brute.min_value);
        prop_assert_eq!(&res.min_set, &robust_round(&res.x_final, res.epsilon_used));
    }

    #[test]
    fn telescoping_sum_is_certified(n in 1usize..=10, seed in any::<u64>()) {
        let o = random_submodular(n, seed);
        let res = minimize(&o, &SfmOptions::default()).unwrap();
        prop_assume!(res.termination == Termination::Converged);
        let t = telescoping_sum(&res.x_final, &o).unwrap();
        let eps = res.epsilon_used;
        prop_assert!(t <= eps * eps + 1e-9);
        prop_assert!((t - res.delta_certificate).abs() < 1e-8);
    }

    #[test]
    fn doubling_f_keeps_the_minimum(n in 1usize..=10, seed in any::<u64>()) {
        let o = random_submodular(n, seed);
        let base = o.inner().clone();
        let doubled = SubmodularOracle::new(
            FnSetFunction::new(n, move |s: &[bool]| 2.0 * base.value(s)).integer_valued(true),
        )
        .unwrap();
        let eps = 1.0 / (4.0 * n as f64);
        let a = minimize(&o, &SfmOptions::default().epsilon(eps)).unwrap();
        let b = minimize(&doubled, &SfmOptions::default().epsilon(2.0 * eps)).unwrap();
        prop_assert_eq!(o.eval_indices(&a.min_set), o.eval_indices(&b.min_set));
    }

    #[test]
    fn sweep_never_loses_to_rounding(n in 1usize..=10, seed in any::<u64>(), eps in 0.01..1.0f64) {
        let o = random_submodular(n, seed);
        let res = minimize(&o, &SfmOptions::default().epsilon(eps)).unwrap();
        let rounded = o.eval_indices(&robust_round(&res.x_final, eps));
        o.reset_eo_count();
        let (set, value) = prefix_sweep(&res.x_final, eps, &o).unwrap();
        prop_assert!(o.eo_count() <= n as u64 + 1);
        prop_assert!(value <= rounded);
        prop_assert_eq!(value, o.eval_indices(&set));
        prop_assert!(res.gap <= 2.0 * n as f64 * eps + 1e-9);
    }
}

#[test]
fn symmetric_pair() {
    let f = FnSetFunction::new(2, |s: &[bool]| if s[0] ^ s[1] { 1.0 } else { 0.0 }).integer_valued(true);
    let o = SubmodularOracle::new(f).unwrap();
    let res = minimize(&o, &SfmOptions::default()).unwrap();
    assert!(res.min_set.is_empty() || res.min_set == vec![0, 1]);
    assert_eq!(res.min_value, 0.0);
    assert_eq!(res.x_final, vec![0.0, 0.0]);
    assert_eq!(res.gap, 0.0);
}

#[test]
fn modular_weights() {
    let o = modular_oracle(vec![3.0, -1.0, 2.0]).unwrap();
    let res = minimize(&o, &SfmOptions::default()).unwrap();
    assert_eq!(res.min_set, vec![1]);
    assert_eq!(res.min_value, -1.0);
    assert_eq!(res.lower_bound, -1.0);
    assert_eq!(o.eval_indices(&[0, 2]), 5.0);
}

#[test]
fn two_edge_path() {
    let mut g = WeightedGraph::new(3, false);
    g.add_edge(0, 1, 2.0).unwrap();
    g.add_edge(1, 2, 1.0).unwrap();
    g.set_terminals(0, 2).unwrap();
    let o = cut_oracle(g).unwrap();
    assert_eq!(o.eval(&[true]), -1.0);
    let res = minimize(&o, &SfmOptions::default()).unwrap();
    assert_eq!(res.min_set, vec![0]);
    assert_eq!(res.min_value, -1.0);
    assert_eq!(res.raw_min_value(), 1.0);
}

#[test]
fn iwata_small_cases() {
    let o = iwata_oracle(2).unwrap();
    assert_eq!(o.eval(&[true, false]), 0.0);
    assert_eq!(o.eval(&[true, true]), -7.0);
    for n in 1..=12 {
        let o = iwata_oracle(n).unwrap();
        let brute = brute_min(&o).unwrap();
        assert_eq!(minimize(&o, &SfmOptions::default()).unwrap().min_value, brute.min_value);
    }
}

#[test]
fn rounded_sqrt_table() {
    for n in 2..=10 {
        // √k rounded to thousandths stays concave on 0..=10.
        let g: Vec<f64> = (0..=n).map(|k| ((k as f64).sqrt() * 1000.0).round() / 1000.0).collect();
        let mut w = vec![0.0; n];
        w[0] = -1.0;
        let o = concave_cardinality_oracle(g, w).unwrap();
        let brute = brute_min(&o).unwrap();
        let res = minimize(&o, &SfmOptions::default()).unwrap();
        assert!((res.min_value - brute.min_value).abs() < 1e-12, "n = {n}");
    }
}

#[test]
fn real_valued_default_tolerance() {
    let g: Vec<f64> = (0..=9).map(|k| (k as f64).sqrt()).collect();
    let w = vec![-1.2, 0.3, -0.4, 0.1, -0.05, 0.6, -0.7, 0.2, 0.0];
    let o = concave_cardinality_oracle(g, w).unwrap();
    assert!(!o.is_integer_valued());
    let res = minimize(&o, &SfmOptions::default()).unwrap();
    assert!((res.epsilon_used - 1e-6 * 3.0 * o.compute_f()).abs() < 1e-18);
    let brute = brute_min(&o).unwrap();
    assert!(res.min_value <= brute.min_value + 2.0 * 9.0 * res.epsilon_used);
}

#[test]
fn cut_minimum_matches_max_flow() {
    for seed in 0..80 {
        let n = 3 + seed as usize % 10;
        let g = random_cut_instance(n, 0.5, 9, seed).unwrap();
        let flow = max_flow(&g).unwrap();
        let o = cut_oracle(g).unwrap();
        let res = minimize(&o, &SfmOptions::default()).unwrap();
        assert_eq!(res.raw_min_value(), flow, "seed {seed}");
    }
}

#[test]
fn cut_at_desk_scale_matches_max_flow() {
    let g = random_cut_instance(30, 0.8, 10, 7).unwrap();
    let flow = max_flow(&g).unwrap();
    let res = minimize(&cut_oracle(g).unwrap(), &SfmOptions::default()).unwrap();
    assert_eq!(res.raw_min_value(), flow);
}

#[test]
fn path_scaling_preserves_the_answer() {
    let base = minimize(&cut_oracle(path_instance(10, 1).unwrap()).unwrap(), &SfmOptions::default()).unwrap();
    for k in 1..=6 {
        let scale = 10u64.pow(k);
        let o = cut_oracle(path_instance(10, scale).unwrap()).unwrap();
        let res = minimize(&o, &SfmOptions::default()).unwrap();
        assert_eq!(res.min_set, base.min_set);
        assert_eq!(res.raw_min_value(), base.raw_min_value() * scale as f64);
        assert_eq!(res.raw_min_value(), max_flow(o.inner().graph()).unwrap());
    }
}

#[test]
fn iteration_cap_is_reported() {
    let o = cut_oracle(random_cut_instance(30, 0.8, 10, 5).unwrap()).unwrap();
    let res = minimize(&o, &SfmOptions::default().max_iterations(3)).unwrap();
    assert_eq!(res.termination, Termination::IterationCap);
    assert!(res.iterations <= 3);
    assert!(res.gap >= -1e-9);
    assert_eq!(res.min_value, o.eval_indices(&res.min_set));
}

#[test]
fn eo_calls_are_counted() {
    let o = iwata_oracle(9).unwrap();
    let res = minimize(&o, &SfmOptions::default()).unwrap();
    // Start vertex, one call per major cycle, the final call, the sweep and
    // the re-evaluation of the result.
    let n = 9;
    let lo_calls = res.eo_calls - n - 1;
    assert_eq!(lo_calls % n, 0);
    assert!(lo_calls / n >= res.major_cycles as u64 + 1);
    assert_eq!(res.eo_calls, o.eo_count());
}
