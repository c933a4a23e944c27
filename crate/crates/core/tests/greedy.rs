mod common;

use common::{all_vertices, random_submodular};
use fwsfm::functions::{cut_oracle, modular_oracle, TableFunction};
use fwsfm::graph::{path_instance, random_cut_instance};
use fwsfm::oracle::FnSetFunction;
use fwsfm::polytope::{greedy_lo, verify_membership, BasePolytope, MEMBERSHIP_LIMIT};
use fwsfm::{dot, norm_sq, Error, LinearOracle, SetFunction, SubmodularOracle};
use proptest::prelude::*;

fn direction(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![(-4i32..=4).prop_map(f64::from), -10.0..10.0f64], n)
}

fn instance() -> impl Strategy<Value = (usize, u64)> {
    (1usize..=6, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn greedy_beats_every_vertex(((n, seed), dir) in instance().prop_flat_map(|(n, s)| (Just((n, s)), direction(n)))) {
        let o = random_submodular(n, seed);
        let q = greedy_lo(&o, &dir).unwrap();
        let best = dot(&dir, &q.coords);
        for w in all_vertices(&o) {
            prop_assert!(best <= dot(&dir, &w) + 1e-9);
        }
    }

    #[test]
    fn greedy_coordinates_bounded_by_f(((n, seed), dir) in instance().prop_flat_map(|(n, s)| (Just((n, s)), direction(n)))) {
        let o = random_submodular(n, seed);
        let f = o.compute_f();
        let q = greedy_lo(&o, &dir).unwrap();
        prop_assert!(q.coords.iter().all(|c| c.abs() <= f + 1e-12));
        prop_assert!(norm_sq(&q.coords) <= n as f64 * f * f + 1e-9);
        prop_assert!(norm_sq(&q.coords).sqrt() <= BasePolytope::new(&o).norm_bound() + 1e-9);
    }

    #[test]
    fn greedy_is_permutation_equivariant(
        ((n, seed), dir, perm) in instance().prop_flat_map(|(n, s)| {
            (Just((n, s)), direction(n), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        })
    ) {
        // Distinct directions keep the tie-break out of the picture.
        let dir: Vec<f64> = dir.iter().enumerate().map(|(i, d)| d + i as f64 * 1e-3).collect();
        let o = random_submodular(n, seed);
        // g(S) = f(π⁻¹(S)): element perm[i] of g plays element i of f.
        let base = o.inner().clone();
        let p = perm.clone();
        let g = FnSetFunction::new(n, move |s: &[bool]| {
            let pulled: Vec<bool> = (0..n).map(|i| s[p[i]]).collect();
            base.value(&pulled)
        });
        let og = SubmodularOracle::new(g).unwrap();
        let mut dir_g = vec![0.0; n];
        for i in 0..n {
            dir_g[perm[i]] = dir[i];
        }
        let qf = greedy_lo(&o, &dir).unwrap().coords;
        let qg = greedy_lo(&og, &dir_g).unwrap().coords;
        for i in 0..n {
            prop_assert!((qg[perm[i]] - qf[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn greedy_costs_at_most_n_plus_one(((n, seed), dir) in instance().prop_flat_map(|(n, s)| (Just((n, s)), direction(n)))) {
        let o = random_submodular(n, seed);
        o.reset_eo_count();
        greedy_lo(&o, &dir).unwrap();
        prop_assert!(o.eo_count() <= n as u64 + 1);
    }

    #[test]
    fn greedy_vertices_and_mixtures_are_members(
        ((n, seed), a, b, t) in instance().prop_flat_map(|(n, s)| (Just((n, s)), direction(n), direction(n), 0.0..=1.0f64))
    ) {
        let o = random_submodular(n, seed);
        let qa = greedy_lo(&o, &a).unwrap().coords;
        let qb = greedy_lo(&o, &b).unwrap().coords;
        prop_assert!(verify_membership(&o, &qa, 1e-9).unwrap());
        let mix: Vec<f64> = qa.iter().zip(&qb).map(|(u, v)| t * u + (1.0 - t) * v).collect();
        prop_assert!(verify_membership(&o, &mix, 1e-9).unwrap());
    }

    #[test]
    fn greedy_prefix_sums_follow_f(((n, seed), dir) in instance().prop_flat_map(|(n, s)| (Just((n, s)), direction(n)))) {
        let o = random_submodular(n, seed);
        let v = greedy_lo(&o, &dir).unwrap();
        let order = v.order.clone().unwrap();
        let mut sum = 0.0;
        for k in 0..n {
            sum += v.coords[order[k]];
            prop_assert!((sum - o.eval_indices(&order[..=k])).abs() < 1e-9);
        }
    }
}

#[test]
fn modular_polytope_is_a_point() {
    let o = modular_oracle(vec![3.0, -1.0, 2.0]).unwrap();
    for dir in [[0.0, 0.0, 0.0], [5.0, -2.0, 1.0], [-1.0, -1.0, 7.0]] {
        assert_eq!(greedy_lo(&o, &dir).unwrap().coords, vec![3.0, -1.0, 2.0]);
    }
    assert_eq!(o.compute_f(), 3.0);
}

#[test]
fn symmetric_pair_vertex() {
    let f = FnSetFunction::new(2, |s: &[bool]| if s[0] ^ s[1] { 1.0 } else { 0.0 });
    let o = SubmodularOracle::new(f).unwrap();
    let v = greedy_lo(&o, &[1.0, -1.0]).unwrap();
    assert_eq!(v.order, Some(vec![1, 0]));
    assert_eq!(v.coords, vec![-1.0, 1.0]);
    assert_eq!(dot(&[1.0, -1.0], &v.coords), -2.0);
    assert_eq!(o.compute_f(), 1.0);
}

#[test]
fn ties_resolve_by_index() {
    let o = random_submodular(5, 11);
    let a = greedy_lo(&o, &[0.0; 5]).unwrap();
    assert_eq!(a.order, Some(vec![0, 1, 2, 3, 4]));
    let b = greedy_lo(&o, &[2.0, 1.0, 1.0, 0.0, 1.0]).unwrap();
    assert_eq!(b.order, Some(vec![3, 1, 2, 4, 0]));
    assert_eq!(b, greedy_lo(&o, &[2.0, 1.0, 1.0, 0.0, 1.0]).unwrap());
}

#[test]
fn greedy_rejects_bad_directions() {
    let o = random_submodular(3, 1);
    assert!(matches!(greedy_lo(&o, &[0.0, 1.0]), Err(Error::DimensionMismatch { .. })));
    assert!(matches!(greedy_lo(&o, &[0.0, f64::NAN, 1.0]), Err(Error::NonFinite { index: 1 })));
}

#[test]
fn shifted_vertex_is_not_a_member() {
    let g = random_cut_instance(7, 0.6, 1, 4).unwrap();
    let o = cut_oracle(g).unwrap();
    let mut x = greedy_lo(&o, &[0.3, -0.2, 0.9, 0.0, -1.0]).unwrap().coords;
    x[0] += 1.0;
    assert!(!verify_membership(&o, &x, 1e-9).unwrap());
}

#[test]
fn membership_refuses_large_ground_sets() {
    let n = MEMBERSHIP_LIMIT + 1;
    let o = SubmodularOracle::new(FnSetFunction::new(n, |_: &[bool]| 0.0)).unwrap();
    assert!(matches!(
        verify_membership(&o, &vec![0.0; n], 1e-9),
        Err(Error::TooLarge { .. })
    ));
}

#[test]
fn f_scales_with_path_capacities() {
    let base = cut_oracle(path_instance(6, 1).unwrap()).unwrap().compute_f();
    for k in 1..=6 {
        let scaled = cut_oracle(path_instance(6, 10u64.pow(k)).unwrap()).unwrap().compute_f();
        assert_eq!(scaled, base * 10f64.powi(k as i32));
    }
}

#[test]
fn compute_f_matches_definition() {
    for seed in 0..20 {
        let o = random_submodular(5, seed);
        let n = o.n();
        let full = vec![true; n];
        let mut expected: f64 = 0.0;
        for i in 0..n {
            let mut single = vec![false; n];
            single[i] = true;
            let mut minus = full.clone();
            minus[i] = false;
            expected = expected
                .max(o.eval(&single).abs())
                .max((o.eval(&full) - o.eval(&minus)).abs());
        }
        assert_eq!(o.compute_f(), expected);
    }
}

#[test]
fn empty_set_is_normalized_away() {
    let t = TableFunction::new(2, vec![5.0, 6.0, 7.0, 3.0]).unwrap();
    let o = SubmodularOracle::new(t).unwrap();
    assert_eq!(o.offset(), 5.0);
    assert_eq!(o.eval(&[false, false]), 0.0);
    assert_eq!(o.eval(&[true, true]), -2.0);
}
