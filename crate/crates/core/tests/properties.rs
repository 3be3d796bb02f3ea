#![allow(clippy::needless_range_loop)]

use irn_seeding::sim::{measure_adoption, sample_graph};
use irn_seeding::*;
use proptest::prelude::*;

fn matrix(dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0f64..5.0, dim), dim)
}

fn symmetric(dim: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(lo..hi, dim * (dim + 1) / 2).prop_map(move |upper| {
        let mut rows = vec![vec![0.0; dim]; dim];
        let mut k = 0;
        for i in 0..dim {
            for j in i..dim {
                rows[i][j] = upper[k];
                rows[j][i] = upper[k];
                k += 1;
            }
        }
        rows
    })
}

fn proportions(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..1.0, dim).prop_map(|w| {
        let total: f64 = w.iter().sum();
        let mut mu: Vec<f64> = w.iter().map(|x| x / total).collect();
        let rest: f64 = mu[1..].iter().sum();
        mu[0] = 1.0 - rest;
        mu
    })
}

/// A validated 1-3 type scenario built by rescaling random kernels into the
/// right phases.
fn scenario() -> impl Strategy<Value = Scenario> {
    (1usize..=3)
        .prop_flat_map(|d| (proportions(d), symmetric(d, 0.2, 3.0), symmetric(d, 0.0, 1.0), 1.2f64..4.0, 0.1f64..0.9, 0.5f64..5.0))
        .prop_map(|(mu, good, bad, target_good, target_bad, lambda)| {
            let labels = (0..mu.len()).map(|i| format!("t{i}")).collect();
            let types = TypeSpace::new(labels, mu).unwrap();
            let rescale = |rows: Vec<Vec<f64>>, target: f64| {
                let k = Kernel::from_rows(&rows).unwrap();
                let r = spectral_radius(&mean_offspring(&k, &types).unwrap(), 1e-12).unwrap();
                let f = if r > 0.0 { target / r } else { 1.0 };
                Kernel::from_rows(&rows.iter().map(|row| row.iter().map(|v| v * f).collect()).collect::<Vec<_>>()).unwrap()
            };
            let good = rescale(good, target_good);
            let bad = rescale(bad, target_bad);
            Scenario::new(types, good, bad, lambda, 100_000).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_radius_is_scale_linear(rows in (1usize..=4).prop_flat_map(matrix), c in 0.1f64..10.0) {
        let m = MeanOffspringMatrix::from_rows(&rows).unwrap();
        let scaled = MeanOffspringMatrix::new(m.matrix().scaled(c)).unwrap();
        let r = spectral_radius(&m, 1e-12).unwrap();
        let rc = spectral_radius(&scaled, 1e-12).unwrap();
        prop_assert!((rc - c * r).abs() <= 1e-6 * (1.0 + c * r));
    }

    #[test]
    fn spectral_radius_within_row_sum_bounds(rows in (1usize..=4).prop_flat_map(matrix)) {
        let m = MeanOffspringMatrix::from_rows(&rows).unwrap();
        let sums = m.matrix().row_sums();
        let lo = sums.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = sums.iter().cloned().fold(0.0, f64::max);
        let r = spectral_radius(&m, 1e-12).unwrap();
        prop_assert!(r >= lo - 1e-6 && r <= hi + 1e-6, "{lo} <= {r} <= {hi}");
    }

    #[test]
    fn validated_scenarios_have_consistent_profiles(s in scenario()) {
        prop_assert_eq!(phase(&mean_offspring(s.kernel_good(), s.types()).unwrap()).unwrap(), Phase::Supercritical);
        prop_assert_eq!(phase(&mean_offspring(s.kernel_bad(), s.types()).unwrap()).unwrap(), Phase::Subcritical);
        let p = build_profile(&s, 1e-12).unwrap();
        let m = mean_offspring(s.kernel_good(), s.types()).unwrap();
        prop_assert!(irn_seeding::percolation::fixed_point_residual(&m, &p.y_by_type) < 1e-8);
        prop_assert!(p.y_by_type.iter().all(|&y| y > 0.0 && y < 1.0));
        let agg: f64 = p.y_by_type.iter().zip(s.types().mu()).map(|(y, m)| y * m).sum();
        prop_assert!((p.y_aggregate - agg).abs() < 1e-9);
        prop_assert!(spectral_radius(&p.dual, 1e-12).unwrap() < 1.0);
        prop_assert!(p.c_bad.iter().chain(&p.c_good).all(|&c| c >= 1.0));
    }

    #[test]
    fn giant_probability_is_monotone_in_kernel(s in scenario(), i in 0usize..3, j in 0usize..3, bump in 0.01f64..2.0) {
        let d = s.num_types();
        let (i, j) = (i % d, j % d);
        let mut rows = s.kernel_good().rows();
        rows[i][j] += bump;
        rows[j][i] = rows[i][j];
        let bigger = Kernel::from_rows(&rows).unwrap();
        let y0 = solve_giant_fixed_point(s.kernel_good(), s.types(), 1e-12).unwrap();
        let y1 = solve_giant_fixed_point(&bigger, s.types(), 1e-12).unwrap();
        for (a, b) in y0.iter().zip(&y1) {
            prop_assert!(b >= &(a - 1e-10));
        }
    }

    #[test]
    fn good_adoption_is_increasing_and_concave(s in scenario(), t in 0usize..3, base in 0u64..20) {
        let p = build_profile(&s, 1e-12).unwrap();
        let t = t % s.num_types();
        let at = |k: u64| {
            let plan = SeedingPlan::single_type(s.num_types(), t, k);
            expected_adoption_good(&plan, &p, &s).unwrap()
        };
        let (a0, a1, a2) = (at(base), at(base + 1), at(base + 2));
        prop_assert!(a1 > a0);
        prop_assert!(a2 - a1 <= a1 - a0 + 1e-6 * a1.abs());
        let bad = |k: u64| expected_adoption_bad(&SeedingPlan::single_type(s.num_types(), t, k), &p, &s).unwrap();
        prop_assert!((bad(base + 2) - 2.0 * bad(base + 1) + bad(base)).abs() < 1e-9);
    }

    #[test]
    fn best_type_is_scale_invariant(s in scenario(), c in 0.01f64..100.0) {
        let p = build_profile(&s, 1e-12).unwrap();
        if let Ok(j) = best_type(&p, &s) {
            let mut scaled = p.clone();
            scaled.c_bad.iter_mut().for_each(|v| *v *= c);
            scaled.c_good.iter_mut().for_each(|v| *v *= c);
            prop_assert_eq!(best_type(&scaled, &s).unwrap(), j);
        }
    }

    #[test]
    fn sampling_is_reproducible(s in scenario(), seed in any::<u64>()) {
        let a = sample_graph(&s, ProductState::Good, 2_000, seed).unwrap();
        let b = sample_graph(&s, ProductState::Good, 2_000, seed).unwrap();
        prop_assert_eq!(&a.edges, &b.edges);
        prop_assert_eq!(a.component_sizes.iter().sum::<usize>(), 2_000);
        for &(u, v) in &a.edges {
            prop_assert_ne!(u, v);
            prop_assert_eq!(a.component_id[u as usize], a.component_id[v as usize]);
        }
    }

    #[test]
    fn adoption_is_bounded_and_monotone(s in scenario(), seed in any::<u64>(), draw in any::<u64>(), small in prop::collection::vec(0u64..20, 3), extra in prop::collection::vec(0u64..20, 3)) {
        let g = sample_graph(&s, ProductState::Good, 1_000, seed).unwrap();
        let d = s.num_types();
        let lo: Vec<u64> = small[..d].to_vec();
        let hi: Vec<u64> = lo.iter().zip(&extra).map(|(a, b)| a + b).collect();
        let a = measure_adoption(&g, &lo, draw).unwrap();
        let b = measure_adoption(&g, &hi, draw).unwrap();
        prop_assert!(a <= b);
        prop_assert!(b <= 1_000);
    }
}

#[test]
fn best_type_invariant_under_cost_scaling() {
    let s = Scenario::new(
        TypeSpace::new(vec!["a".into(), "b".into()], vec![0.3, 0.7]).unwrap(),
        Kernel::from_rows(&[vec![4.0, 1.0], vec![1.0, 2.0]]).unwrap(),
        Kernel::from_rows(&[vec![0.5, 0.2], vec![0.2, 0.5]]).unwrap(),
        1.0,
        100_000,
    )
    .unwrap();
    let p = build_profile(&s, 1e-12).unwrap();
    let j = best_type(&p, &s).unwrap();
    for c in [0.5, 2.0, 7.0] {
        let mut scaled = p.clone();
        scaled.c_bad.iter_mut().for_each(|v| *v *= c);
        scaled.c_good.iter_mut().for_each(|v| *v *= c);
        assert_eq!(best_type(&scaled, &s).unwrap(), j);
    }
}
