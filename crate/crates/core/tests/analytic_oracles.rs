//! Analytic results checked against independent routes: bisection for the
//! fixed point, brute-force eigenvalues, a seed-by-seed marginal scan for the
//! closed-form count and exhaustive enumeration for the relaxation gap.

use irn_seeding::*;

/// Bisection root of `1 - y - exp(-k y)` on `[lo, 1]`.
fn bisect_giant(k: f64, mut lo: f64) -> f64 {
    let g = |y: f64| 1.0 - y - (-k * y).exp();
    let mut hi = 1.0;
    assert!(g(lo) > 0.0 && g(hi) < 0.0);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Number of seeds added by a designer who keeps seeding while the
/// marginal benefit is at least the marginal cost.
fn marginal_scan(kg: f64, kb: f64, lambda: f64, n: f64) -> u64 {
    let y = bisect_giant(kg, 0.01);
    let marginal_cost = lambda / (1.0 - kb);
    let small = (1.0 - y) / (1.0 - (1.0 - y) * kg);
    let mut seeded = 0u64;
    while y * (1.0 - y).powi(seeded as i32) * y * n + small >= marginal_cost {
        seeded += 1;
    }
    seeded
}

#[test]
fn bisection_matches_fixed_point() {
    let frozen = 0.796_812_130_020_02;
    assert!((bisect_giant(2.0, 0.5) - frozen).abs() < 1e-13);
    for k in [1.1, 1.5, 2.0, 3.0, 5.0, 10.0] {
        let y = solve_giant_fixed_point(&Kernel::constant(k).unwrap(), &TypeSpace::single("x"), 1e-12).unwrap();
        assert!((y[0] - bisect_giant(k, 0.01)).abs() < 1e-9, "k = {k}");
    }
}

#[test]
fn power_iteration_matches_closed_form_eigenvalue() {
    // Symmetric 2x2: rho = (a + d)/2 + sqrt(((a - d)/2)^2 + b c).
    for (a, b, c, d) in [(1.5, 0.5, 0.5, 1.5), (0.2, 0.7, 0.3, 0.9), (2.0, 0.1, 4.0, 0.0), (1.0, 0.0, 0.0, 3.0)] {
        let m = MeanOffspringMatrix::from_rows(&[vec![a, b], vec![c, d]]).unwrap();
        let expected = 0.5 * (a + d) + ((0.5 * (a - d)).powi(2) + b * c).sqrt();
        let r = spectral_radius(&m, 1e-12).unwrap();
        assert!((r - expected).abs() < 1e-8, "{r} vs {expected}");
    }
}

#[test]
fn closed_form_matches_marginal_scan() {
    for &(kg, kb, lambda) in &[(2.0, 0.5, 1.0), (3.0, 0.2, 2.0), (1.5, 0.8, 0.5), (4.0, 0.5, 10.0)] {
        for e in 1..=9 {
            let n = 10u64.pow(e);
            let closed = er_optimal_seed_count(kg, kb, lambda, n).unwrap();
            assert_eq!(closed, marginal_scan(kg, kb, lambda, n as f64), "kg={kg} kb={kb} lambda={lambda} n={n}");
        }
    }
}

#[test]
fn brute_force_agrees_with_closed_form_for_one_type() {
    for &(kg, kb, lambda) in &[(2.0, 0.5, 1.0), (3.0, 0.2, 2.0), (4.0, 0.5, 10.0)] {
        for n in [100u64, 1_000, 10_000, 100_000] {
            let s = Scenario::erdos_renyi(kg, kb, lambda, n).unwrap();
            let p = build_profile(&s, 1e-12).unwrap();
            let bf = brute_force_plan(&s, &p, 40).unwrap();
            let closed = er_optimal_seed_count(kg, kb, lambda, n).unwrap();
            assert_eq!(bf.counts(), &[closed as f64], "kg={kg} n={n}");
        }
    }
}

#[test]
fn er_profile_values() {
    let s = Scenario::erdos_renyi(2.0, 0.5, 1.0, 1_000_000).unwrap();
    let p = build_profile(&s, 1e-12).unwrap();
    let y = bisect_giant(2.0, 0.5);
    assert!((p.y_aggregate - y).abs() < 1e-10);
    assert!((p.c_good[0] - 1.0 / (1.0 - 2.0 * (1.0 - y))).abs() < 1e-9);
    assert_eq!(er_optimal_seed_count(2.0, 0.5, 1.0, 1_000_000).unwrap(), 9);
}

fn two_type_grid() -> Vec<Scenario> {
    let types = |a: f64| TypeSpace::new(vec!["a".into(), "b".into()], vec![a, 1.0 - a]).unwrap();
    let k = |r: [[f64; 2]; 2]| Kernel::from_rows(&[r[0].to_vec(), r[1].to_vec()]).unwrap();
    vec![
        Scenario::new(types(0.5), k([[3.0, 1.0], [1.0, 3.0]]), k([[0.5, 0.2], [0.2, 0.5]]), 1.0, 100_000).unwrap(),
        Scenario::new(types(0.3), k([[4.0, 1.0], [1.0, 2.0]]), k([[0.5, 0.2], [0.2, 0.5]]), 1.0, 100_000).unwrap(),
        Scenario::new(types(0.5), k([[5.0, 0.5], [0.5, 1.5]]), k([[1.2, 0.1], [0.1, 0.3]]), 1.0, 100_000).unwrap(),
        Scenario::new(types(0.4), k([[6.0, 1.0], [1.0, 1.0]]), k([[0.3, 0.3], [0.3, 0.6]]), 2.0, 10_000).unwrap(),
    ]
}

#[test]
fn single_type_plan_is_within_one_net_cost_of_brute_force() {
    for s in two_type_grid() {
        let p = build_profile(&s, 1e-12).unwrap();
        let r = relaxed_plan(&p, &s).unwrap();
        assert!(r.integer_count <= 30);
        let bf = brute_force_plan(&s, &p, 30).unwrap();
        let u_bf = designer_utility(&bf, &p, &s).unwrap();
        let bound = p.net_marginal_cost(s.lambda(), r.best_type);
        assert!(u_bf >= r.utility_analytic - 1e-9);
        assert!(u_bf - r.utility_analytic <= bound, "gap {} > {bound}", u_bf - r.utility_analytic);
    }
}

#[test]
fn better_giant_access_wins_at_equal_cost() {
    // Type 1 has more within-type contacts, hence higher y; bad-state
    // contacts are tuned so that both net costs stay positive.
    let s = Scenario::new(
        TypeSpace::new(vec!["a".into(), "b".into()], vec![0.5, 0.5]).unwrap(),
        Kernel::from_rows(&[vec![2.5, 1.0], vec![1.0, 4.0]]).unwrap(),
        Kernel::from_rows(&[vec![0.6, 0.2], vec![0.2, 0.6]]).unwrap(),
        1.5,
        50_000,
    )
    .unwrap();
    let p = build_profile(&s, 1e-12).unwrap();
    assert!(p.y_by_type[1] > p.y_by_type[0]);
    assert_eq!(best_type(&p, &s).unwrap(), 1);
    let r = relaxed_plan(&p, &s).unwrap();
    let bf = brute_force_plan(&s, &p, 30).unwrap();
    assert!(bf.counts()[1] >= bf.counts()[0]);
    assert_eq!(r.plan.counts()[0], 0.0);
}
