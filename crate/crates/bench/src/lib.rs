//! Fixtures shared by the criterion benchmarks.

use irn_seeding::{Kernel, Scenario, TypeSpace};

/// One-type scenario with `kappa_good = 2`, `kappa_bad = 0.5`, `lambda = 1`.
pub fn er_scenario(n: u64) -> Scenario {
    Scenario::erdos_renyi(2.0, 0.5, 1.0, n).expect("valid scenario")
}

/// Asymmetric three-type scenario.
pub fn three_type_scenario(n: u64) -> Scenario {
    Scenario::new(
        TypeSpace::new(
            vec!["students".into(), "workers".into(), "retirees".into()],
            vec![0.2, 0.5, 0.3],
        )
        .expect("valid types"),
        Kernel::from_rows(&[
            vec![8.0, 1.5, 0.2],
            vec![1.5, 2.5, 0.8],
            vec![0.2, 0.8, 1.5],
        ])
        .expect("valid kernel"),
        Kernel::from_rows(&[
            vec![0.9, 0.3, 0.1],
            vec![0.3, 0.5, 0.2],
            vec![0.1, 0.2, 0.4],
        ])
        .expect("valid kernel"),
        2.0,
        n,
    )
    .expect("valid scenario")
}
