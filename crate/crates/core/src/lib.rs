//! Optimal seeding of a product of uncertain quality on an inhomogeneous
//! random network.
//!
//! A designer seeds agents of a finite set of types. If the product is good
//! the contact kernel is supercritical and a giant component exists; if it
//! is bad the kernel is subcritical and every seed only reaches a small
//! component. The crate provides
//!
//! - [`kernel`]: scenario validation and spectral phase classification,
//! - [`percolation`]: giant-component fixed points, small-component sizes
//!   and expected adoption,
//! - [`optimizer`]: the optimal seed count and seed type,
//! - [`sim`]: a Monte Carlo graph simulator used as an independent check of
//!   every analytic quantity.

pub mod error;
pub mod kernel;
pub mod optimizer;
pub mod percolation;
pub mod sim;

pub use error::{Error, Result};
pub use kernel::{
    mean_offspring, phase, spectral_radius, validate_scenario, Kernel, MeanOffspringMatrix, Phase,
    ProductState, Scenario, SquareMatrix, TypeSpace,
};
pub use optimizer::{
    best_type, brute_force_plan, er_optimal_seed_count, leading_term_seed_count, optimize, q_star,
    relaxed_plan, scaling_sweep, OptimizationResult,
};
pub use percolation::{
    aggregate_giant_fraction, build_profile, designer_utility, dual_kernel, expected_adoption_bad,
    expected_adoption_good, small_component_sizes, solve_giant_fixed_point, PercolationProfile,
    SeedingPlan,
};
pub use sim::{GraphInstance, SimulationEstimate};
