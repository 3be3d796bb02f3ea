//! Monte Carlo simulation of finite inhomogeneous random networks.
//!
//! Every sampled graph is reproducible from a 64-bit seed, and every trial
//! of a Monte Carlo estimate derives its seeds from `(base_seed, trial)`.

mod graph;
mod monte_carlo;

pub use graph::{
    assign_type_counts, components, measure_adoption, sample_graph, DisjointSet, GraphInstance,
};
pub use monte_carlo::{
    largest_component_fraction, largest_component_share_of_type, mean_component_size_of_type,
    monte_carlo_adoption, run_trials, small_component_size, trial_seeds, SimulationEstimate,
    TrialSeeds,
};
