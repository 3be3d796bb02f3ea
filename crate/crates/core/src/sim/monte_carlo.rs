use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::graph::{measure_adoption, sample_graph, GraphInstance};
use crate::error::{Error, Result};
use crate::kernel::{ProductState, Scenario};
use crate::percolation::SeedingPlan;

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

impl SimulationEstimate {
    /// Needs at least two samples for the standard error.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let trials = samples.len();
        if trials < 2 {
            return Err(Error::InvalidArgument(format!(
                "standard error needs at least 2 trials, got {trials}"
            )));
        }
        let mean = samples.iter().sum::<f64>() / trials as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        Ok(Self {
            mean,
            std_error: (var / trials as f64).sqrt(),
            trials,
        })
    }

    /// `|value - mean| <= k * std_error`.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (value - self.mean).abs() <= k * self.std_error
    }
}

/// Seeds for one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialSeeds {
    pub graph: u64,
    pub draw: u64,
}

/// Derives the seeds of trial `trial` from its own ChaCha stream, so every
/// trial is reproducible from `(base_seed, trial)` alone.
pub fn trial_seeds(base_seed: u64, trial: u64) -> TrialSeeds {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(trial);
    TrialSeeds {
        graph: rng.next_u64(),
        draw: rng.next_u64(),
    }
}

/// Runs `trial` for every trial index in parallel and summarizes the
/// results. Samples are collected in trial order before summing, so the
/// estimate does not depend on scheduling.
pub fn run_trials<F>(trials: usize, base_seed: u64, trial: F) -> Result<SimulationEstimate>
where
    F: Fn(TrialSeeds) -> Result<f64> + Sync,
{
    if trials < 2 {
        return Err(Error::InvalidArgument(format!(
            "at least 2 trials are required, got {trials}"
        )));
    }
    let samples = (0..trials as u64)
        .into_par_iter()
        .map(|t| trial(trial_seeds(base_seed, t)))
        .collect::<Result<Vec<f64>>>()?;
    SimulationEstimate::from_samples(&samples)
}

/// Monte Carlo estimate of the expected adoption of `plan`.
pub fn monte_carlo_adoption(
    s: &Scenario,
    state: ProductState,
    n: usize,
    plan: &SeedingPlan,
    trials: usize,
    base_seed: u64,
) -> Result<SimulationEstimate> {
    let counts = plan
        .integer_counts()
        .ok_or_else(|| Error::InvalidArgument("simulation needs an integer seeding plan".into()))?;
    run_trials(trials, base_seed, |seeds| {
        let g = sample_graph(s, state, n, seeds.graph)?;
        Ok(measure_adoption(&g, &counts, seeds.draw)? as f64)
    })
}

/// Monte Carlo estimate of the largest component as a fraction of `n`.
pub fn largest_component_fraction(
    s: &Scenario,
    state: ProductState,
    n: usize,
    trials: usize,
    base_seed: u64,
) -> Result<SimulationEstimate> {
    run_trials(trials, base_seed, |seeds| {
        let g = sample_graph(s, state, n, seeds.graph)?;
        Ok(g.largest_component_size() as f64 / n as f64)
    })
}

/// Mean component size of a uniformly chosen type-`t` node. With
/// `exclude_largest`, nodes of the largest component are left out.
/// `None` when no node qualifies.
pub fn mean_component_size_of_type(g: &GraphInstance, t: usize, exclude_largest: bool) -> Option<f64> {
    let largest = if exclude_largest {
        g.largest_component().map(|(c, _)| c)
    } else {
        None
    };
    let (total, count) = (0..g.n)
        .filter(|&v| g.node_types[v] == t && Some(g.component_id[v]) != largest)
        .fold((0u64, 0u64), |(s, c), v| (s + g.component_size_of(v) as u64, c + 1));
    (count > 0).then(|| total as f64 / count as f64)
}

/// Fraction of type-`t` nodes inside the largest component.
pub fn largest_component_share_of_type(g: &GraphInstance, t: usize) -> Option<f64> {
    let (largest, _) = g.largest_component()?;
    let (inside, count) = (0..g.n)
        .filter(|&v| g.node_types[v] == t)
        .fold((0u64, 0u64), |(i, c), v| (i + u64::from(g.component_id[v] == largest), c + 1));
    (count > 0).then(|| inside as f64 / count as f64)
}

/// Monte Carlo estimate of the expected component size of a type-`t` node.
/// In the good state the giant (largest) component is excluded, matching
/// `C^G`; in the bad state every component counts, matching `C^B`.
pub fn small_component_size(
    s: &Scenario,
    state: ProductState,
    n: usize,
    t: usize,
    trials: usize,
    base_seed: u64,
) -> Result<SimulationEstimate> {
    if t >= s.num_types() {
        return Err(Error::InvalidArgument(format!("type index {t} out of range")));
    }
    run_trials(trials, base_seed, |seeds| {
        let g = sample_graph(s, state, n, seeds.graph)?;
        mean_component_size_of_type(&g, t, state == ProductState::Good)
            .ok_or(Error::InsufficientNodes {
                type_index: t,
                requested: 1,
                available: 0,
            })
    })
}
