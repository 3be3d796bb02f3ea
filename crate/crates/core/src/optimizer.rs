//! Optimal seed counts.
//!
//! The designer keeps adding seeds while the marginal benefit (a chance of
//! reaching a still-unseeded giant component plus a small component) beats
//! the marginal cost (`lambda` times a bad-state small component). In the
//! one-type case this has a closed form; with several types the relaxed
//! problem is a linear program whose optimum puts every seed on the single
//! type with the lowest net cost per unit of log-miss-probability.

use crate::error::{Error, Result};
use crate::kernel::Scenario;
use crate::percolation::{designer_utility, solve_giant_fixed_point, PercolationProfile, SeedingPlan, FIXED_POINT_TOLERANCE};

/// Largest type count accepted by [`brute_force_plan`].
pub const BRUTE_FORCE_MAX_TYPES: usize = 4;
/// Largest budget accepted by [`brute_force_plan`].
pub const BRUTE_FORCE_MAX_BUDGET: u64 = 40;

/// Outcome of the single-type relaxed optimization.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    /// Index of the type that receives every seed.
    pub best_type: usize,
    /// Target probability that some seed lands in the giant component.
    pub q_star: f64,
    pub relaxed_count: f64,
    /// `ceil(relaxed_count)`.
    pub integer_count: u64,
    pub plan: SeedingPlan,
    /// Designer utility of `plan`.
    pub utility_analytic: f64,
    /// `(k, utility gain of the k-th seed of best_type)` for
    /// `k = 1..=integer_count + 1`.
    pub marginal_schedule: Vec<(u64, f64)>,
}

/// `ceil(log(n / a) + 2 log y) / log(1 / (1 - y)))` with
/// `a = lambda / (1 - kb) - (1 - y) / (1 - (1 - y) kg)`: the one-type
/// optimal seed count, clamped at zero.
pub fn er_optimal_seed_count(kg: f64, kb: f64, lambda: f64, n: u64) -> Result<u64> {
    let s = Scenario::erdos_renyi(kg, kb, lambda, n)?;
    let y = solve_giant_fixed_point(s.kernel_good(), s.types(), FIXED_POINT_TOLERANCE)?[0];

    let marginal_cost = lambda / (1.0 - kb);
    let small_benefit = (1.0 - y) / (1.0 - (1.0 - y) * kg);
    let excess = marginal_cost - small_benefit;
    if excess <= 0.0 {
        return Err(Error::MarginalCostTooLow {
            marginal_cost,
            small_benefit,
        });
    }
    let bracket = (n as f64).ln() + 2.0 * y.ln() - excess.ln();
    let bound = bracket / -(-y).ln_1p();
    Ok(bound.max(0.0).ceil() as u64)
}

/// Non-vanishing part of the one-type count, `log n / log(1 / (1 - y))`.
pub fn leading_term_seed_count(y: f64, n: f64) -> f64 {
    n.ln() / -(-y).ln_1p()
}

fn check_net_costs(profile: &PercolationProfile, s: &Scenario) -> Result<()> {
    for i in 0..profile.num_types() {
        let net_cost = profile.net_marginal_cost(s.lambda(), i);
        if net_cost.is_nan() || net_cost <= 0.0 {
            return Err(Error::UnboundedSeeding {
                type_index: i,
                net_cost,
            });
        }
    }
    Ok(())
}

/// `1 - q*`, computed directly so that tiny miss probabilities keep their
/// relative precision.
fn giant_miss_target(profile: &PercolationProfile, s: &Scenario) -> Result<f64> {
    check_net_costs(profile, s)?;
    let scale = profile.y_aggregate * s.n() as f64;
    let miss = (0..profile.num_types())
        .map(|i| profile.net_marginal_cost(s.lambda(), i) / (profile.y_by_type[i] * scale))
        .fold(f64::INFINITY, f64::min);
    Ok(miss.min(1.0))
}

/// `max_i {1 - (lambda C^B(i) - (1 - y(i)) C^G(i)) / (y(i) y n)}`, clamped to `[0, 1)`.
pub fn q_star(profile: &PercolationProfile, s: &Scenario) -> Result<f64> {
    let q = 1.0 - giant_miss_target(profile, s)?;
    Ok(q.clamp(0.0, 1.0 - f64::EPSILON / 2.0))
}

fn cost_per_log_miss(profile: &PercolationProfile, lambda: f64, j: usize) -> f64 {
    let y = profile.y_by_type[j];
    if y >= 1.0 {
        // One seed reaches the giant surely.
        0.0
    } else if y <= 0.0 {
        f64::INFINITY
    } else {
        profile.net_marginal_cost(lambda, j) / -(-y).ln_1p()
    }
}

/// Type minimizing net marginal cost per unit of `-log(1 - y(j))`; ties go
/// to the lowest index.
pub fn best_type(profile: &PercolationProfile, s: &Scenario) -> Result<usize> {
    check_net_costs(profile, s)?;
    let mut best = 0;
    let mut best_ratio = cost_per_log_miss(profile, s.lambda(), 0);
    for j in 1..profile.num_types() {
        let ratio = cost_per_log_miss(profile, s.lambda(), j);
        if ratio < best_ratio {
            best = j;
            best_ratio = ratio;
        }
    }
    Ok(best)
}

/// Utility gain of adding one seed of type `j` when the giant component is
/// still missed with probability `miss`.
pub fn marginal_utility(profile: &PercolationProfile, s: &Scenario, j: usize, miss: f64) -> f64 {
    profile.y_by_type[j] * miss * profile.y_aggregate * s.n() as f64 - profile.net_marginal_cost(s.lambda(), j)
}

/// Solves the relaxed problem and rounds the seed count up.
pub fn relaxed_plan(profile: &PercolationProfile, s: &Scenario) -> Result<OptimizationResult> {
    let j = best_type(profile, s)?;
    let miss = giant_miss_target(profile, s)?;
    let q = q_star(profile, s)?;
    let y = profile.y_by_type[j];

    let (relaxed_count, integer_count) = if miss >= 1.0 {
        (0.0, 0)
    } else if y >= 1.0 {
        (0.0, 1)
    } else {
        let r = (miss.ln() / (-y).ln_1p()).max(0.0);
        (r, r.ceil() as u64)
    };

    let plan = SeedingPlan::single_type(profile.num_types(), j, integer_count);
    let utility_analytic = designer_utility(&plan, profile, s)?;
    let log_keep = (-y).ln_1p();
    let marginal_schedule = (1..=integer_count + 1)
        .map(|k| (k, marginal_utility(profile, s, j, ((k - 1) as f64 * log_keep).exp())))
        .collect();

    Ok(OptimizationResult {
        best_type: j,
        q_star: q,
        relaxed_count,
        integer_count,
        plan,
        utility_analytic,
        marginal_schedule,
    })
}

/// Builds the profile and runs [`relaxed_plan`].
pub fn optimize(s: &Scenario) -> Result<(PercolationProfile, OptimizationResult)> {
    let profile = crate::percolation::build_profile(s, FIXED_POINT_TOLERANCE)?;
    let result = relaxed_plan(&profile, s)?;
    Ok((profile, result))
}

/// Exhaustive search over every integer allocation with total at most
/// `budget`. Among equal utilities the lexicographically smallest
/// allocation wins.
pub fn brute_force_plan(s: &Scenario, profile: &PercolationProfile, budget: u64) -> Result<SeedingPlan> {
    let types = s.num_types();
    if types > BRUTE_FORCE_MAX_TYPES || budget > BRUTE_FORCE_MAX_BUDGET {
        return Err(Error::BudgetTooLarge {
            types,
            budget,
            max_types: BRUTE_FORCE_MAX_TYPES,
            max_budget: BRUTE_FORCE_MAX_BUDGET,
        });
    }

    let mut best: Option<(f64, Vec<u64>)> = None;
    let mut counts = vec![0u64; types];
    let mut visit = |counts: &[u64]| -> Result<()> {
        let u = designer_utility(&SeedingPlan::from_counts(counts), profile, s)?;
        if best.as_ref().is_none_or(|(b, _)| u > *b) {
            best = Some((u, counts.to_vec()));
        }
        Ok(())
    };
    enumerate(&mut counts, 0, budget, &mut visit)?;
    let (_, counts) = best.expect("the empty allocation is always visited");
    Ok(SeedingPlan::from_counts(&counts))
}

/// Visits allocations in lexicographic order.
fn enumerate(
    counts: &mut [u64],
    pos: usize,
    remaining: u64,
    visit: &mut impl FnMut(&[u64]) -> Result<()>,
) -> Result<()> {
    if pos == counts.len() {
        return visit(counts);
    }
    for c in 0..=remaining {
        counts[pos] = c;
        enumerate(counts, pos + 1, remaining - c, visit)?;
    }
    counts[pos] = 0;
    Ok(())
}

/// Integer seed count of the relaxed plan at each network size.
pub fn scaling_sweep(s: &Scenario, n_values: &[u64]) -> Result<Vec<(u64, u64)>> {
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "network sizes must be strictly increasing".into(),
        ));
    }
    // The percolation profile does not depend on n.
    let profile = crate::percolation::build_profile(s, FIXED_POINT_TOLERANCE)?;
    n_values
        .iter()
        .map(|&n| {
            let scenario = s.with_n(n)?;
            Ok((n, relaxed_plan(&profile, &scenario)?.integer_count))
        })
        .collect()
}
