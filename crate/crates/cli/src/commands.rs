//! The four experiment drivers. Each returns a table; `main` decides where
//! it is written.

use irn_seeding::sim::{
    largest_component_share_of_type, mean_component_size_of_type, measure_adoption, sample_graph,
    trial_seeds,
};
use irn_seeding::{
    build_profile, er_optimal_seed_count, expected_adoption_bad, expected_adoption_good,
    leading_term_seed_count, mean_offspring, optimize, phase, relaxed_plan, scaling_sweep,
    spectral_radius, Error, ProductState, Scenario, SeedingPlan, SimulationEstimate,
};
use rayon::prelude::*;

use crate::report::{ExperimentReport, KeyValueTable, ReportRow};

const TOL: f64 = 1e-12;

/// Largest network size accepted by [`simulate`].
pub const MAX_SIMULATION_N: usize = 1_000_000;
pub const DEFAULT_SIMULATION_N: usize = 20_000;
pub const DEFAULT_TRIALS: usize = 100;

/// Percolation profile, spectral radii and phases.
pub fn analyze(s: &Scenario) -> Result<KeyValueTable, Error> {
    let p = build_profile(s, TOL)?;
    let labels = s.types().labels();
    let mut t = KeyValueTable::default();
    for (i, label) in labels.iter().enumerate() {
        t.push(format!("y[{label}]"), p.y_by_type[i]);
    }
    t.push("y", p.y_aggregate);
    for (i, label) in labels.iter().enumerate() {
        t.push(format!("C^B[{label}]"), p.c_bad[i]);
    }
    for (i, label) in labels.iter().enumerate() {
        t.push(format!("C^G[{label}]"), p.c_good[i]);
    }
    for (name, kernel) in [("good", s.kernel_good()), ("bad", s.kernel_bad())] {
        let m = mean_offspring(kernel, s.types())?;
        t.push(format!("lambda1_{name}"), spectral_radius(&m, TOL)?);
        t.push(format!("phase_{name}"), phase(&m)?);
    }
    t.push("lambda1_dual", spectral_radius(&p.dual, TOL)?);
    Ok(t)
}

/// Optimal seeding: best type, q*, relaxed and integer counts and the
/// marginal schedule.
pub fn optimize_report(s: &Scenario) -> Result<KeyValueTable, Error> {
    let (p, r) = optimize(s)?;
    let j = r.best_type;
    let mut t = KeyValueTable::default();
    t.push("best_type", j);
    t.push("best_type_label", &s.types().labels()[j]);
    t.push("q_star", r.q_star);
    t.push("relaxed_count", r.relaxed_count);
    t.push("integer_count", r.integer_count);
    t.push("designer_utility", r.utility_analytic);
    let leading = leading_term_seed_count(p.y_by_type[j], s.n() as f64);
    t.push("leading_term", leading);
    t.push("leading_term_rounded", leading.round());
    if s.num_types() == 1 {
        let kg = s.kernel_good().get(0, 0);
        let kb = s.kernel_bad().get(0, 0);
        t.push("closed_form_count", er_optimal_seed_count(kg, kb, s.lambda(), s.n())?);
    }
    for (k, m) in &r.marginal_schedule {
        t.push(format!("marginal_utility[{k}]"), m);
    }
    Ok(t)
}

/// Which quantities a simulation run reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    pub good: bool,
    pub bad: bool,
    pub giant: bool,
    pub small: bool,
    pub adoption: bool,
}

impl Default for Selection {
    fn default() -> Self {
        Self {
            good: true,
            bad: true,
            giant: true,
            small: true,
            adoption: true,
        }
    }
}

/// Per-trial measurements, one vector per reported row.
struct Row {
    quantity: String,
    analytic: f64,
    state: ProductState,
    measure: Measure,
}

#[derive(Clone, Copy)]
enum Measure {
    LargestFraction,
    GiantShare(usize),
    SmallComponent(usize),
    Adoption,
}

/// The oracle suite: every analytic quantity next to its Monte Carlo
/// estimate on networks of `n_sim` agents.
///
/// Adoption rows use the optimizer's plan at `n_sim`; when the optimum is
/// zero seeds or unbounded, a single seed of the first type is used.
pub fn simulate(
    s: &Scenario,
    n_sim: usize,
    trials: usize,
    base_seed: u64,
    selection: Selection,
) -> Result<ExperimentReport, Error> {
    if n_sim > MAX_SIMULATION_N {
        return Err(Error::InvalidArgument(format!(
            "simulation size {n_sim} exceeds the limit of {MAX_SIMULATION_N}"
        )));
    }
    if trials < 2 {
        return Err(Error::InvalidArgument(format!(
            "at least 2 trials are needed for a standard error, got {trials}"
        )));
    }
    let s = s.with_n(n_sim as u64)?;
    let p = build_profile(&s, TOL)?;
    let labels = s.types().labels();

    let plan = match relaxed_plan(&p, &s) {
        Ok(r) if r.integer_count > 0 => r.plan,
        _ => SeedingPlan::single_type(s.num_types(), 0, 1),
    };
    let counts = plan.integer_counts().expect("integer plan");

    let mut rows = Vec::new();
    if selection.good && selection.giant {
        rows.push(Row {
            quantity: "y".into(),
            analytic: p.y_aggregate,
            state: ProductState::Good,
            measure: Measure::LargestFraction,
        });
        if s.num_types() > 1 {
            for (i, label) in labels.iter().enumerate() {
                rows.push(Row {
                    quantity: format!("y[{label}]"),
                    analytic: p.y_by_type[i],
                    state: ProductState::Good,
                    measure: Measure::GiantShare(i),
                });
            }
        }
    }
    if selection.small {
        for (i, label) in labels.iter().enumerate() {
            if selection.bad {
                rows.push(Row {
                    quantity: format!("C^B[{label}]"),
                    analytic: p.c_bad[i],
                    state: ProductState::Bad,
                    measure: Measure::SmallComponent(i),
                });
            }
            if selection.good {
                rows.push(Row {
                    quantity: format!("C^G[{label}]"),
                    analytic: p.c_good[i],
                    state: ProductState::Good,
                    measure: Measure::SmallComponent(i),
                });
            }
        }
    }
    if selection.adoption {
        if selection.bad {
            rows.push(Row {
                quantity: "A^B".into(),
                analytic: expected_adoption_bad(&plan, &p, &s)?,
                state: ProductState::Bad,
                measure: Measure::Adoption,
            });
        }
        if selection.good {
            rows.push(Row {
                quantity: "A^G".into(),
                analytic: expected_adoption_good(&plan, &p, &s)?,
                state: ProductState::Good,
                measure: Measure::Adoption,
            });
        }
    }
    let need_good = rows.iter().any(|r| r.state == ProductState::Good);
    let need_bad = rows.iter().any(|r| r.state == ProductState::Bad);

    // One good and one bad graph per trial, shared by all rows.
    let per_trial = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Vec<f64>, Error> {
            let good_seeds = trial_seeds(base_seed, 2 * t);
            let bad_seeds = trial_seeds(base_seed, 2 * t + 1);
            let good = need_good
                .then(|| sample_graph(&s, ProductState::Good, n_sim, good_seeds.graph))
                .transpose()?;
            let bad = need_bad
                .then(|| sample_graph(&s, ProductState::Bad, n_sim, bad_seeds.graph))
                .transpose()?;
            rows.iter()
                .map(|row| {
                    let (g, draw) = match row.state {
                        ProductState::Good => (good.as_ref().expect("sampled"), good_seeds.draw),
                        ProductState::Bad => (bad.as_ref().expect("sampled"), bad_seeds.draw),
                    };
                    let exclude_giant = row.state == ProductState::Good;
                    Ok(match row.measure {
                        Measure::LargestFraction => g.largest_component_size() as f64 / n_sim as f64,
                        Measure::GiantShare(i) => largest_component_share_of_type(g, i).unwrap_or(0.0),
                        Measure::SmallComponent(i) => mean_component_size_of_type(g, i, exclude_giant)
                            .ok_or(Error::InsufficientNodes {
                                type_index: i,
                                requested: 1,
                                available: 0,
                            })?,
                        Measure::Adoption => measure_adoption(g, &counts, draw)? as f64,
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<f64>>, Error>>()?;

    let rows = rows
        .into_iter()
        .enumerate()
        .map(|(k, row)| {
            let samples: Vec<f64> = per_trial.iter().map(|v| v[k]).collect();
            Ok(ReportRow {
                quantity: row.quantity,
                analytic: row.analytic,
                simulated: SimulationEstimate::from_samples(&samples)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(ExperimentReport { rows })
}

/// One row of a scaling sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n: u64,
    pub integer_count: u64,
    pub count_over_log_n: f64,
}

pub fn sweep(s: &Scenario, n_list: &[u64]) -> Result<Vec<SweepRow>, Error> {
    if let Some(n) = n_list.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidArgument(format!(
            "sweep sizes must be at least 2 (log n > 0), got {n}"
        )));
    }
    Ok(scaling_sweep(s, n_list)?
        .into_iter()
        .map(|(n, count)| SweepRow {
            n,
            integer_count: count,
            count_over_log_n: count as f64 / (n as f64).ln(),
        })
        .collect())
}

pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "integer_count", "count_over_log_n"])?;
    for r in rows {
        w.write_record([r.n.to_string(), r.integer_count.to_string(), r.count_over_log_n.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a comma-separated list of network sizes; `1e6`-style entries are
/// accepted when they denote integers.
pub fn parse_n_list(text: &str) -> Result<Vec<u64>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.replace('_', "")
                .parse::<u64>()
                .ok()
                .or_else(|| {
                    t.parse::<f64>()
                        .ok()
                        .filter(|v| v.fract() == 0.0 && *v >= 0.0 && *v < u64::MAX as f64)
                        .map(|v| v as u64)
                })
                .ok_or_else(|| Error::InvalidArgument(format!("not a network size: {t:?}")))
        })
        .collect()
}
