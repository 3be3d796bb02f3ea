//! Giant-component fixed points, small-component sizes and the expected
//! adoption functions in the good and bad product states.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::kernel::{
    mean_offspring, phase, spectral_radius, Kernel, MeanOffspringMatrix, Phase, Scenario,
    SquareMatrix, TypeSpace, SPECTRAL_TOLERANCE,
};

/// Default tolerance for [`solve_giant_fixed_point`].
pub const FIXED_POINT_TOLERANCE: f64 = 1e-12;
/// Iteration cap for [`solve_giant_fixed_point`].
pub const FIXED_POINT_CAP: usize = 1_000_000;
/// Residual bound accepted from the dense solve in [`small_component_sizes`].
pub const LINEAR_RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Analytic percolation summary of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct PercolationProfile {
    /// Probability that a type-`i` agent lies in the good-state giant component.
    pub y_by_type: Vec<f64>,
    /// Giant component size as a fraction of the network.
    pub y_aggregate: f64,
    /// Expected bad-state component size of a type-`i` agent.
    pub c_bad: Vec<f64>,
    /// Expected good-state component size of a type-`i` agent outside the giant.
    pub c_good: Vec<f64>,
    /// Branching operator among agents outside the giant component.
    pub dual: MeanOffspringMatrix,
}

impl PercolationProfile {
    pub fn num_types(&self) -> usize {
        self.y_by_type.len()
    }

    /// `lambda * C^B(i) - (1 - y(i)) * C^G(i)`: what one more type-`i` seed
    /// costs beyond its chance of reaching the giant component.
    pub fn net_marginal_cost(&self, lambda: f64, i: usize) -> f64 {
        lambda * self.c_bad[i] - (1.0 - self.y_by_type[i]) * self.c_good[i]
    }
}

/// Number of seeds per type. Counts are real for relaxed plans.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedingPlan {
    counts: Vec<f64>,
}

impl SeedingPlan {
    pub fn empty(num_types: usize) -> Self {
        Self {
            counts: vec![0.0; num_types],
        }
    }

    pub fn from_counts(counts: &[u64]) -> Self {
        Self {
            counts: counts.iter().map(|&c| c as f64).collect(),
        }
    }

    /// All `count` seeds on type `type_index`.
    pub fn single_type(num_types: usize, type_index: usize, count: u64) -> Self {
        let mut counts = vec![0u64; num_types];
        counts[type_index] = count;
        Self::from_counts(&counts)
    }

    pub fn relaxed(counts: Vec<f64>) -> Result<Self> {
        if let Some((i, c)) = counts
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_finite() || **c < 0.0)
        {
            return Err(Error::InvalidArgument(format!(
                "seed count for type {i} must be finite and non-negative, got {c}"
            )));
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn num_types(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    pub fn is_integral(&self) -> bool {
        self.counts.iter().all(|c| c.fract() == 0.0)
    }

    /// Integer counts, or `None` for a fractional plan.
    pub fn integer_counts(&self) -> Option<Vec<u64>> {
        self.is_integral()
            .then(|| self.counts.iter().map(|&c| c as u64).collect())
    }
}

fn check_len(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}

/// Maximal solution of `1 - y(i) = exp(-sum_j kappa(i,j) y(j) mu(j))`.
///
/// Iterates from `y = 1`, which converges monotonically down to the largest
/// fixed point. Kernels that are not supercritical only admit `y = 0`.
pub fn solve_giant_fixed_point(kernel_good: &Kernel, types: &TypeSpace, tol: f64) -> Result<Vec<f64>> {
    let m = mean_offspring(kernel_good, types)?;
    if phase(&m)? != Phase::Supercritical {
        return Ok(vec![0.0; types.len()]);
    }
    let step = |y: &[f64]| -> Vec<f64> {
        m.matrix()
            .apply(y)
            .into_iter()
            .map(|s| -(-s).exp_m1())
            .collect()
    };

    let mut y = vec![1.0; types.len()];
    for _ in 0..FIXED_POINT_CAP {
        let next = step(&y);
        let change = next
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        y = next;
        if change < tol {
            if y.iter().all(|&v| v < tol) {
                return Err(Error::DegenerateSolution);
            }
            let residual = fixed_point_residual(&m, &y);
            if residual >= 10.0 * tol {
                return Err(Error::NoConvergence {
                    what: "giant-component fixed point (residual)",
                    iterations: FIXED_POINT_CAP,
                });
            }
            return Ok(y);
        }
    }
    Err(Error::NoConvergence {
        what: "giant-component fixed point",
        iterations: FIXED_POINT_CAP,
    })
}

/// Sup-norm of `1 - y - exp(-M y)`.
pub fn fixed_point_residual(m: &MeanOffspringMatrix, y: &[f64]) -> f64 {
    m.matrix()
        .apply(y)
        .into_iter()
        .zip(y)
        .map(|(s, yi)| (1.0 - yi - (-s).exp()).abs())
        .fold(0.0, f64::max)
}

pub fn aggregate_giant_fraction(y_by_type: &[f64], types: &TypeSpace) -> Result<f64> {
    check_len("giant probabilities", types.len(), y_by_type.len())?;
    Ok(y_by_type.iter().zip(types.mu()).map(|(y, mu)| y * mu).sum())
}

/// Solves `(I - M) c = 1` for a subcritical operator `M`.
pub fn small_component_sizes(m: &MeanOffspringMatrix) -> Result<Vec<f64>> {
    let radius = spectral_radius(m, SPECTRAL_TOLERANCE)?;
    if radius >= 1.0 {
        return Err(Error::SingularSystem(format!(
            "spectral radius {radius} >= 1, small components are unbounded"
        )));
    }
    let dim = m.dim();
    let a = DMatrix::from_fn(dim, dim, |i, j| if i == j { 1.0 } else { 0.0 } - m.get(i, j));
    let ones = DVector::from_element(dim, 1.0);
    let c = a
        .clone()
        .lu()
        .solve(&ones)
        .ok_or_else(|| Error::SingularSystem("I - M is not invertible".into()))?;
    let residual = (&a * &c - &ones).amax();
    if residual > LINEAR_RESIDUAL_TOLERANCE {
        return Err(Error::SingularSystem(format!("solve residual {residual}")));
    }
    if c.iter().any(|&v| v.is_nan() || v < 1.0 - LINEAR_RESIDUAL_TOLERANCE) {
        return Err(Error::SingularSystem("non-positive component size".into()));
    }
    Ok(c.iter().map(|&v| v.max(1.0)).collect())
}

/// Operator `kappa(i,j) (1 - y(j)) mu(j)` governing agents outside the giant.
pub fn dual_kernel(kernel_good: &Kernel, y_by_type: &[f64], types: &TypeSpace) -> Result<MeanOffspringMatrix> {
    check_len("kernel vs type space", types.len(), kernel_good.dim())?;
    check_len("giant probabilities", types.len(), y_by_type.len())?;
    let mu = types.mu();
    MeanOffspringMatrix::new(SquareMatrix::from_fn(types.len(), |i, j| {
        kernel_good.get(i, j) * (1.0 - y_by_type[j]) * mu[j]
    }))
}

pub fn build_profile(s: &Scenario, tol: f64) -> Result<PercolationProfile> {
    let types = s.types();
    let y_by_type = solve_giant_fixed_point(s.kernel_good(), types, tol)?;
    let y_aggregate = aggregate_giant_fraction(&y_by_type, types)?;
    let c_bad = small_component_sizes(&mean_offspring(s.kernel_bad(), types)?)?;
    let dual = dual_kernel(s.kernel_good(), &y_by_type, types)?;
    let c_good = small_component_sizes(&dual)?;
    Ok(PercolationProfile {
        y_by_type,
        y_aggregate,
        c_bad,
        c_good,
        dual,
    })
}

/// `sum_i S_i C^B(i)`.
pub fn expected_adoption_bad(plan: &SeedingPlan, profile: &PercolationProfile, s: &Scenario) -> Result<f64> {
    check_len("seeding plan", s.num_types(), plan.num_types())?;
    check_len("profile", s.num_types(), profile.num_types())?;
    Ok(plan.counts().iter().zip(&profile.c_bad).map(|(c, cb)| c * cb).sum())
}

/// Probability that none of the plan's seeds lands in the giant component.
pub fn giant_miss_probability(plan: &SeedingPlan, profile: &PercolationProfile) -> f64 {
    let log_miss: f64 = plan
        .counts()
        .iter()
        .zip(&profile.y_by_type)
        .filter(|(c, _)| **c > 0.0)
        .map(|(c, y)| c * (-y).ln_1p())
        .sum();
    log_miss.exp()
}

/// `(1 - prod_i (1 - y(i))^S_i) y n + sum_i S_i (1 - y(i)) C^G(i)`.
pub fn expected_adoption_good(plan: &SeedingPlan, profile: &PercolationProfile, s: &Scenario) -> Result<f64> {
    check_len("seeding plan", s.num_types(), plan.num_types())?;
    check_len("profile", s.num_types(), profile.num_types())?;
    let hit = 1.0 - giant_miss_probability(plan, profile);
    let small: f64 = plan
        .counts()
        .iter()
        .zip(profile.y_by_type.iter().zip(&profile.c_good))
        .map(|(c, (y, cg))| c * (1.0 - y) * cg)
        .sum();
    Ok(hit * profile.y_aggregate * s.n() as f64 + small)
}

/// `A^G - lambda A^B`.
pub fn designer_utility(plan: &SeedingPlan, profile: &PercolationProfile, s: &Scenario) -> Result<f64> {
    Ok(expected_adoption_good(plan, profile, s)? - s.lambda() * expected_adoption_bad(plan, profile, s)?)
}
