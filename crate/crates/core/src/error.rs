use thiserror::Error;

/// Errors produced by the analytic, optimization and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("kernel is not symmetric: entry ({row}, {col}) = {value} but ({col}, {row}) = {mirror}")]
    AsymmetricKernel {
        row: usize,
        col: usize,
        value: f64,
        mirror: f64,
    },

    #[error("invalid kernel entry ({row}, {col}) = {value}: entries must be finite and non-negative")]
    InvalidKernelEntry { row: usize, col: usize, value: f64 },

    #[error("invalid type proportions: {0}")]
    BadProportions(String),

    #[error("invalid type labels: {0}")]
    BadLabels(String),

    #[error("phase violation: {kernel} kernel has spectral radius {radius}, expected {expected}")]
    PhaseViolation {
        kernel: &'static str,
        radius: f64,
        expected: &'static str,
    },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("giant-component fixed point collapsed to zero despite a supercritical kernel")]
    DegenerateSolution,

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error(
        "marginal cost {marginal_cost} never exceeds the small-component benefit {small_benefit}; \
         seeding is unbounded"
    )]
    MarginalCostTooLow {
        marginal_cost: f64,
        small_benefit: f64,
    },

    #[error(
        "unbounded seeding: type {type_index} has non-positive net marginal cost {net_cost} \
         (lambda*C^B - (1-y)*C^G), so every extra seed of it pays off"
    )]
    UnboundedSeeding { type_index: usize, net_cost: f64 },

    #[error("brute-force enumeration limited to {max_types} types and budget {max_budget}; got {types} types, budget {budget}")]
    BudgetTooLarge {
        types: usize,
        budget: u64,
        max_types: usize,
        max_budget: u64,
    },

    #[error("plan asks for {requested} seeds of type {type_index} but only {available} nodes exist")]
    InsufficientNodes {
        type_index: usize,
        requested: u64,
        available: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
