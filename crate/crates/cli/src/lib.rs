//! Experiment driver for `irn-seeding`: scenario files, the `analyze`,
//! `optimize`, `simulate` and `sweep` commands, and their CSV reports.

pub mod commands;
pub mod report;
pub mod scenario_file;

pub use scenario_file::{emit_scenario, parse_scenario, parse_scenario_str, ScenarioError};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const FAILURE: u8 = 1;
    /// Reserved by clap for usage errors.
    pub const USAGE: u8 = 2;
    pub const PARSE_ERROR: u8 = 3;
    pub const PHASE_VIOLATION: u8 = 4;
    pub const UNBOUNDED_SEEDING: u8 = 5;
    pub const INVALID_SCENARIO: u8 = 6;
}

/// Maps an error chain onto an [`exit`] code.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    use irn_seeding::Error;
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<ScenarioError>() {
            match e {
                ScenarioError::Io { .. } | ScenarioError::Parse { .. } => return exit::PARSE_ERROR,
                ScenarioError::Invalid { .. } => {}
            }
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::PhaseViolation { .. } => exit::PHASE_VIOLATION,
                Error::UnboundedSeeding { .. } | Error::MarginalCostTooLow { .. } => exit::UNBOUNDED_SEEDING,
                Error::BadProportions(_)
                | Error::BadLabels(_)
                | Error::AsymmetricKernel { .. }
                | Error::InvalidKernelEntry { .. }
                | Error::DimensionMismatch { .. } => exit::INVALID_SCENARIO,
                _ => exit::FAILURE,
            };
        }
    }
    exit::FAILURE
}
