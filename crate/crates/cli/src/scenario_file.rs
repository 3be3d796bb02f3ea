//! TOML scenario files.
//!
//! ```toml
//! lambda = 1.0
//! n = 1000000
//!
//! [types]
//! labels = ["all"]
//! mu = [1.0]
//!
//! [kernel_good]
//! rows = [[2.0]]
//!
//! [kernel_bad]
//! rows = [[0.5]]
//! ```

use std::path::{Path, PathBuf};

use irn_seeding::{Error, Kernel, Scenario, TypeSpace};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {origin}: {message}")]
    Parse { origin: String, message: String },

    #[error("invalid field `{field}`: {source}")]
    Invalid {
        field: &'static str,
        #[source]
        source: Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    lambda: f64,
    n: u64,
    types: TypesSection,
    kernel_good: MatrixSection,
    kernel_bad: MatrixSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TypesSection {
    labels: Vec<String>,
    mu: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixSection {
    rows: Vec<Vec<f64>>,
}

pub fn parse_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_scenario_str(&text, &path.display().to_string())
}

/// Parses scenario text; `origin` names the source in error messages.
pub fn parse_scenario_str(text: &str, origin: &str) -> Result<Scenario, ScenarioError> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| ScenarioError::Parse {
        origin: origin.to_owned(),
        message: e.to_string(),
    })?;
    let invalid = |field| move |source| ScenarioError::Invalid { field, source };

    let types = TypeSpace::new(file.types.labels, file.types.mu).map_err(invalid("types"))?;
    let good = Kernel::from_rows(&file.kernel_good.rows).map_err(invalid("kernel_good"))?;
    let bad = Kernel::from_rows(&file.kernel_bad.rows).map_err(invalid("kernel_bad"))?;
    Scenario::new(types, good, bad, file.lambda, file.n).map_err(|source| {
        let field = match &source {
            Error::DimensionMismatch { context, .. } if *context == "kernel_bad" => "kernel_bad",
            Error::DimensionMismatch { .. } => "kernel_good",
            Error::PhaseViolation { kernel: "bad", .. } => "kernel_bad",
            Error::PhaseViolation { .. } => "kernel_good",
            Error::InvalidArgument(msg) if msg.starts_with("lambda") => "lambda",
            Error::InvalidArgument(_) => "n",
            _ => "scenario",
        };
        ScenarioError::Invalid { field, source }
    })
}

/// Serializes a scenario so that [`parse_scenario_str`] reproduces it exactly.
pub fn emit_scenario(s: &Scenario) -> String {
    let file = ScenarioFile {
        lambda: s.lambda(),
        n: s.n(),
        types: TypesSection {
            labels: s.types().labels().to_vec(),
            mu: s.types().mu().to_vec(),
        },
        kernel_good: MatrixSection {
            rows: s.kernel_good().rows(),
        },
        kernel_bad: MatrixSection {
            rows: s.kernel_bad().rows(),
        },
    };
    toml::to_string(&file).expect("scenario fields are always representable in TOML")
}
