//! Scenario runner for `eqdsing-core`: loads JSON scenarios, runs the
//! requested tasks and emits JSON reports, DOT quivers and text tables.

pub mod report;
pub mod run;
pub mod scenario;

pub use report::{emit_dot, emit_report_json, parse_report_json, Report};
pub use run::run_scenario;
pub use scenario::{load_scenario, parse_scenario, Scenario};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] eqdsing_core::Error),
}
