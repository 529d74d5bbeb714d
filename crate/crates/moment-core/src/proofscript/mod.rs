//! Replay of the classification arguments as ordered, named checks.
//!
//! The expected expressions live in JSON data files transcribed from the
//! source displays, one file per theorem; the runner executes each check
//! through the symbolic kernel and the derivation contexts and compares
//! against the expectations under cross-multiplication equality. Reports
//! are machine readable and deterministic.

mod report;
mod runner;
mod schema;
pub mod scripts;

pub use report::{render_report, ReportFormat};
pub use runner::{run_script, run_theorem, TheoremOutcome};
pub use schema::{CheckReport, CheckSpec, CheckStatus, Procedure, Script, ScriptError};
