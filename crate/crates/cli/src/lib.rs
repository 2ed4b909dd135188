//! Scenario ingestion, evolution reports and the invariant suite behind the
//! `qentropy` command-line tool.

pub mod error;
pub mod report;
pub mod scenario;
pub mod suite;

pub use error::{CliError, Result};
pub use report::{run_perturbation, run_rabi, run_scenario, EvolutionReport, Table};
pub use scenario::{parse_scenario, ScenarioDocument, ScenarioSpec};
pub use suite::{run_invariant_suite, SuiteConfig, SuiteReport};
