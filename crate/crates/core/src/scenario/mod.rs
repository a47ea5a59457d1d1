//! Scenario files, whole-day runs and report export.

mod file;
mod report;
mod run;

pub use file::{ClockTime, Scenario, BUNDLED};
pub use report::{export_report, improvement_pct, ExportedFiles, ReportFormat, RunReport, Summary, SummaryRow};
pub use run::{arrival_stream, run_scenario, run_with_stream, RunOptions, ScenarioRun};
