//! Scenario catalog, rate reports and their CSV / plot-data output.

mod catalog;
mod config;
mod emit;
mod report;
mod setup;

pub use catalog::{catalog_function, parse_call, table_function};
pub use config::{
    EmpiricalOptions, ProfileOverlay, ReportOptions, ScenarioConfig, ScenarioId,
};
pub use emit::{emit, parse_csv, to_csv, EmitFormat, CSV_HEADER};
pub use report::{
    fit_rate, run_scenario, run_scenario_full, Fit, FitModel, RateReport, ReportRow, ScenarioRun,
};
pub use setup::{build_setup, BoundKind, ScenarioSetup};
