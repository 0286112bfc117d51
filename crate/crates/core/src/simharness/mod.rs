//! Monte Carlo evaluation of the interval methods and the file-level
//! analysis entry points used by the command-line tool.

mod analyze;
mod config;
mod report;
mod run;

pub use analyze::{analyze_file, AnalysisReport, AnalyzeOptions};
pub use config::{DeffSource, SimulationConfig, DEFAULT_REPLICATES, FAST_REPLICATES};
pub use report::{emit_report, parse_report_csv, ReportFormat, ReportRow, REPORT_HEADER};
pub use run::{
    cell_seed, draw_replicate, draw_sample, method_interval, population_seed, run_simulation,
    CellResult, SampleDesign, SimulationReport,
};
