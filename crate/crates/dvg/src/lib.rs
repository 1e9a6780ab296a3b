//! Problem files, the analysis chain, reports and their independent recheck.

pub mod analyze;
pub mod problem;
pub mod recheck;
pub mod report;
pub mod text;

pub use analyze::{analyze, Overrides};
pub use problem::{InvalidInput, ProblemSpec};
pub use recheck::{recheck, recheck_text, RecheckOutcome};
pub use report::AnalysisReport;
