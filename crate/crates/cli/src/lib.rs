//! Command-line front end: curve-file parsing, pipeline orchestration with
//! precision escalation, report formatting, and corpus runs.

pub mod corpus;
pub mod error;
pub mod file;
pub mod pipeline;

pub use corpus::{run_corpus, CorpusSummary};
pub use error::CliError;
pub use file::{load_curve, parse_curve, CurveFile};
pub use pipeline::{run_report, Command, Report};
