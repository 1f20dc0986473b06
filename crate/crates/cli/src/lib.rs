//! Command-line front end: JSON problem and model files in, JSON reports and
//! polytope files out.

pub mod commands;
pub mod error;
pub mod format;
pub mod json;
pub mod report;

pub use commands::{cmd_bound, cmd_synthesize, cmd_verify, Model, SynthesisOutput};
pub use error::CliError;
pub use format::{ModelFile, PolytopeFile, ProblemFile};
pub use report::{RunReport, Verdict};

/// Exit status for malformed input and library errors.
pub const EXIT_ERROR: i32 = 2;
