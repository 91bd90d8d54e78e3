//! Classification pipeline, report schema, matrix files and corpus
//! generators for the `epclass` tool.

pub mod format;
pub mod generate;
pub mod pipeline;
pub mod report;

pub use format::{parse_matrix, read_matrix_file, to_text};
pub use pipeline::{classify, classify_batch, classify_matrix, verify_geometry, ClassifyOptions};
pub use report::{ClassificationReport, Conclusion};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] epclass_core::Error),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl CliError {
    /// 1 for bad input, 2 for a failed internal check.
    pub fn exit_code(&self) -> u8 {
        use epclass_core::Error as E;
        match self {
            CliError::Consistency(_)
            | CliError::Core(E::Consistency(_) | E::NoConvergence(_) | E::PrecisionExhausted { .. }) => 2,
            _ => 1,
        }
    }
}
