use thiserror::Error;

/// Errors surfaced by instance parsing, circuit construction, and simulation.
#[derive(Debug, Error)]
pub enum Error {
    /// The coloring instance itself is malformed (bad vertex count, k < 2, ...).
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// A text input (instance file or circuit file) failed to parse.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A gate violates the IR rules (index out of range, control/target overlap).
    #[error("invalid gate: {0}")]
    IrValidation(String),

    /// A builder was asked for a size outside its supported range.
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    /// A module was requested for a layout compiled in the other reset mode.
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),

    /// An enumeration or simulation cap would be exceeded.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A basis-state evaluation hit a gate without classical semantics.
    #[error("non-classical gate: {0}")]
    NonClassical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
