use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse { message: String, line: usize, column: usize },

    #[error("invalid config: {}", .0.join("; "))]
    Invalid(Vec<String>),

    #[error("usage: {0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] hilbert_complex::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ConfigParse",
            CliError::Invalid(_) => "InvalidConfig",
            CliError::Usage(_) => "Usage",
            CliError::Read { .. } => "Io",
            CliError::Core(e) => e.kind(),
        }
    }

    /// 2 for failed numerical assertions, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(hilbert_complex::Error::NotASequence { .. }) => 2,
            _ => 1,
        }
    }

    /// Payload printed on standard error.
    pub fn to_json(&self) -> Value {
        let mut v = json!({ "error": self.kind(), "message": self.to_string() });
        match self {
            CliError::Parse { line, column, .. } => {
                v["line"] = json!(line);
                v["column"] = json!(column);
            }
            CliError::Invalid(list) => v["violations"] = json!(list),
            CliError::Read { path, .. } => v["path"] = json!(path),
            CliError::Core(hilbert_complex::Error::NotASequence { residual, bound }) => {
                v["residual"] = json!(residual);
                v["bound"] = json!(bound);
            }
            CliError::Core(hilbert_complex::Error::InvalidGrid(list)) => v["violations"] = json!(list),
            _ => {}
        }
        v
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
