use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("not a sequence: residual {residual:e} exceeds bound {bound:e}")]
    NotASequence { residual: f64, bound: f64 },

    #[error("invalid gram matrix: {0}")]
    InvalidGram(String),

    #[error("invalid grid: {}", .0.join("; "))]
    InvalidGrid(Vec<String>),

    #[error("unsupported boundary condition: {0}")]
    UnsupportedBc(String),

    #[error("unsupported dimension {0}")]
    UnsupportedDim(usize),

    #[error("trivial range: no Poincaré constant")]
    TrivialRange,

    #[error("aliasing: frequency {k} times mode {mode} is not below N/2 = {half}")]
    Aliasing { k: u32, mode: u32, half: f64 },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("expression error: {0}")]
    Expression(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("matrix market: {0}")]
    MatrixMarket(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SpaceMismatch(_) => "SpaceMismatch",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotASequence { .. } => "NotASequence",
            Error::InvalidGram(_) => "InvalidGram",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::UnsupportedBc(_) => "UnsupportedBC",
            Error::UnsupportedDim(_) => "UnsupportedDim",
            Error::TrivialRange => "TrivialRange",
            Error::Aliasing { .. } => "Aliasing",
            Error::InvalidFamily(_) => "InvalidFamily",
            Error::Expression(_) => "Expression",
            Error::Precondition(_) => "Precondition",
            Error::MatrixMarket(_) => "MatrixMarket",
            Error::Csv(_) => "Csv",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
