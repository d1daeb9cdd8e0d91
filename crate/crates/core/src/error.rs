use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unsupported spatial dimension d={0}; solvers are implemented for d=2 only")]
    UnsupportedDimension(usize),

    #[error("size mismatch: expected {expected} samples, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("field is not Hermitian: imaginary residue {residue:e} after inverse transform")]
    NonHermitian { residue: f64 },

    #[error("axis {axis} out of range for d={d}")]
    AxisOutOfRange { axis: usize, d: usize },

    #[error("invalid Besov index: {0}")]
    InvalidBesovIndex(String),

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("density 1+a is nonpositive (min {min_density:e})")]
    SingularDensity { min_density: f64 },

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("blow-up at t={time}: {reason}")]
    BlowUp { time: f64, reason: String },

    #[error("time regression: sample at t={t} after t={last}")]
    TimeRegression { t: f64, last: f64 },

    #[error("mismatched timelines: {0}")]
    MismatchedTimelines(String),

    #[error("empty trajectory")]
    EmptyTrajectory,

    #[error("unknown initial-data family `{0}`")]
    UnknownFamily(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("checkpoint: bad magic bytes")]
    BadMagic,

    #[error("checkpoint: truncated file ({0})")]
    Truncated(String),

    #[error("checkpoint: dimension mismatch ({0})")]
    DimensionMismatch(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}

impl Error {
    /// Process exit code: 2 configuration, 3 blow-up, 4 I/O, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::InvalidParameter { .. }
            | Error::UnknownFamily(_)
            | Error::InvalidGrid(_)
            | Error::UnsupportedDimension(_)
            | Error::InvalidBesovIndex(_) => 2,
            Error::BlowUp { .. } | Error::SingularDensity { .. } => 3,
            Error::Io(_)
            | Error::Json(_)
            | Error::BadMagic
            | Error::Truncated(_)
            | Error::DimensionMismatch(_) => 4,
            _ => 1,
        }
    }
}
