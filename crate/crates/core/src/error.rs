use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("model mismatch: operands live on different group models")]
    ModelMismatch,

    #[error("malformed irrep table: {0}")]
    MalformedTable(String),

    #[error("irrep dimension sum mismatch: sum of squared dimensions is {found}, group order is {expected}")]
    DimensionSum { found: usize, expected: usize },

    #[error("irrep `{label}` is not unitary at element `{element}`")]
    NonUnitary { label: String, element: String },

    #[error("irrep `{label}` is not a homomorphism at ({left}, {right})")]
    Homomorphism {
        label: String,
        left: String,
        right: String,
    },

    #[error("irrep `{label}` fails Schur orthogonality against `{other}`")]
    Orthogonality { label: String, other: String },

    #[error("numerical failure in block `{label}`: {reason}")]
    Numerical { label: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
