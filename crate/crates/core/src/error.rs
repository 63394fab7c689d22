use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("axis needs at least {min} nodes, got {got}")]
    TooFewNodes { min: usize, got: usize },

    #[error("domain bounds must be finite and increasing")]
    BadBounds,

    #[error("field has {got} values but the grid has {expected} nodes")]
    FieldLength { expected: usize, got: usize },

    #[error("non-finite value at node {0}")]
    NonFinite(usize),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("field is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("kernel width {width} exceeds a quarter of the domain span {span}")]
    KernelTooWide { width: f64, span: f64 },

    #[error("kernel is not a transfer probability: {0}")]
    KernelNotStochastic(String),

    #[error("channel validity constraint violated: {0}")]
    InvalidChannel(String),

    #[error("negative value {value:e} at node {index}")]
    NegativeValue { index: usize, value: f64 },

    #[error("density vanishes at node {0} where the current does not")]
    VanishingDensity(usize),

    #[error("matrix is not hermitian (residual {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("no correlation entry for ({0}, {1})")]
    MissingCorrelation(String, String),

    #[error("quantity labels do not match: {0}")]
    LabelMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// True for violations of a physical validity constraint, as opposed to
    /// malformed input.
    pub fn is_validity_violation(&self) -> bool {
        matches!(
            self,
            Error::InvalidChannel(_) | Error::KernelTooWide { .. } | Error::VanishingDensity(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
