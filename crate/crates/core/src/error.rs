use thiserror::Error;

use crate::field::{Field, Scalar};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different fields ({0} vs {1})")]
    MixedFields(Field, Field),

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),

    #[error("unrecognised field descriptor `{0}` (expected `Q` or `GF(p)`)")]
    BadField(String),

    #[error("token `{token}` is not a valid scalar over {field}")]
    BadScalar { token: String, field: Field },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular (det = {det})")]
    Singular { det: Scalar },

    #[error("index {index} out of range for {len} blocks")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("block power {k} exceeds the cap {cap} for dimension {n}")]
    BlockPowerCap { k: usize, n: usize, cap: usize },

    #[error("NotInA0: det B(A) = {det_b}")]
    NotInA0 { det_b: Scalar },

    #[error("PSingular: det P(A) = {det_p}")]
    PSingular { det_p: Scalar },

    #[error("TooLarge: {0}")]
    TooLarge(String),

    #[error("brute force needs a finite field, got {0}")]
    InfiniteField(Field),

    #[error("FieldTooSmall: {field} needs more than {needed} elements for dimension {n}")]
    FieldTooSmall { field: Field, n: usize, needed: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ConstructionFailed: {0}")]
    ConstructionFailed(String),
}

impl Error {
    /// Whether this is a refusal by the mathematics (the input is outside the
    /// domain of a procedure) rather than a malformed request.
    pub fn is_domain_refusal(&self) -> bool {
        matches!(
            self,
            Error::NotInA0 { .. }
                | Error::PSingular { .. }
                | Error::TooLarge(_)
                | Error::InfiniteField(_)
                | Error::FieldTooSmall { .. }
                | Error::ConstructionFailed(_)
        )
    }

    /// Short refusal name used in reports.
    pub fn refusal_name(&self) -> &'static str {
        match self {
            Error::NotInA0 { .. } => "NotInA0",
            Error::PSingular { .. } => "PSingular",
            Error::TooLarge(_) => "TooLarge",
            Error::InfiniteField(_) => "InfiniteField",
            Error::FieldTooSmall { .. } => "FieldTooSmall",
            Error::ConstructionFailed(_) => "ConstructionFailed",
            Error::MixedFields(..) => "MixedFields",
            Error::DivisionByZero => "DivisionByZero",
            Error::NotPrime(_) => "NotPrime",
            Error::BadField(_) => "BadField",
            Error::BadScalar { .. } => "FieldMismatch",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotSquare { .. } => "NotSquare",
            Error::Singular { .. } => "Singular",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::BlockPowerCap { .. } => "BlockPowerCap",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
