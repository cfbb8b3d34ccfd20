use thiserror::Error;

use crate::formal::Space;

/// Stable machine-readable error codes shared by the library, the CLI
/// report format and the C ABI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErrorCode {
    Syntax,
    UnboundIdentifier,
    TypeMismatch,
    SpaceMismatch,
    DimensionMismatch,
    DegreeMismatch,
    KnownOrderExhausted,
    NotInvertible,
    NotLocal,
    DegenerateInterval,
    NotNormalized,
    MissingConfiguration,
    NotCompactlySupported,
    InvalidArgument,
    ResidualNonzero,
    Io,
    Internal,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 17] = [
        ErrorCode::Syntax,
        ErrorCode::UnboundIdentifier,
        ErrorCode::TypeMismatch,
        ErrorCode::SpaceMismatch,
        ErrorCode::DimensionMismatch,
        ErrorCode::DegreeMismatch,
        ErrorCode::KnownOrderExhausted,
        ErrorCode::NotInvertible,
        ErrorCode::NotLocal,
        ErrorCode::DegenerateInterval,
        ErrorCode::NotNormalized,
        ErrorCode::MissingConfiguration,
        ErrorCode::NotCompactlySupported,
        ErrorCode::InvalidArgument,
        ErrorCode::ResidualNonzero,
        ErrorCode::Io,
        ErrorCode::Internal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Syntax => "E001-syntax",
            ErrorCode::UnboundIdentifier => "E002-unbound-identifier",
            ErrorCode::TypeMismatch => "E003-type-mismatch",
            ErrorCode::SpaceMismatch => "E004-space-mismatch",
            ErrorCode::DimensionMismatch => "E005-dimension-mismatch",
            ErrorCode::DegreeMismatch => "E006-degree-mismatch",
            ErrorCode::KnownOrderExhausted => "E007-known-order-exhausted",
            ErrorCode::NotInvertible => "E008-not-invertible",
            ErrorCode::NotLocal => "E009-not-local",
            ErrorCode::DegenerateInterval => "E010-degenerate-interval",
            ErrorCode::NotNormalized => "E011-not-normalized",
            ErrorCode::MissingConfiguration => "E012-missing-configuration",
            ErrorCode::NotCompactlySupported => "E013-not-compactly-supported",
            ErrorCode::InvalidArgument => "E014-invalid-argument",
            ErrorCode::ResidualNonzero => "E015-residual-nonzero",
            ErrorCode::Io => "E016-io",
            ErrorCode::Internal => "E099-internal",
        }
    }

    /// Numeric form used across the C ABI. Zero is reserved for success.
    pub fn as_i32(self) -> i32 {
        match self {
            ErrorCode::Syntax => 1,
            ErrorCode::UnboundIdentifier => 2,
            ErrorCode::TypeMismatch => 3,
            ErrorCode::SpaceMismatch => 4,
            ErrorCode::DimensionMismatch => 5,
            ErrorCode::DegreeMismatch => 6,
            ErrorCode::KnownOrderExhausted => 7,
            ErrorCode::NotInvertible => 8,
            ErrorCode::NotLocal => 9,
            ErrorCode::DegenerateInterval => 10,
            ErrorCode::NotNormalized => 11,
            ErrorCode::MissingConfiguration => 12,
            ErrorCode::NotCompactlySupported => 13,
            ErrorCode::InvalidArgument => 14,
            ErrorCode::ResidualNonzero => 15,
            ErrorCode::Io => 16,
            ErrorCode::Internal => 99,
        }
    }
}

impl std::fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch { left: Space, right: Space },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("known order exhausted: need {needed}, only {available} known")]
    KnownOrderExhausted { needed: u32, available: u32 },
    #[error("value at the basepoint is zero; not invertible in the stalk")]
    NotInvertible,
    #[error("y-pullback {index} has a nonzero reduction")]
    NotLocal { index: usize },
    #[error("degenerate interval [{lo}, {hi}]")]
    DegenerateInterval { lo: String, hi: String },
    #[error("profile integral is {integral}, expected 1")]
    NotNormalized { integral: String },
    #[error("missing configuration: {0}")]
    MissingConfiguration(String),
    #[error("not compactly supported: {0}")]
    NotCompactlySupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("nonzero residual: {0}")]
    ResidualNonzero(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub fn code(&self) -> ErrorCode {
        match self {
            Error::SpaceMismatch { .. } => ErrorCode::SpaceMismatch,
            Error::DimensionMismatch { .. } => ErrorCode::DimensionMismatch,
            Error::DegreeMismatch { .. } => ErrorCode::DegreeMismatch,
            Error::KnownOrderExhausted { .. } => ErrorCode::KnownOrderExhausted,
            Error::NotInvertible => ErrorCode::NotInvertible,
            Error::NotLocal { .. } => ErrorCode::NotLocal,
            Error::DegenerateInterval { .. } => ErrorCode::DegenerateInterval,
            Error::NotNormalized { .. } => ErrorCode::NotNormalized,
            Error::MissingConfiguration(_) => ErrorCode::MissingConfiguration,
            Error::NotCompactlySupported(_) => ErrorCode::NotCompactlySupported,
            Error::InvalidArgument(_) => ErrorCode::InvalidArgument,
            Error::ResidualNonzero(_) => ErrorCode::ResidualNonzero,
            Error::Internal(_) => ErrorCode::Internal,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
