use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("monomial {exponent:?} has degree {got}, expected {expected}")]
    NotHomogeneous {
        exponent: Vec<u32>,
        expected: u32,
        got: u32,
    },

    #[error("monomial {exponent:?} has degree {got}, exceeding target degree {target}")]
    DegreeExceeded {
        exponent: Vec<u32>,
        target: u32,
        got: u32,
    },

    #[error("point is not on the standard simplex")]
    NotOnSimplex,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("cannot parse {0:?} as an exact rational")]
    ParseRational(String),

    #[error("degenerate range: the enclosures cannot separate the maximum from the minimum")]
    DegenerateRange,

    #[error("search space of {size} points exceeds the limit of {limit}")]
    TooLarge { size: u128, limit: u128 },
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }
}
