use thiserror::Error;

/// Every failure the library can report.
///
/// Variants map onto the CLI exit codes through [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero series")]
    DivisionUndefined,
    #[error("constant term of {what} is {value}, expected +1 or -1")]
    NonUnitConstant { what: &'static str, value: String },

    #[error("vertex {0} lies in no facet")]
    GhostVertex(usize),
    #[error("vertex index {index} out of range 1..={m}")]
    BadIndex { index: usize, m: usize },
    #[error("vertex count {0} is outside the supported range 1..=32")]
    BadVertexCount(usize),
    #[error("empty vertex subset")]
    EmptySubset,
    #[error("vertex {0} is dominating; the pushout would not shrink the complex")]
    DominatingVertex(usize),

    #[error("join leaves a cell in degree {0}; the result is not simply connected")]
    NotSimplyConnectedOutput(usize),
    #[error("invalid cell series: {0}")]
    InvalidCells(String),
    #[error("basic-product count in degree {0} would be negative")]
    NoSolution(usize),
    #[error("series is not a canonical product at degree {0}")]
    NotCanonicalP(usize),
    #[error("quotient has a negative coefficient in degree {0}")]
    NotADivisor(usize),

    #[error("complex is not a skeleton of a flag complex")]
    NotFlagSkeleton,
    #[error("pair data covers {given} vertices, complex has {m}")]
    PairMismatch { given: usize, m: usize },
    #[error("invalid pair specification: {0}")]
    InvalidPairs(String),

    #[error("matrix is not idempotent")]
    NotIdempotent,
    #[error("matrix is not square or rows have unequal length")]
    BadShape,
    #[error("zero vector has no primitive gcd")]
    ZeroVector,

    #[error("complex has {m} vertices, above the oracle bound {bound}")]
    TooLarge { m: usize, bound: usize },
    #[error("no independent oracle applies: {0}")]
    NotApplicable(String),

    #[error("input error: {0}")]
    Input(String),
    #[error("internal check failed: {0}")]
    InternalCheck(String),
}

impl Error {
    /// Process exit status for the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotFlagSkeleton => 2,
            Error::NotADivisor(_) | Error::NotCanonicalP(_) | Error::NoSolution(_) | Error::InternalCheck(_) => 3,
            _ => 1,
        }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionUndefined => "DivisionUndefined",
            Error::NonUnitConstant { .. } => "NonUnitConstant",
            Error::GhostVertex(_) => "GhostVertex",
            Error::BadIndex { .. } => "BadIndex",
            Error::BadVertexCount(_) => "BadVertexCount",
            Error::EmptySubset => "EmptySubset",
            Error::DominatingVertex(_) => "DominatingVertex",
            Error::NotSimplyConnectedOutput(_) => "NotSimplyConnectedOutput",
            Error::InvalidCells(_) => "InvalidCells",
            Error::NoSolution(_) => "NoSolution",
            Error::NotCanonicalP(_) => "NotCanonicalP",
            Error::NotADivisor(_) => "NotADivisor",
            Error::NotFlagSkeleton => "NotFlagSkeleton",
            Error::PairMismatch { .. } => "PairMismatch",
            Error::InvalidPairs(_) => "InvalidPairs",
            Error::NotIdempotent => "NotIdempotent",
            Error::BadShape => "BadShape",
            Error::ZeroVector => "ZeroVector",
            Error::TooLarge { .. } => "TooLarge",
            Error::NotApplicable(_) => "NotApplicable",
            Error::Input(_) => "InputError",
            Error::InternalCheck(_) => "InternalCheckFailed",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
