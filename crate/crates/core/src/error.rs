use thiserror::Error;

use crate::matroid::ExchangeViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable index {index} is outside 1..={n}")]
    VariableOutOfRange { index: usize, n: usize },

    #[error("{0} variables requested; monomials are limited to 64 variables")]
    TooManyVariables(usize),

    #[error("ambient variable counts differ ({0} vs {1})")]
    AmbientMismatch(usize, usize),

    #[error("product term {0} is not square-free")]
    NonSquareFree(String),

    #[error("supports overlap on x{0}")]
    OverlappingSupports(usize),

    #[error("support of the ideal is not all of x1..x{n}")]
    SupportNotFull { n: usize },

    #[error("the unit ideal is not accepted here")]
    UnitIdeal,

    #[error("the zero ideal is not accepted here")]
    ZeroIdeal,

    #[error("generators have mixed degrees {0} and {1}")]
    MixedDegrees(usize, usize),

    #[error("exchange condition fails: {0}")]
    NotMatroidal(ExchangeViolation),

    #[error("degree {found} given where degree {expected} is required")]
    WrongDegree { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("Groebner basis computation exceeded {0} S-pairs")]
    GroebnerBudget(usize),

    #[error("certificate is malformed: {0}")]
    MalformedCertificate(String),

    #[error("enumeration space too large: C({n},{d}) = {candidates} > 24")]
    EnumerationTooLarge { n: usize, d: usize, candidates: usize },

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}
