use thiserror::Error;

/// Errors raised by the algebra, curve and representation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("zero assigned to the unit variable {0}")]
    ZeroUnit(&'static str),
    #[error("rule {lhs} is not compatible with the term order: {offending} is not below it")]
    OrderViolation { lhs: String, offending: String },
    #[error("reduction exceeded the budget of {0} rule applications")]
    StepBudget(usize),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("element is not in the span of the curve table up to bound {0}")]
    NotInSpan(usize),
    #[error("recursion depth exceeded while realizing ({0}, {1})")]
    RecursionDepth(i64, i64),
    #[error("no closed form covers {0}")]
    UncoveredFamily(String),
    #[error("missing discrepancy leaf {0}")]
    MissingLeaf(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("sampler exhausted its resample budget after {0} attempts")]
    ResampleBudget(usize),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("independent computations disagree: {0}")]
    Disagreement(String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
