use crate::germ::{ParseError, TableError, ValidationError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("{left} and {right} do not share a source")]
    SourceMismatch { left: String, right: String },
    #[error("{divisor} does not left-divide {of}")]
    NotADivisor { divisor: String, of: String },
    #[error("word is not composable at position {position}")]
    NotComposable { position: usize },
    #[error("endpoint mismatch: {left} ends at {left_target}, {right} starts at {right_source}")]
    EndpointMismatch {
        left: String,
        left_target: String,
        right: String,
        right_source: String,
    },
    #[error("element is not a loop: {0}")]
    NotALoop(String),
    #[error("word exceeds the limit of {limit} factors")]
    WordTooLong { limit: usize },
    #[error("computation limit exceeded: {what} (budget {budget})")]
    LimitExceeded { what: &'static str, budget: usize },
    #[error("word syntax: {0}")]
    WordSyntax(String),
    #[error("not an automorphism of the Garside structure: {0}")]
    NotAutomorphism(String),
    #[error("no object is fixed by the automorphism")]
    NoFixedObjects,
    #[error("{family}: parameter {param} out of range {min}..={max}")]
    OutOfRange {
        family: &'static str,
        param: i64,
        min: i64,
        max: i64,
    },
    #[error("unknown builtin family {0:?}")]
    UnknownBuiltin(String),
    #[error("builtin family {family} needs {what}")]
    MissingParameter { family: &'static str, what: &'static str },
    #[error("p = {p} is not congruent to 1 modulo q = {q}")]
    NotOneModQ { p: i64, q: usize },
    #[error("fitted polynomial has degree {degree}, above the Garside dimension {dimension}")]
    DegreeTooHigh { degree: usize, dimension: usize },
    #[error("{samples} samples are too few; at least {needed} are needed")]
    TooFewSamples { samples: usize, needed: usize },
    #[error("interpolation predicts {predicted} at m = {m} but {counted} were counted")]
    PredictionMismatch { m: usize, predicted: i128, counted: i128 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
