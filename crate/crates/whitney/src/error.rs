//! Engine-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    // field layer
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {q} out of range (require 2 <= q <= 65536)")]
    FieldSizeOutOfRange { q: u64 },
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("inversion of zero field element")]
    ZeroInverse,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix dimensions do not match: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    // group layer
    #[error("group order {order} exceeds the enumeration budget {budget}; use import-chartab for externally computed character data")]
    BudgetExceeded { order: u64, budget: u64 },
    #[error("generator closure produced {found} elements, expected {expected}")]
    GenerationFailure { found: u64, expected: u64 },
    #[error("subgroup `{name}` is not defined for {family}")]
    InvalidSubgroup { name: String, family: String },
    #[error("distinguished element `{0}` not found in enumerated group")]
    MissingDistinguished(String),

    // character layer
    #[error("no prime l = 1 mod {m} with l > {lower} found below search bound {bound}")]
    NoSuitablePrime { m: u64, lower: u64, bound: u64 },
    #[error("eigenspace splitting failed to fully separate characters (class data corruption?)")]
    SplittingFailure,
    #[error("class function is not a character: {reason}")]
    NotACharacter { reason: String },
    #[error("class function is not orthogonal: {reason}")]
    NotOrthogonal { reason: String },
    #[error("character table validation failed: {0}")]
    TableValidation(String),
    #[error("character data import rejected: {0}")]
    ImportRejected(String),
    #[error("class tagged `{0}` is required by this evaluator but missing")]
    MissingClassTag(String),

    // cohomology layer
    #[error("elements belong to different ring presentations")]
    MixedPresentations,
    #[error("invalid ring preset parameter: {0}")]
    InvalidPreset(String),
    #[error("ring map is malformed: {0}")]
    MalformedRingMap(String),

    // evaluators
    #[error("exponent {name} = {num}/{den} is not a nonnegative integer")]
    NonIntegralExponent { name: String, num: i64, den: i64 },
    #[error("character value at `{tag}` is not a rational integer")]
    IrrationalValue { tag: String },
    #[error("no Stiefel-Whitney theorem applies to {family}")]
    UnsupportedFamily { family: String },
    #[error("theorem self-consistency violated: {0}")]
    TheoremInconsistency(String),

    #[error("selector out of range: {0}")]
    SelectorOutOfRange(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
