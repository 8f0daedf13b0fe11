//! Crate-wide error type.

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected} rows, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("row {row} has zero norm and cannot be normalized")]
    ZeroNormRow { row: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("matrices are not aligned to the same catalog")]
    MisalignedCatalog,
    #[error("input matrix is not l2-normalized")]
    UnnormalizedInput,
    #[error("manifest is missing item {0}")]
    MissingItem(String),
    #[error("duplicate item {0}")]
    DuplicateItem(String),
    #[error("unknown item {0}")]
    UnknownItem(String),
    #[error("unknown user {0}")]
    UnknownUser(String),
    #[error("unknown query {0}")]
    UnknownQuery(String),
    #[error("user {0} has a non-final test interaction")]
    TestNotLast(String),
    #[error("user {0} has more than one test interaction")]
    MultipleTestInteractions(String),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("parameter out of range: {0}")]
    InvalidParam(String),
    #[error("code {code} out of range at level {level} (codebook size {k})")]
    CodeOutOfRange { level: usize, code: u32, k: usize },
    #[error("code sequence has {got} levels, codebooks have {expected}")]
    LevelMismatch { expected: usize, got: usize },
    #[error("length mismatch: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },
    #[error("user {0} has no train interactions")]
    ColdUser(String),
    #[error("relevant set is empty")]
    EmptyRelevantSet,
    #[error("codes do not cover the catalog: {covered} of {expected} items")]
    CoverageGap { covered: usize, expected: usize },
    #[error("duplicate semantic id for items {a} and {b}")]
    DuplicateSemanticId { a: usize, b: usize },
    #[error("context has no vector for the requested space")]
    MissingProjection,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
