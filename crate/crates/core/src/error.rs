use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: generator order violated: {message}")]
    IndexOrdering { line: usize, message: String },
    #[error("line {line}: duplicate relation {message}")]
    DuplicateRelation { line: usize, message: String },
    #[error("invalid json presentation: {0}")]
    Json(String),
    #[error("generator index {index} out of range for {count} generators")]
    BadIndex { index: usize, count: usize },
    #[error("collection exceeded its budget of {0} steps")]
    CollectionBudget(usize),
    #[error("presentation is inconsistent ({0} failing overlaps)")]
    Inconsistent(usize),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("value is not central: {0}")]
    NonCentral(String),
    #[error("unsupported instance: {0}")]
    Unsupported(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("group is not q-perfect for q = {0}")]
    NotQPerfect(u32),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("presentation is not abelian")]
    NonAbelian,
    #[error("group too large: {0}")]
    TooLarge(String),
}
