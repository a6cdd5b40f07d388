use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distribution has no mass")]
    EmptyDistribution,
    #[error("negative or non-finite weight {value} at level {index}")]
    NegativeWeight { index: usize, value: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("model {0} does not apply here")]
    WrongModel(String),
    #[error("cohorts are not comparable: {0}")]
    IncomparableCohorts(String),
    #[error("degenerate figure: {0}")]
    DegenerateFigure(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: score {score} outside [0, 100]")]
    Range { line: usize, score: f64 },
    #[error("line {line}: duplicate student {student:?}")]
    DuplicateStudent { line: usize, student: String },
    #[error("invalid grade scheme: {0}")]
    InvalidScheme(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
