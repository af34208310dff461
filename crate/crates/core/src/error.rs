use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("rank deficient: {0}")]
    RankDeficient(String),
    #[error("not pure: {0}")]
    NotPure(String),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("no feasible iterate: {0}")]
    Infeasible(String),
    #[error("internal mismatch: {0}")]
    Mismatch(String),
}

impl Error {
    /// Process exit code: 2 for bad input, 3 for numerical degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Shape(_) | Error::Invalid(_) | Error::Parse(_) | Error::Unsupported(_) => 2,
            _ => 3,
        }
    }

    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Shape(_) => "shape_mismatch",
            Error::Invalid(_) => "invalid_input",
            Error::Parse(_) => "parse_error",
            Error::Unsupported(_) => "unsupported",
            Error::Singular(_) => "singular",
            Error::RankDeficient(_) => "rank_deficient",
            Error::NotPure(_) => "not_pure",
            Error::Degenerate(_) => "degenerate",
            Error::Infeasible(_) => "infeasible",
            Error::Mismatch(_) => "internal_mismatch",
        }
    }
}
