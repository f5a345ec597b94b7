use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid support: {0}")]
    InvalidSupport(String),
    #[error("degenerate support: {0}")]
    DegenerateSupport(String),
    #[error("index set {0:?} is not transversal: its forms have no unique common zero")]
    NonTransversal(Vec<usize>),
    #[error("{0} is not a prime below 2^64")]
    InvalidPrime(String),
    #[error("form {form} vanishes at the evaluation point")]
    UndefinedPoint { form: usize },
    #[error("tropical form {row} has no finite term")]
    UndefinedTropicalForm { row: usize },
    #[error("parametric map is under-determined at variable {variable}")]
    Underdetermined { variable: usize },
    #[error("degenerate family: {0}")]
    DegenerateFamily(String),
    #[error("forms {0} and {1} have the same zero")]
    RepeatedZero(usize, usize),
    #[error("resolution {resolution} too coarse; need at most {limit}")]
    ResolutionTooCoarse { resolution: String, limit: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for errors caused by inputs that violate the general-position assumptions.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::InvalidSupport(_)
                | Error::DegenerateSupport(_)
                | Error::NonTransversal(_)
                | Error::UndefinedPoint { .. }
                | Error::UndefinedTropicalForm { .. }
                | Error::Underdetermined { .. }
                | Error::DegenerateFamily(_)
                | Error::RepeatedZero(..)
        )
    }
}
