use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected g = {expected}, got g = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid signed permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid translation vector: {0}")]
    InvalidTranslation(String),

    #[error("cannot parse element {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid parahoric type: {0}")]
    InvalidParahoric(String),

    #[error("unsupported rank g = {g}: {reason}")]
    UnsupportedRank { g: usize, reason: String },

    #[error("{0} is not admissible for the parahoric level")]
    NotAdmissible(String),

    #[error("position {0} is not symplectic (must lie in gZ and in J)")]
    NotSymplecticPosition(i64),

    #[error("matrix is not monomial: {0}")]
    NotMonomial(String),

    #[error("invalid apartment point: {0}")]
    InvalidPoint(String),

    #[error("zip axiom violated: {0}")]
    ZipAxiom(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
