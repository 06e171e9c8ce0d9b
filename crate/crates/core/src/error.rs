use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field of order {p}^{s} exceeds the table limit of 2^20 elements")]
    FieldTooLarge { p: u32, s: u32 },
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("subfield degree {d} does not divide {s}")]
    NotASubfield { d: u32, s: u32 },
    #[error("cannot embed GF({p}^{from}) into GF({p2}^{to})")]
    NoEmbedding { p: u32, from: u32, p2: u32, to: u32 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("field GF({p}^{s}) does not contain GF(q^2) for q = {p}^{e}")]
    NoQuadraticSubfield { p: u32, s: u32, e: u32 },
    #[error("inconsistent signature: {0}")]
    Signature(String),
    #[error("no standard type has the invariant profile of this form")]
    NoMatch,
    #[error("invariant profile is shared by types {0}")]
    AmbiguousMatch(String),
    #[error("enumeration range exceeded: {0}")]
    RangeExceeded(String),
    #[error("Hermitian space did not split within extension degree {0}")]
    NotSplit(u32),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
