use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("degenerate form (zero discriminant)")]
    Degenerate,
    #[error("operation requires a {0} form")]
    Flavor(&'static str),
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("invalid discriminant {0}")]
    InvalidDiscriminant(i128),
    #[error("discriminant {0} is a perfect square")]
    SquareDiscriminant(i128),
    #[error("wrong discriminant sign for this operation: {0}")]
    WrongSign(i128),
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("cannot factor {0} within the supported range")]
    Factorization(u64),
    #[error("family specification: {0}")]
    Family(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
