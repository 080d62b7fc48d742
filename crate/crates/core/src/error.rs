use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected rank {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("pole at evaluation point: {0}")]
    PoleAtPoint(String),
    #[error("denominators are not in a pointed cone: {0}")]
    NotPointed(String),
    #[error("factor is not t-adically expandable: {0}")]
    NotTAdic(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("datum is twisted; the constant c is undefined")]
    Twisted,
    #[error("datum is not affine")]
    NotAffine,
    #[error("coweight {0:?} is not X-antidominant")]
    NotAntidominant(Vec<i64>),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("path is not reduced: {0}")]
    NotReduced(String),
    #[error("oracle: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
