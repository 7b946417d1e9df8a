use thiserror::Error;

use crate::verdict::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("algebra is not associative: {0}")]
    NotAssociative(Violation),
    #[error("not a Rota-Baxter system: {0}")]
    NotRotaBaxterSystem(Violation),
    #[error("not a Rota-Baxter system bimodule: {0}")]
    NotBimodule(Violation),
    #[error("not a Rota-Baxter operator of the given weight: {0}")]
    NotRotaBaxterOperator(Violation),
    #[error("not a cocycle: {0}")]
    NotCocycle(Violation),
    #[error("not an abelian extension: {0}")]
    NotExtension(Violation),
    #[error("not an isomorphism of extensions: {0}")]
    NotIsomorphism(Violation),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("size cap exceeded: {needed} columns requested, cap is {cap}")]
    CapExceeded { needed: usize, cap: usize },
    #[error("claim failed: {0}")]
    ClaimFailed(Violation),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
