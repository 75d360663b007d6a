use thiserror::Error;

use crate::fock::BasisTag;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} is outside the N = {n_particles} sector")]
    IndexOutOfRange { index: usize, n_particles: usize },

    #[error("state is expressed in the {found} basis, expected {expected}")]
    BasisMismatch { expected: BasisTag, found: BasisTag },

    #[error("sector mismatch: N = {left} vs N = {right}")]
    SectorMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
