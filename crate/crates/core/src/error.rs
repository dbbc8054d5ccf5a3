//! Crate-wide error type.

use crate::psi::PsiClass;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("aliasing risk: {0}")]
    Aliasing(String),

    #[error("integrand returned a non-finite value at x = {x}")]
    NonFiniteSample { x: f64 },

    #[error("generating function vanishes at p = 1; the space contains only the zero function")]
    DegenerateSpace,

    #[error("theorem hypothesis violated: generating function classified as {class:?}, need Normalized")]
    HypothesisViolation { class: PsiClass },

    #[error("function is not integrable: {0}")]
    NonIntegrable(String),

    #[error("inadmissible exponents: {0}")]
    InvalidExponents(String),

    #[error("representation mismatch: {0}")]
    Representation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
