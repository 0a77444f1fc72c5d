use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("point outside the domain: {0}")]
    Domain(String),

    #[error("hyperbolic measure diverges on a grid reaching the unit circle")]
    DivergentMeasure,

    #[error("non-finite value {value} at node {node}")]
    NonFinite { node: Complex64, value: Complex64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFiniteMatrix { row: usize, col: usize },

    #[error("threshold {requested} lies outside the sampled window [{lo}, {hi}]")]
    Window { requested: f64, lo: f64, hi: f64 },

    #[error("grid too coarse: {0}")]
    Resolution(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by non-finite arithmetic rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. } | Error::NonFiniteMatrix { .. } | Error::Inconclusive(_)
        )
    }
}
