use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A sequence index exceeded the cached range.
    #[error("capacity error: index {index} exceeds cached range {max}")]
    Capacity { index: usize, max: usize },

    /// A series did not meet its stopping rule within the term cap.
    #[error("series did not converge within {cap} terms at |z| = {modulus}")]
    NonConvergence { cap: usize, modulus: f64 },

    /// Jordan chain extraction was numerically ill-posed.
    #[error("defective extraction: {0}")]
    DefectiveExtraction(String),

    /// Winding number could not be stabilized on a box boundary.
    #[error("boundary degeneracy: {0}")]
    BoundaryDegeneracy(String),

    /// Two roots are too close to be treated as distinct.
    #[error("degenerate root set: {0}")]
    Degeneracy(String),

    /// A quadrature did not reach its accuracy target.
    #[error("quadrature did not reach target accuracy (estimate {estimate:e})")]
    Accuracy { estimate: f64 },

    /// Malformed input file or value.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// `true` for errors caused by bad user input rather than numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Capacity { .. } | Error::Parse(_) | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
