use thiserror::Error;

/// Errors raised by the library.
///
/// The variants fall into three families that front ends map onto distinct
/// exit statuses: malformed input, a size cap being hit, and internal
/// consistency failures (an exact division that does not go through, or two
/// independent computations that disagree).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("word [{0}] is not reduced")]
    NotReduced(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("operands live over different lattices")]
    LatticeMismatch,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("enumeration exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by a cap or
    /// by an internal inconsistency.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidCartan(_)
                | Error::IndexOutOfRange { .. }
                | Error::NotReduced(_)
                | Error::LengthMismatch { .. }
                | Error::InvalidLattice(_)
                | Error::LatticeMismatch
                | Error::Parse(_)
                | Error::InvalidInput(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
