use thiserror::Error;

use crate::pin::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} entries for {what}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("curve {curve} is not valid on {surface}")]
    InvalidCurve { curve: String, surface: String },

    #[error("cannot twist along {0}: the curve is one-sided")]
    OneSided(String),

    #[error("cannot twist along an arc ({0})")]
    ArcTwist(String),

    #[error("formal twist along a curve class needs a supplied q-value")]
    MissingQValue,

    #[error("the generalised Arf invariant needs an even modulus, got r = {0}")]
    OddModulus(u64),

    #[error("{divisor} does not divide the modulus {modulus}")]
    NotDivisor { divisor: u64, modulus: u64 },

    #[error("normal forms need genus at least 1")]
    GenusZero,

    #[error("invalid structure: {0}")]
    InvalidStructure(Violation),

    #[error("the coordinate set is infinite (r = 0); orbit enumeration needs r >= 1")]
    InfiniteSet,

    #[error("budget exceeded: {needed} steps needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("boundary condition mismatch: {0}")]
    DeltaMismatch(String),

    #[error("unsupported gluing: {0}")]
    UnsupportedGluing(String),

    #[error("incompatible square: {0}")]
    IncompatibleSquare(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn dim(what: &'static str, expected: usize, got: usize) -> Self {
        Error::DimensionMismatch { what, expected, got }
    }

    /// Budget errors are reported separately from domain errors by the CLI.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}
