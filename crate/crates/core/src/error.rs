use thiserror::Error;

use crate::rational::Rational;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample space: {0}")]
    InvalidSpace(String),

    #[error("objects live on different sample spaces")]
    SpaceMismatch,

    #[error("{what}: value {value} lies outside [0, 1]")]
    OutOfUnitInterval { what: String, value: Rational },

    #[error("{what}: negative mass {value}")]
    NegativeMass { what: String, value: Rational },

    #[error("{what}: total mass is {total}, expected 1")]
    NotProbability { what: String, total: Rational },

    #[error("{what}: tail mass must be zero ({detail})")]
    TailMassPresent { what: String, detail: String },

    #[error("mixture weights sum to {0}, expected 1")]
    WeightSum(Rational),

    #[error("mixture needs one weight per charge (got {charges} charges, {weights} weights)")]
    WeightCount { charges: usize, weights: usize },

    #[error("family must contain at least one charge")]
    EmptyFamily,

    #[error("significance level {0} must lie strictly between 0 and 1")]
    AlphaOutOfRange(Rational),

    #[error("least-favorable charge is purely finitely additive (lambda = 0); the reduced problem is meaningless")]
    PureLeastFavorable,

    #[error("least-favorable null charge is purely finitely additive (tau = 0); densities are undefined")]
    PureNullLeastFavorable,

    #[error("wrong case: {0}")]
    WrongCase(String),

    #[error("claimed solution is not optimal: {0}")]
    NotOptimal(String),

    #[error("certificate invalid at {constraint}: residual {residual}")]
    CertificateInvalid { constraint: String, residual: Rational },

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("oracle size bound exceeded: {0}")]
    OracleBound(String),

    #[error("{0}")]
    Usage(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
