use thiserror::Error;

use crate::numerics::QuadResult;

/// Errors raised by the numerical routines and the model layer on top of them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "quadrature did not converge within {} subdivisions (estimate {}, error {})",
        .partial.subdivisions_used, .partial.value, .partial.error_estimate
    )]
    NonConvergence { partial: QuadResult },

    #[error("integrand returned NaN at x = {abscissa}")]
    NanIntegrand { abscissa: f64 },

    #[error("integral underflowed after shifting the exponent by {shift}")]
    Underflow { shift: f64 },

    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("erfcx({x}) overflows; use log_half_erfc for Gaussian tails")]
    Overflow { x: f64 },

    #[error("{what} failed to converge after {iterations} iterations")]
    SeriesNonConvergence { what: &'static str, iterations: usize },

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("invalid potential: {0}")]
    Potential(String),

    #[error("cannot parse potential descriptor: {0}")]
    Descriptor(String),

    #[error("{0}")]
    Regime(String),

    #[error("term j = {index} failed: {source}")]
    Term { index: usize, source: Box<Error> },
}

impl Error {
    /// Stable machine-readable code, used in CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonConvergence { .. } => "quadrature_nonconvergence",
            Error::NanIntegrand { .. } => "nan_integrand",
            Error::Underflow { .. } => "underflow",
            Error::NoSignChange { .. } => "no_sign_change",
            Error::Overflow { .. } => "overflow",
            Error::SeriesNonConvergence { .. } => "series_nonconvergence",
            Error::Domain(_) => "domain",
            Error::Potential(_) => "invalid_potential",
            Error::Descriptor(_) => "bad_descriptor",
            Error::Regime(_) => "regime",
            Error::Term { source, .. } => source.code(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
