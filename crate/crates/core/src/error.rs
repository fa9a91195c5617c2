use thiserror::Error;

use crate::impedance::ImpedanceKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{name} = {value:e} is out of range: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("impedance model {0} needs a material but none was given")]
    MissingMaterial(ImpedanceKind),

    /// The integrand produced NaN or an infinity; `xi` is the outer
    /// coordinate (or the lower limit of a one-dimensional integral).
    #[error("integrand is not finite at (xi = {xi:e}, y = {y:e}): got {value}")]
    NonFinite { xi: f64, y: f64, value: f64 },

    #[error("least-squares fit is ill-conditioned (condition number {0:e})")]
    IllConditioned(f64),

    #[error("invalid fit input: {0}")]
    FitInput(String),

    #[error("material file, line {line}: {message}")]
    MaterialFile { line: usize, message: String },

    #[error("unknown material preset `{0}`")]
    UnknownPreset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        reason,
    }
}

/// Fails with a domain error unless `value` is finite and strictly positive.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(domain(name, value, "must be finite and > 0"))
    }
}
