use thiserror::Error;

/// Errors raised by the modal, contact, design and simulation layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("root bracketing failed for mode {mode}")]
    RootBracketing { mode: usize },

    #[error("forcing location lies on a node of the resonant mode (phi(x_f) = {value:e})")]
    DegenerateForcing { value: f64 },

    #[error("contact did not open within {cap:e} s (pulse estimate {estimate:e} s)")]
    ContactNeverOpened { cap: f64, estimate: f64 },

    #[error("extracted modal coefficient of restitution r = {r} is not in [0, 1)")]
    NonphysicalRestitution { r: f64 },

    #[error("pre-impact velocity must be positive, got {v_c:e} m/s")]
    NonPositiveVelocity { v_c: f64 },

    #[error("simulation diverged at t = {time:e} s (|q| = {norm:e})")]
    Divergence { time: f64, norm: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
