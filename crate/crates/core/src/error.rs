use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("x = {0} lies on a potential step; sample strictly inside a region")]
    BoundaryPoint(f64),

    #[error("energy {energy} is within {window:e} of the removable point E = U")]
    NearSingularEnergy { energy: f64, window: f64 },

    #[error("wave number {0} is neither non-negative real nor positive imaginary")]
    BranchViolation(num_complex::Complex64),

    #[error("degenerate step: k_left + k_right = 0")]
    DegenerateStep,

    #[error("energy {0} coincides with the band threshold")]
    ThresholdEnergy(f64),

    #[error("no formula for destination {x} with source {xp}")]
    UnsupportedRegion { x: f64, xp: f64 },

    #[error("quadrature did not converge after {subdivisions} subdivisions (error {error:e})")]
    NoConvergence { subdivisions: usize, error: f64 },

    #[error("Richardson extrapolation unstable: successive corrections {previous:e} -> {current:e}")]
    ExtrapolationUnstable { previous: f64, current: f64 },

    #[error("initial wave function leaks past x = 0 (relative amplitude {0:e})")]
    SupportViolation(f64),

    #[error("box too small: boundary weight {0:e} exceeds 1e-8")]
    BoxTooSmall(f64),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
