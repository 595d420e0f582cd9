//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by profile construction, integration, and the
/// verification operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A time outside the profile's domain (or a mode's integrated span)
    /// was requested.
    #[error("time {t} outside domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },

    /// Profile validation failed at construction.
    #[error("invalid profile `{name}`: {reason}")]
    InvalidProfile { name: String, reason: String },

    /// A catalog lookup for an unknown profile or scheme name.
    #[error("unknown {kind} `{name}`; known: {known}")]
    UnknownName {
        kind: &'static str,
        name: String,
        known: String,
    },

    /// A required or out-of-range parameter in a catalog build.
    #[error("parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    /// The adaptive stepper collapsed below the minimum step size.
    #[error("integration failed near t = {last_t}: step size collapsed")]
    IntegrationFailure { last_t: f64 },

    /// Wronskian too close to zero to normalize (u and u* linearly
    /// dependent, e.g. a purely real mode).
    #[error("degenerate mode: |Wronskian| = {wronskian_abs:.3e} below threshold")]
    DegenerateMode { wronskian_abs: f64 },

    /// A complex mode whose Wronskian has the wrong sign; rescaling by a
    /// complex constant cannot reach +i. Conjugating the seed fixes it.
    #[error("mode has Wronskian {value:.3e}i with negative orientation; conjugate the seed (u0, udot0)")]
    WrongOrientation { value: f64 },

    /// An operation that requires a Wronskian-normalized mode received an
    /// unnormalized one.
    #[error("mode not Wronskian-normalized: |W - target| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    /// Quadrature failed its node-doubling convergence check.
    #[error("quadrature did not converge: node doubling changed result by {change:.3e}")]
    QuadratureAccuracy { change: f64 },

    /// A residual evaluation dominated by grid discretization error.
    #[error("grid too coarse: residual {coarse:.3e} drops to {fine:.3e} under refinement")]
    GridTooCoarse { coarse: f64, fine: f64 },

    /// Wavefunction evaluation out of floating-point range.
    #[error("wavefunction argument out of range: |x| = {x_abs:.3e}")]
    RangeError { x_abs: f64 },

    /// Invariant signature outside the elliptic (positive-definite) case.
    #[error("unsupported signature: require B > |A|, got B = {b}, |A| = {a_abs}")]
    UnsupportedSignature { b: f64, a_abs: f64 },

    /// Matrix dimensions do not match.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A singular intermediate quantity (X <= 0 or u*u -> 0).
    #[error("singularity: {0}")]
    Singularity(String),

    /// A caller-side contract violation.
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
