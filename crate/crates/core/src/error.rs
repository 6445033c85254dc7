//! Error types shared across the library.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input fell outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The two lowest levels are degenerate (f and g vanish simultaneously).
    #[error("spectrum degenerate at s = {s}: f and g vanish simultaneously")]
    Degenerate { s: f64 },

    /// The saturating schedule cannot be built because the coupling vanishes.
    #[error("schedule degenerate: coupling matrix element vanishes on [{s_lo}, {s_hi}]")]
    ScheduleDegenerate { s_lo: f64, s_hi: f64 },

    /// Adaptive quadrature ran out of subdivisions.
    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    QuadratureNonConvergence { estimate: f64, error_bound: f64 },

    /// The ODE integrator failed; `t` is the last accepted time.
    #[error("ODE integration failed at t = {t}: {reason}")]
    OdeNonConvergence { t: f64, reason: String },

    /// A vector had the wrong length.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A requested value lies outside a table's range.
    #[error("value {value} outside table range [{lo}, {hi}])")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    /// A size cap (full-evolution or audit) was exceeded.
    #[error("size cap exceeded: N = {n} > cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    /// An evolution trace ended before the requested final time.
    #[error("incomplete trace: reached t = {t}, needed t = {t_final}")]
    IncompleteTrace { t: f64, t_final: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
