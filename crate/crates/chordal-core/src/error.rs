//! Error type shared across the crate.

use thiserror::Error;

use crate::certified::Certificate;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Two operands live over a different number of variables.
    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },

    /// A point has the wrong dimension for the series or grid it is used with.
    #[error("point has {point} coordinates, expected {expected}")]
    PointDimensionMismatch { point: usize, expected: usize },

    /// A coordinate lies outside the closed unit polydisc.
    #[error("coordinate {index} has modulus {modulus} > 1, outside the closed polydisc")]
    PointOutsidePolydisc { index: usize, modulus: f64 },

    /// Grid resolution parameters that cannot produce a meaningful covering.
    #[error("degenerate grid: need radial >= 1 and angular >= 2, got ({radial}, {angular})")]
    DegenerateGrid { radial: usize, angular: usize },

    /// A custom grid axis is unusable (empty, or samples off the disc).
    #[error("invalid grid axis: {reason}")]
    InvalidAxis { reason: String },

    /// Dense evaluation tables would exceed the supported size.
    #[error("series degree profile needs {size} dense coefficients (limit {limit})")]
    DegreeTooLarge { size: usize, limit: usize },

    /// The spherical-cap parameter of the lower bound must satisfy 0 < a < 1.
    #[error("cap parameter must lie strictly between 0 and 1, got {a}")]
    CapParameterOutOfRange { a: f64 },

    /// Neumann inversion needs a nonzero constant term and l1 contraction.
    #[error("series is not Neumann-invertible: {reason}")]
    NotNeumannInvertible { reason: String },

    /// A plant denominator that is identically zero.
    #[error("plant denominator is the zero series")]
    ZeroDenominator,

    /// Supplied Bezout witnesses do not close the identity tightly enough.
    #[error("Bezout residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    BezoutResidual { residual: f64, tolerance: f64 },

    /// A tolerance parameter outside its sensible range.
    #[error("tolerance must lie in (0, 1), got {value}")]
    InvalidTolerance { value: f64 },

    /// Numerator and denominator vanish together somewhere on the polydisc.
    #[error("numerator and denominator share a zero: joint modulus {value:.3e} at grid point {index}")]
    CommonZero { value: f64, index: usize },

    /// The coprimeness check could neither prove nor refute a joint zero.
    #[error(
        "coprimeness inconclusive: certified lower bound {lower_bound:.3e} at covering radius {delta:.3e}"
    )]
    CoprimenessInconclusive { lower_bound: f64, delta: f64 },

    /// A pointwise evaluation hit a spot where a factorization degenerates.
    #[error("both |n| and |d| fall below {threshold:.1e} at the evaluation point")]
    CoprimenessViolation { threshold: f64 },

    /// The nominal closed loop could not be certified stable, so no
    /// robustness statement can be made around it.
    #[error("controller does not certifiably stabilize the nominal plant (invertibility: {status})")]
    NominalNotStabilized { status: Certificate },

    /// An operation over a point list received no points.
    #[error("empty point list")]
    EmptyPointList,

    /// Family parameter outside the range where the example family is defined.
    #[error("alpha must satisfy |alpha| < 1, got {alpha}")]
    AlphaOutOfRange { alpha: f64 },

    /// A sweep produced a non-finite score; inputs were outside the domain
    /// the certified bounds are valid on.
    #[error("grid sweep produced a non-finite value at point {index}")]
    NonFiniteScore { index: usize },

    /// Malformed input file.
    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
