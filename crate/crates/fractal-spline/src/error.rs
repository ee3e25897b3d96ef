//! Error type shared across the library.
//!
//! Every fallible operation returns [`Result`]. Variants carry enough context
//! (indices, offending values, admissible ranges) for a caller to report the
//! problem without re-deriving it.

/// Library-wide error enum.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// The construction needs at least `needed` data points.
    #[error("need at least {needed} data points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    /// Knot abscissae must be strictly increasing.
    #[error("knots must be strictly increasing (violation at index {index})")]
    NonIncreasingKnots { index: usize },

    /// An input slice does not have the length the mesh dictates.
    #[error("{what} has length {got}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },

    /// Subinterval index out of range.
    #[error("interval index {index} out of range ({intervals} intervals)")]
    IndexOutOfRange { index: usize, intervals: usize },

    /// A point falls outside the interpolation domain.
    #[error("point {x} outside domain [{lo}, {hi}]")]
    PointOutsideDomain { x: f64, lo: f64, hi: f64 },

    /// A point falls outside the requested subinterval.
    #[error("point {x} outside subinterval [{lo}, {hi}]")]
    PointOutsideSubinterval { x: f64, lo: f64, hi: f64 },

    /// Derivative values are required but were not supplied.
    #[error("derivative values required but not supplied")]
    MissingDerivatives,

    /// Shape parameters must be strictly positive.
    #[error("shape parameters must be positive, got ({r}, {t}) on interval {index}")]
    NonPositiveShapeParams { index: usize, r: f64, t: f64 },

    /// A derivative sup-norm bound must be nonnegative.
    #[error("derivative bound must be nonnegative, got {value}")]
    NegativeDerivativeBound { value: f64 },

    /// A scaling factor exceeds the contraction ratio of its interval.
    #[error("scaling factor {value} on interval {index} must satisfy |alpha| < {limit}")]
    ScalingOutOfRange {
        index: usize,
        value: f64,
        limit: f64,
    },

    /// An orbit of the requested depth would exceed the point cap.
    #[error("orbit depth {depth} needs about {points} points, cap is {cap}")]
    DepthTooLarge { depth: u32, points: u128, cap: u64 },

    /// Evaluation tolerances must be strictly positive.
    #[error("tolerance must be positive, got {value}")]
    NonPositiveTolerance { value: f64 },

    /// The kernel is not defined on the diagonal tau = x.
    #[error("kernel arguments coincide at {value}")]
    CoincidentArguments { value: f64 },

    /// The scaling sup-norm must lie in [0, 1).
    #[error("scaling sup-norm {value} must lie in [0, 1)")]
    AlphaSupOutOfRange { value: f64 },

    /// Data fails to stay on the required side of the bound at a knot.
    #[error("bound violated at knot {index}: data {data} vs bound {bound}")]
    BoundViolatedAtKnot { index: usize, data: f64, bound: f64 },

    /// A check was invoked with the wrong kind of bound pieces.
    #[error("expected a bound made of {expected} pieces")]
    WrongBoundKind { expected: &'static str },

    /// The closed-form feasibility test needs positive knot-gap coefficients.
    #[error("feasibility interval requires positive B and C, got B = {b}, C = {c}")]
    NonPositiveBC { b: f64, c: f64 },

    /// No positive shape-parameter ratio satisfies the constraints.
    #[error("no feasible shape-parameter ratio on interval {index}")]
    Infeasible { index: usize },

    /// The one-sided perturbation strategy needs strictly positive scalings.
    #[error("strategy scaling on interval {index} must be strictly positive, got {value}")]
    NonPositiveAlpha { index: usize, value: f64 },

    /// Bump amplitudes must be strictly positive.
    #[error("bump amplitude on interval {index} must be strictly positive, got {value}")]
    NonPositiveBump { index: usize, value: f64 },

    /// The convergence harness does not know the requested generator.
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),

    /// The mesh-size list for a convergence run is unusable.
    #[error("invalid size list: {0}")]
    InvalidSizes(String),
}

pub type Result<T> = std::result::Result<T, Error>;
