//! Rational cubic splines with a self-affine refinement term.
//!
//! The curve on each subinterval is a rational cubic with linear
//! denominator, driven by two positive shape parameters per interval and
//! Hermite data at the knots. A vector of scaling factors, one per
//! interval and each smaller in magnitude than the interval's width
//! fraction, feeds the whole curve back into every subinterval; the
//! result interpolates the data, is continuously differentiable, and has
//! tunable local irregularity. Null scalings recover the classical
//! rational cubic exactly.
//!
//! The crate covers the full workflow:
//!
//! - [`InterpolationData`] and [`Mesh`] hold and validate knot data;
//!   [`estimate_derivatives`] fills in slopes by three-point means.
//! - [`ClassicalSpline`] is the non-recursive curve, used directly and as
//!   the base of every refinement.
//! - [`FractalSplineModel`] builds the self-referential curve and offers
//!   two exact evaluators: breadth-first orbits of the interval maps and
//!   pointwise queries with a certified truncation tail.
//! - [`local_error_bound`], [`total_error_bound`], and [`error_report`]
//!   turn kernel analysis into interval-by-interval and global error
//!   bounds for data sampled from a smooth function.
//! - [`solve_params`] and the `check_*` family select scalings and shape
//!   parameters so the curve provably stays on one side of a piecewise
//!   linear or quadratic bound, with certificates.
//! - [`convergence_experiment`] runs mesh-refinement experiments against
//!   built-in generators and fits the observed order.
//!
//! Uniform sampling is data-parallel by default via the `parallel`
//! feature; disable it for a dependency-free sequential build.

mod bernstein;
mod classical;
mod constraint;
mod convergence;
mod error;
mod error_bounds;
mod exec;
mod fractal;
mod mesh;

pub use bernstein::CubicBernstein;
pub use classical::{
    eval_classical, eval_classical_values_only, sup_bound_classical, ClassicalSpline,
    ShapeParams,
};
pub use constraint::{
    alpha_cap, base_function_strategy, check_conditions, check_empirical,
    check_linear_conditions, check_quadratic_conditions, compute_K, compute_M,
    feasibility_lambda, mirror_problem, solve_params, BoundPiece, BoundSpec,
    ConstraintCertificate, LambdaRange, Side,
};
pub use convergence::{
    convergence_experiment, ConvergencePoint, ConvergenceReport, Generator,
};
pub use error::{Error, Result};
pub use error_bounds::{
    error_report, global_error_constant, local_error_bound, local_error_constant,
    peano_kernel, total_error_bound, ErrorReport,
};
pub use fractal::{
    BaseKind, FractalSplineModel, ScalingVector, SplineMode, DEFAULT_ORBIT_CAP,
};
pub use mesh::{estimate_derivatives, InterpolationData, Mesh};
