//! Parameter selection for one-sided constraints.
//!
//! Given data lying above (or below) a piecewise linear or quadratic bound
//! with joints at the knots, this module computes the scaling budget the
//! gap affords, certifies sufficient per-interval inequalities on the shape
//! parameters, searches the feasible ratio `lambda_i = t_i / r_i` in closed
//! form, and assembles parameters that keep the whole curve on the required
//! side. The conditions are sufficient, not necessary: a certificate that
//! fails may still correspond to a curve that honors the bound, which is
//! why the empirical orbit check is provided alongside.

use crate::classical::ShapeParams;
use crate::error::{Error, Result};
use crate::error_bounds::uniform_perturbation_scale;
use crate::fractal::{BaseKind, FractalSplineModel, ScalingVector, SplineMode};
use crate::mesh::{InterpolationData, Mesh};

/// Which side of the bound the curve must stay on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

impl Side {
    fn flipped(self) -> Self {
        match self {
            Self::Above => Self::Below,
            Self::Below => Self::Above,
        }
    }
}

/// One bound piece over a subinterval, in the local coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundPiece {
    /// Straight segment between the endpoint values.
    Linear { left: f64, right: f64 },
    /// Parabola fixed by endpoint values and the left-end slope.
    Quadratic {
        left: f64,
        right: f64,
        left_slope: f64,
    },
}

impl BoundPiece {
    /// Value at local coordinate `phi` on an interval of width `h`.
    fn eval(&self, phi: f64, h: f64) -> f64 {
        let u = 1.0 - phi;
        match *self {
            Self::Linear { left, right } => left * u + right * phi,
            Self::Quadratic {
                left,
                right,
                left_slope,
            } => left * u * u + (2.0 * left + left_slope * h) * phi * u + right * phi * phi,
        }
    }

    fn left(&self) -> f64 {
        match *self {
            Self::Linear { left, .. } | Self::Quadratic { left, .. } => left,
        }
    }

    fn right(&self) -> f64 {
        match *self {
            Self::Linear { right, .. } | Self::Quadratic { right, .. } => right,
        }
    }

    fn negated(&self) -> Self {
        match *self {
            Self::Linear { left, right } => Self::Linear {
                left: -left,
                right: -right,
            },
            Self::Quadratic {
                left,
                right,
                left_slope,
            } => Self::Quadratic {
                left: -left,
                right: -right,
                left_slope: -left_slope,
            },
        }
    }
}

/// Piecewise bound with joints at the knots. Pieces may differ in kind and
/// need not join continuously; every condition is stated per interval.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundSpec {
    side: Side,
    pieces: Vec<BoundPiece>,
}

impl BoundSpec {
    pub fn new(side: Side, pieces: Vec<BoundPiece>) -> Self {
        Self { side, pieces }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn pieces(&self) -> &[BoundPiece] {
        &self.pieces
    }

    /// Value of the bound at `x`; interior knots take the right piece.
    pub fn eval(&self, mesh: &Mesh, x: f64) -> Result<f64> {
        self.check_intervals(mesh.intervals())?;
        let i = mesh.locate(x)?;
        Ok(self.pieces[i].eval(mesh.phi(i, x), mesh.h()[i]))
    }

    fn check_intervals(&self, intervals: usize) -> Result<()> {
        if self.pieces.len() != intervals {
            return Err(Error::LengthMismatch {
                what: "bound pieces",
                got: self.pieces.len(),
                expected: intervals,
            });
        }
        Ok(())
    }

    /// Checks that the data sits on the required side of the bound at both
    /// ends of every piece.
    pub fn validate_against(&self, data: &InterpolationData) -> Result<()> {
        let mesh = data.validate()?;
        self.check_intervals(mesh.intervals())?;
        for (i, piece) in self.pieces.iter().enumerate() {
            for (index, y, b) in [
                (i, data.values[i], piece.left()),
                (i + 1, data.values[i + 1], piece.right()),
            ] {
                let ok = match self.side {
                    Side::Above => y >= b,
                    Side::Below => y <= b,
                };
                if !ok {
                    return Err(Error::BoundViolatedAtKnot {
                        index,
                        data: y,
                        bound: b,
                    });
                }
            }
        }
        Ok(())
    }

    fn negated(&self) -> Self {
        Self {
            side: self.side.flipped(),
            pieces: self.pieces.iter().map(BoundPiece::negated).collect(),
        }
    }
}

/// Data-scale constant of the one-sided conditions: a uniform bound on the
/// classical spline plus its endpoint base term.
#[allow(non_snake_case)]
pub fn compute_M(data: &InterpolationData) -> Result<f64> {
    let mesh = data.validate()?;
    uniform_perturbation_scale(data, &mesh)
}

/// Slack constant `K = M * s / (s - 1)` for scaling sup-norm `s`; always
/// nonpositive, tending to minus infinity as `s` approaches one.
#[allow(non_snake_case)]
pub fn compute_K(m: f64, alpha_sup: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha_sup) {
        return Err(Error::AlphaSupOutOfRange { value: alpha_sup });
    }
    Ok(m * alpha_sup / (alpha_sup - 1.0))
}

/// Largest scaling sup-norm the knot gaps admit: the minimum over all piece
/// ends of `g / (g + M)` with `g` the side-signed gap between data and
/// bound.
pub fn alpha_cap(data: &InterpolationData, bound: &BoundSpec) -> Result<f64> {
    bound.validate_against(data)?;
    let m = compute_M(data)?;
    let mut cap = f64::INFINITY;
    for (i, piece) in bound.pieces().iter().enumerate() {
        for (y, b) in [
            (data.values[i], piece.left()),
            (data.values[i + 1], piece.right()),
        ] {
            let g = match bound.side() {
                Side::Above => y - b,
                Side::Below => b - y,
            };
            cap = cap.min(if g == 0.0 { 0.0 } else { g / (g + m) });
        }
    }
    Ok(cap)
}

/// Feasible range for the shape-parameter ratio `lambda = t / r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaRange {
    Empty,
    Bounded { lo: f64, hi: f64 },
    Unbounded { lo: f64 },
}

impl LambdaRange {
    pub fn is_empty(&self) -> bool {
        matches!(self, Self::Empty)
    }

    pub fn contains(&self, lambda: f64) -> bool {
        if !(lambda > 0.0) {
            return false;
        }
        match *self {
            Self::Empty => false,
            Self::Bounded { lo, hi } => lambda >= lo && lambda <= hi,
            Self::Unbounded { lo } => lambda >= lo,
        }
    }
}

/// Positive solutions of `a + lambda b >= 0` and `c + lambda d >= 0`,
/// by case analysis over the signs of `b` and `d`.
fn lambda_interval(a: f64, b: f64, c: f64, d: f64) -> LambdaRange {
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    for (p, q) in [(a, b), (c, d)] {
        if q > 0.0 {
            lo = lo.max(-p / q);
        } else if q == 0.0 {
            if p < 0.0 {
                return LambdaRange::Empty;
            }
        } else {
            hi = hi.min(p / -q);
        }
    }
    if hi <= 0.0 || hi < lo {
        LambdaRange::Empty
    } else if hi.is_infinite() {
        LambdaRange::Unbounded { lo }
    } else {
        LambdaRange::Bounded { lo, hi }
    }
}

/// Closed-form feasibility of the two per-interval inequalities in the
/// ratio `lambda = t / r`, for positive knot-gap coefficients `b` and `c`.
pub fn feasibility_lambda(a: f64, b: f64, c: f64, d: f64) -> Result<LambdaRange> {
    if !(b > 0.0) || !(c > 0.0) {
        return Err(Error::NonPositiveBC { b, c });
    }
    Ok(lambda_interval(a, b, c, d))
}

/// Outcome of the sufficient one-sided conditions for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintCertificate {
    pub m: f64,
    pub k: f64,
    pub alpha_cap: f64,
    pub alpha_sup: f64,
    /// Strict per-interval admissibility |alpha_i| < a_i.
    pub scaling_admissible: bool,
    /// Knot-gap budget alpha_sup <= alpha_cap.
    pub cap_satisfied: bool,
    /// Left-end condition value per interval; nonnegative when satisfied.
    pub left_end_residuals: Vec<f64>,
    /// Right-end condition value per interval.
    pub right_end_residuals: Vec<f64>,
    /// Feasible ratio range per interval, from the same coefficients.
    pub lambda_ranges: Vec<LambdaRange>,
    pub feasible: bool,
}

/// Per-interval condition coefficients: the residuals are
/// `r (a + lambda b)` and `r (c + lambda d)` with `lambda = t / r`.
fn condition_coefficients(
    data: &InterpolationData,
    mesh: &Mesh,
    piece: &BoundPiece,
    i: usize,
    k: f64,
) -> (f64, f64, f64, f64) {
    let y = &data.values;
    let d = data.derivatives.as_ref().expect("derivatives present");
    let h = mesh.h()[i];
    let b = y[i] - piece.left() + k;
    let c = y[i + 1] - piece.right() + k;
    match *piece {
        BoundPiece::Linear { left, right } => (
            2.0 * y[i] - right - left + h * d[i] + 2.0 * k,
            b,
            c,
            2.0 * y[i + 1] - right - left - h * d[i + 1] + 2.0 * k,
        ),
        BoundPiece::Quadratic {
            left, left_slope, ..
        } => (
            2.0 * y[i] - 2.0 * left + h * (d[i] - left_slope) + 2.0 * k,
            b,
            c,
            2.0 * y[i + 1] - 2.0 * left - h * (d[i + 1] + left_slope) + 2.0 * k,
        ),
    }
}

/// Evaluates the sufficient conditions for an above-side bound of any piece
/// mix and reports the full certificate. `k` is the slack constant for the
/// scaling sup-norm actually in use (see [`compute_K`]).
pub fn check_conditions(
    data: &InterpolationData,
    params: &ShapeParams,
    alpha: &ScalingVector,
    bound: &BoundSpec,
    k: f64,
) -> Result<ConstraintCertificate> {
    if bound.side() != Side::Above {
        return Err(Error::WrongBoundKind {
            expected: "above-side",
        });
    }
    let mesh = data.validate()?;
    data.require_derivatives()?;
    params.check_intervals(mesh.intervals())?;
    if alpha.len() != mesh.intervals() {
        return Err(Error::LengthMismatch {
            what: "scaling vector",
            got: alpha.len(),
            expected: mesh.intervals(),
        });
    }
    let cap = alpha_cap(data, bound)?;
    let m = compute_M(data)?;
    let alpha_sup = alpha.sup_norm();
    let scaling_admissible = alpha.check_against(&mesh).is_ok();
    let cap_satisfied = alpha_sup <= cap;
    let n = mesh.intervals();
    let mut left_end_residuals = Vec::with_capacity(n);
    let mut right_end_residuals = Vec::with_capacity(n);
    let mut lambda_ranges = Vec::with_capacity(n);
    for (i, piece) in bound.pieces().iter().enumerate() {
        let (a, b, c, d) = condition_coefficients(data, &mesh, piece, i, k);
        let (r, t) = (params.r()[i], params.t()[i]);
        left_end_residuals.push(r * a + t * b);
        right_end_residuals.push(r * c + t * d);
        lambda_ranges.push(lambda_interval(a, b, c, d));
    }
    let residuals_ok = left_end_residuals
        .iter()
        .chain(&right_end_residuals)
        .all(|v| *v >= 0.0);
    Ok(ConstraintCertificate {
        m,
        k,
        alpha_cap: cap,
        alpha_sup,
        scaling_admissible,
        cap_satisfied,
        left_end_residuals,
        right_end_residuals,
        lambda_ranges,
        feasible: scaling_admissible && cap_satisfied && residuals_ok,
    })
}

/// [`check_conditions`] restricted to bounds made of linear pieces.
pub fn check_linear_conditions(
    data: &InterpolationData,
    params: &ShapeParams,
    alpha: &ScalingVector,
    bound: &BoundSpec,
    k: f64,
) -> Result<ConstraintCertificate> {
    if !bound
        .pieces()
        .iter()
        .all(|p| matches!(p, BoundPiece::Linear { .. }))
    {
        return Err(Error::WrongBoundKind { expected: "linear" });
    }
    check_conditions(data, params, alpha, bound, k)
}

/// [`check_conditions`] restricted to bounds made of quadratic pieces.
pub fn check_quadratic_conditions(
    data: &InterpolationData,
    params: &ShapeParams,
    alpha: &ScalingVector,
    bound: &BoundSpec,
    k: f64,
) -> Result<ConstraintCertificate> {
    if !bound
        .pieces()
        .iter()
        .all(|p| matches!(p, BoundPiece::Quadratic { .. }))
    {
        return Err(Error::WrongBoundKind {
            expected: "quadratic",
        });
    }
    check_conditions(data, params, alpha, bound, k)
}

/// Reflects a problem across the horizontal axis: negated data and bound,
/// flipped side. Applying it twice restores the input bitwise; a curve
/// solves the original problem exactly when its negation solves the mirror,
/// because the construction is linear in the data.
pub fn mirror_problem(
    data: &InterpolationData,
    bound: &BoundSpec,
) -> (InterpolationData, BoundSpec) {
    let values = data.values.iter().map(|v| -v).collect();
    let mirrored = match &data.derivatives {
        Some(d) => InterpolationData::with_derivatives(
            data.knots.clone(),
            values,
            d.iter().map(|v| -v).collect(),
        ),
        None => InterpolationData::new(data.knots.clone(), values),
    };
    (mirrored, bound.negated())
}

/// Picks scalings and shape parameters that provably keep the curve on the
/// required side: the scaling budget is `slack` times the admissible
/// sup-norm, and each ratio `t_i / r_i` is chosen inside its feasible range.
pub fn solve_params(
    data: &InterpolationData,
    bound: &BoundSpec,
    slack: f64,
) -> Result<(ScalingVector, ShapeParams, ConstraintCertificate)> {
    if !(0.0..=1.0).contains(&slack) {
        return Err(Error::AlphaSupOutOfRange { value: slack });
    }
    if bound.side() == Side::Below {
        let (mdata, mbound) = mirror_problem(data, bound);
        return solve_params(&mdata, &mbound, slack);
    }
    bound.validate_against(data)?;
    let mesh = data.validate()?;
    data.require_derivatives()?;
    let cap = alpha_cap(data, bound)?;
    let m = compute_M(data)?;
    let a_min = mesh.a().iter().fold(f64::INFINITY, |m, v| m.min(*v));
    let alpha_sup = slack * cap.min(a_min * (1.0 - 1e-9));
    let k = compute_K(m, alpha_sup)?;
    let n = mesh.intervals();
    let mut lambdas = Vec::with_capacity(n);
    for (i, piece) in bound.pieces().iter().enumerate() {
        let (a, b, c, d) = condition_coefficients(data, &mesh, piece, i, k);
        let lambda = match lambda_interval(a, b, c, d) {
            LambdaRange::Empty => return Err(Error::Infeasible { index: i }),
            LambdaRange::Bounded { lo, hi } => 0.5 * (lo + hi),
            // Any ratio past lo works; prefer moderate magnitudes.
            LambdaRange::Unbounded { lo } => (2.0 * lo).max(1.0).min(1e3).max(2.0 * lo),
        };
        lambdas.push(lambda);
    }
    let alpha = ScalingVector::uniform(n, alpha_sup);
    let params = ShapeParams::new(vec![1.0; n], lambdas)?;
    let certificate = check_conditions(data, &params, &alpha, bound, k)?;
    Ok((alpha, params, certificate))
}

/// Builds a curve guaranteed to lie above the classical spline on the same
/// data: strictly positive scalings with a positive bump subtracted from
/// the base, so the recursion only ever pushes the curve upward.
pub fn base_function_strategy(
    data: &InterpolationData,
    params: &ShapeParams,
    alpha: &ScalingVector,
    bumps: Vec<f64>,
) -> Result<FractalSplineModel> {
    if let Some(i) = alpha.values().iter().position(|v| !(*v > 0.0)) {
        return Err(Error::NonPositiveAlpha {
            index: i,
            value: alpha.values()[i],
        });
    }
    FractalSplineModel::build(
        data,
        params,
        alpha,
        SplineMode::Hermite,
        BaseKind::Bump(bumps),
    )
}

/// Smallest side-signed gap between the curve and the bound over an orbit
/// of the given depth, with the abscissa attaining it.
pub fn check_empirical(
    model: &FractalSplineModel,
    bound: &BoundSpec,
    depth: u32,
) -> Result<(f64, f64)> {
    bound.check_intervals(model.mesh().intervals())?;
    let mut min_gap = f64::INFINITY;
    let mut argmin = model.mesh().first();
    for (x, v) in model.eval_orbit(depth)? {
        let b = bound.eval(model.mesh(), x)?;
        let gap = match bound.side() {
            Side::Above => v - b,
            Side::Below => b - v,
        };
        if gap < min_gap {
            min_gap = gap;
            argmin = x;
        }
    }
    Ok((min_gap, argmin))
}
