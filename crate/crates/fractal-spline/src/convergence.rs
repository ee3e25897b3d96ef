//! Empirical convergence harness.
//!
//! For a closed-form target the harness builds fractal splines on
//! successively finer uniform partitions, couples the scalings to the mesh
//! through `alpha_i = kappa * a_i` so admissibility survives refinement,
//! and measures the sup error against the target over dense exact orbit
//! samples. The least-squares slope of log error against log mesh width
//! estimates the convergence order, expected to be at least one.

use crate::error::{Error, Result};
use crate::error_bounds::total_error_bound;
use crate::fractal::{BaseKind, FractalSplineModel, ScalingVector, SplineMode};
use crate::classical::ShapeParams;
use crate::mesh::{estimate_derivatives, InterpolationData};

/// Closed-form targets with known derivative bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// 2x + 1; reproduced exactly, so it sentinels the whole pipeline.
    Linear,
    Sin,
    Exp,
}

impl Generator {
    /// Parses a generator name as used by the command line.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "linear" => Ok(Self::Linear),
            "sin" => Ok(Self::Sin),
            "exp" => Ok(Self::Exp),
            other => Err(Error::UnknownGenerator(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Sin => "sin",
            Self::Exp => "exp",
        }
    }

    /// Natural demonstration domain.
    pub fn default_domain(&self) -> (f64, f64) {
        match self {
            Self::Linear => (0.0, 1.0),
            Self::Sin => (0.0, std::f64::consts::PI),
            Self::Exp => (0.0, 1.0),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Linear => 2.0 * x + 1.0,
            Self::Sin => x.sin(),
            Self::Exp => x.exp(),
        }
    }

    /// Exact sup of |derivative| over [lo, hi].
    pub fn deriv_sup(&self, lo: f64, hi: f64) -> f64 {
        match self {
            Self::Linear => 2.0,
            Self::Sin => {
                // |cos| peaks at multiples of pi, otherwise at the ends.
                let pi = std::f64::consts::PI;
                if (lo / pi).ceil() <= (hi / pi).floor() {
                    1.0
                } else {
                    lo.cos().abs().max(hi.cos().abs())
                }
            }
            Self::Exp => hi.exp(),
        }
    }
}

/// One refinement level of the experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergencePoint {
    pub n: usize,
    pub h: f64,
    pub sup_error: f64,
    pub bound: f64,
}

/// Error table plus the fitted order; `order` is `None` when every level
/// reproduces the target to roundoff (no slope to fit).
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub points: Vec<ConvergencePoint>,
    pub order: Option<f64>,
}

/// Runs the refinement experiment for `generator` on `domain` over the
/// partition sizes in `sizes`, with scalings `alpha_i = kappa * a_i`.
pub fn convergence_experiment(
    generator: Generator,
    domain: (f64, f64),
    sizes: &[usize],
    kappa: f64,
) -> Result<ConvergenceReport> {
    if sizes.len() < 2 {
        return Err(Error::InvalidSizes(format!(
            "need at least 2 sizes for an order estimate, got {}",
            sizes.len()
        )));
    }
    if let Some(w) = sizes.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSizes(format!(
            "sizes must be strictly increasing, got {} before {}",
            w[0], w[1]
        )));
    }
    if sizes[0] < 3 {
        return Err(Error::InvalidSizes(format!(
            "every size must be at least 3, got {}",
            sizes[0]
        )));
    }
    if !(kappa >= 0.0 && kappa < 1.0) {
        return Err(Error::ScalingOutOfRange {
            index: 0,
            value: kappa,
            limit: 1.0,
        });
    }
    let (lo, hi) = domain;
    let deriv_sup = generator.deriv_sup(lo, hi);
    let mut points = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let h = (hi - lo) / (n - 1) as f64;
        let knots: Vec<f64> = (0..n)
            .map(|k| if k == n - 1 { hi } else { lo + k as f64 * h })
            .collect();
        let values: Vec<f64> = knots.iter().map(|&x| generator.eval(x)).collect();
        let base = InterpolationData::new(knots, values);
        let derivatives = estimate_derivatives(&base)?;
        let data = InterpolationData::with_derivatives(
            base.knots.clone(),
            base.values.clone(),
            derivatives,
        );
        let mesh = data.validate()?;
        let params = ShapeParams::unit(n - 1);
        let alpha = ScalingVector::new(mesh.a().iter().map(|a| kappa * a).collect());
        let bound = total_error_bound(&data, &params, &alpha, deriv_sup)?;
        let model = FractalSplineModel::build(
            &data,
            &params,
            &alpha,
            SplineMode::Hermite,
            BaseKind::Rational,
        )?;
        let depth = orbit_depth_for(n, 1000);
        let sup_error = model
            .eval_orbit(depth)?
            .into_iter()
            .map(|(x, v)| (generator.eval(x) - v).abs())
            .fold(0.0f64, f64::max);
        points.push(ConvergencePoint {
            n,
            h,
            sup_error,
            bound,
        });
    }
    let order = fit_order(&points);
    Ok(ConvergenceReport { points, order })
}

/// Smallest orbit depth giving at least `per_interval` points on each of
/// the n - 1 subintervals.
fn orbit_depth_for(n: usize, per_interval: u64) -> u32 {
    let target = per_interval.saturating_mul((n - 1) as u64) as u128;
    let mut total = n as u128;
    let mut depth = 0;
    while total < target {
        total = total.saturating_mul((n - 1) as u128);
        depth += 1;
    }
    depth
}

/// Least-squares slope of log error against log width; `None` when every
/// error sits at roundoff level.
fn fit_order(points: &[ConvergencePoint]) -> Option<f64> {
    if points.iter().all(|p| p.sup_error <= 1e-10) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (p.h.ln(), p.sup_error.max(1e-300).ln()))
        .collect();
    let m = logs.len() as f64;
    let (mx, my) = logs
        .iter()
        .fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x, sy + y));
    let (mx, my) = (mx / m, my / m);
    let (num, den) = logs.iter().fold((0.0, 0.0), |(n, d), (x, y)| {
        (n + (x - mx) * (y - my), d + (x - mx) * (x - mx))
    });
    Some(num / den)
}
