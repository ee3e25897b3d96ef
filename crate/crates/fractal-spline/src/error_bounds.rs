//! Interpolation error bounds through the Peano kernel of the scheme.
//!
//! For a continuously differentiable target the per-interval error of the
//! rational cubic admits the representation
//! `Phi(x) - f(x) = integral of Phi'(tau) k(tau, x) dtau` with a kernel `k`
//! that is piecewise rational in the local coordinate and changes branch at
//! `tau = x`. Integrating the absolute kernel gives a per-interval constant
//! `c_i` and the local bound `h_i c_i sup|Phi'|`; adding the fractal
//! perturbation term yields the total bound. Both shrink linearly with the
//! mesh, so the construction converges at first order.

use crate::classical::{sup_bound_classical, ShapeParams};
use crate::error::{Error, Result};
use crate::fractal::ScalingVector;
use crate::mesh::{InterpolationData, Mesh};

/// Positive kernel branch, active for `tau < x`; both arguments live in
/// subinterval `i` and enter through the local coordinate of `x` only.
fn kernel_left(r: f64, t: f64, phi: f64) -> f64 {
    let u = 1.0 - phi;
    (r * u * (1.0 - phi * phi) + t * phi * u * u) / (u * r + phi * t)
}

/// Negative kernel branch, active for `tau > x`.
fn kernel_right(r: f64, t: f64, phi: f64) -> f64 {
    let u = 1.0 - phi;
    -(r * phi * phi * u + t * phi * phi * (2.0 - phi)) / (u * r + phi * t)
}

/// Kernel value at `(tau, x)`, both inside subinterval `i`.
///
/// # Errors
///
/// `CoincidentArguments` on the diagonal, `PointOutsideSubinterval` when
/// either argument leaves the interval, `IndexOutOfRange` for a bad index.
pub fn peano_kernel(mesh: &Mesh, params: &ShapeParams, i: usize, tau: f64, x: f64) -> Result<f64> {
    if i >= mesh.intervals() {
        return Err(Error::IndexOutOfRange {
            index: i,
            intervals: mesh.intervals(),
        });
    }
    params.check_intervals(mesh.intervals())?;
    let (lo, hi) = (mesh.knots()[i], mesh.knots()[i + 1]);
    for v in [tau, x] {
        if !(v >= lo && v <= hi) {
            return Err(Error::PointOutsideSubinterval { x: v, lo, hi });
        }
    }
    if tau == x {
        return Err(Error::CoincidentArguments { value: x });
    }
    let phi = mesh.phi(i, x);
    let (r, t) = (params.r()[i], params.t()[i]);
    if tau < x {
        Ok(kernel_left(r, t, phi))
    } else {
        Ok(kernel_right(r, t, phi))
    }
}

/// Integrated absolute kernel at local coordinate `phi`, divided by `h_i`:
/// the quantity whose maximum over [0, 1] is the interval constant.
fn kernel_mass(r: f64, t: f64, phi: f64) -> f64 {
    let u = 1.0 - phi;
    (r * phi * u * u * (1.0 + 2.0 * phi) + t * phi * phi * u * (3.0 - 2.0 * phi))
        / (u * r + phi * t)
}

/// Per-interval error constant `c_i`, the maximum of the integrated kernel
/// ratio over the local coordinate.
///
/// Equal weights give exactly 1/2; the general value is found by a dense
/// scan refined with golden-section search and lands within 1e-10 of the
/// true maximum.
pub fn local_error_constant(params: &ShapeParams, i: usize) -> Result<f64> {
    if i >= params.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            intervals: params.len(),
        });
    }
    let (r, t) = (params.r()[i], params.t()[i]);
    if r == t {
        return Ok(0.5);
    }
    let g = |phi: f64| kernel_mass(r, t, phi);
    let n = 10_000usize;
    let mut best = f64::NEG_INFINITY;
    let mut best_k = 0usize;
    for k in 0..=n {
        let v = g(k as f64 / n as f64);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let mut lo = (best_k.saturating_sub(1)) as f64 / n as f64;
    let mut hi = ((best_k + 1).min(n)) as f64 / n as f64;
    let ratio = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    while hi - lo > 1e-12 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = g(x1);
        }
    }
    Ok(best.max(f1).max(f2))
}

/// Local error bound `h_i c_i sup|Phi'|` for a target with derivative
/// bounded by `phi_prime_sup`.
pub fn local_error_bound(
    mesh: &Mesh,
    params: &ShapeParams,
    i: usize,
    phi_prime_sup: f64,
) -> Result<f64> {
    if !(phi_prime_sup >= 0.0) {
        return Err(Error::NegativeDerivativeBound {
            value: phi_prime_sup,
        });
    }
    params.check_intervals(mesh.intervals())?;
    Ok(mesh.h()[i] * local_error_constant(params, i)? * phi_prime_sup)
}

/// Uniform bound on |Phi - f^alpha|: the fractal perturbation term plus the
/// classical kernel bound with the worst interval constant and width.
pub fn total_error_bound(
    data: &InterpolationData,
    params: &ShapeParams,
    alpha: &ScalingVector,
    phi_prime_sup: f64,
) -> Result<f64> {
    if !(phi_prime_sup >= 0.0) {
        return Err(Error::NegativeDerivativeBound {
            value: phi_prime_sup,
        });
    }
    let mesh = data.validate()?;
    params.check_intervals(mesh.intervals())?;
    alpha.check_against(&mesh)?;
    let a_sup = alpha.sup_norm();
    let m = uniform_perturbation_scale(data, &mesh)?;
    let c = global_error_constant(params)?;
    let h_max = mesh.h().iter().fold(0.0f64, |acc, v| acc.max(*v));
    Ok(a_sup / (1.0 - a_sup) * m + c * h_max * phi_prime_sup)
}

/// Largest per-interval constant.
pub fn global_error_constant(params: &ShapeParams) -> Result<f64> {
    let mut c = 0.0f64;
    for i in 0..params.len() {
        c = c.max(local_error_constant(params, i)?);
    }
    Ok(c)
}

/// Scale constant of the perturbation term: a bound on the classical spline
/// plus the worst base-function bound.
pub(crate) fn uniform_perturbation_scale(
    data: &InterpolationData,
    mesh: &Mesh,
) -> Result<f64> {
    let d = data.require_derivatives()?;
    let y = &data.values;
    let n = data.len();
    let ends_y = y[0].abs().max(y[n - 1].abs());
    let ends_d = d[0].abs().max(d[n - 1].abs());
    Ok(sup_bound_classical(data)? + ends_y + 0.25 * mesh.span() * ends_d)
}

/// Summary of the error analysis for one configuration.
#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub per_interval_constants: Vec<f64>,
    pub global_constant: f64,
    pub perturbation_term: f64,
    pub total_bound: f64,
    pub empirical_sup_error: Option<f64>,
}

/// Assembles the constants, the perturbation term and the total bound; a
/// measured sup error may be attached for comparison.
pub fn error_report(
    data: &InterpolationData,
    params: &ShapeParams,
    alpha: &ScalingVector,
    phi_prime_sup: f64,
    empirical_sup_error: Option<f64>,
) -> Result<ErrorReport> {
    let mesh = data.validate()?;
    params.check_intervals(mesh.intervals())?;
    alpha.check_against(&mesh)?;
    let per: Vec<f64> = (0..params.len())
        .map(|i| local_error_constant(params, i))
        .collect::<Result<_>>()?;
    let global = per.iter().fold(0.0f64, |m, v| m.max(*v));
    let a_sup = alpha.sup_norm();
    let perturbation = a_sup / (1.0 - a_sup) * uniform_perturbation_scale(data, &mesh)?;
    let h_max = mesh.h().iter().fold(0.0f64, |m, v| m.max(*v));
    Ok(ErrorReport {
        per_interval_constants: per,
        global_constant: global,
        perturbation_term: perturbation,
        total_bound: perturbation + global * h_max * phi_prime_sup,
        empirical_sup_error,
    })
}
