//! Rational cubic interpolation with a linear denominator.
//!
//! On each subinterval the spline is a cubic over the weight
//! `S_i(u) = (1-u) r_i + u t_i` with strictly positive shape parameters
//! `r_i, t_i`. The numerator coefficients are chosen so the curve matches
//! the data values and first derivatives at the knots; the result is a C^1
//! interpolant whose tension is steered per interval by the ratio `t_i/r_i`.

use crate::bernstein::CubicBernstein;
use crate::error::{Error, Result};
use crate::mesh::{InterpolationData, Mesh};

/// Per-interval positive weights of the rational scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeParams {
    r: Vec<f64>,
    t: Vec<f64>,
}

impl ShapeParams {
    /// # Errors
    ///
    /// `LengthMismatch` when the two arrays differ in length,
    /// `NonPositiveShapeParams` when any entry is not strictly positive
    /// (NaN included).
    pub fn new(r: Vec<f64>, t: Vec<f64>) -> Result<Self> {
        if r.len() != t.len() {
            return Err(Error::LengthMismatch {
                what: "shape parameters",
                got: t.len(),
                expected: r.len(),
            });
        }
        for i in 0..r.len() {
            if !(r[i] > 0.0 && t[i] > 0.0) {
                return Err(Error::NonPositiveShapeParams {
                    index: i,
                    r: r[i],
                    t: t[i],
                });
            }
        }
        Ok(Self { r, t })
    }

    /// Equal weights `r_i = t_i = 1` on `intervals` subintervals, the
    /// tension-neutral choice.
    pub fn unit(intervals: usize) -> Self {
        Self {
            r: vec![1.0; intervals],
            t: vec![1.0; intervals],
        }
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    /// Denominator `S_i(u) = (1-u) r_i + u t_i`; positive on [0, 1].
    pub fn weight(&self, i: usize, u: f64) -> f64 {
        (1.0 - u) * self.r[i] + u * self.t[i]
    }

    pub(crate) fn check_intervals(&self, intervals: usize) -> Result<()> {
        if self.len() != intervals {
            return Err(Error::LengthMismatch {
                what: "shape parameters",
                got: self.len(),
                expected: intervals,
            });
        }
        Ok(())
    }
}

/// A constructed rational cubic interpolant, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct ClassicalSpline {
    data: InterpolationData,
    mesh: Mesh,
    params: ShapeParams,
    numerators: Vec<CubicBernstein>,
}

impl ClassicalSpline {
    /// Builds the interpolant from data carrying derivative values.
    pub fn new(data: &InterpolationData, params: &ShapeParams) -> Result<Self> {
        let mesh = data.validate()?;
        data.require_derivatives()?;
        params.check_intervals(mesh.intervals())?;
        Ok(Self::from_validated(data.clone(), mesh, params.clone()))
    }

    /// Builds the interpolant from values alone.
    ///
    /// Takes one extra data point beyond the interpolated set: with N+1
    /// points the first N are interpolated and every derivative is replaced
    /// by the chord slope toward the next point, the last of which needs
    /// point N+1. Supplied derivative values, if any, are ignored.
    pub fn from_values_only(data: &InterpolationData, params: &ShapeParams) -> Result<Self> {
        if data.len() < 4 {
            return Err(Error::TooFewPoints {
                needed: 4,
                got: data.len(),
            });
        }
        let raw = InterpolationData::new(data.knots.clone(), data.values.clone());
        let raw_mesh = raw.validate()?;
        let n = data.len() - 1;
        let interp = InterpolationData::with_derivatives(
            data.knots[..n].to_vec(),
            data.values[..n].to_vec(),
            raw_mesh.slopes().to_vec(),
        );
        let mesh = interp.validate()?;
        params.check_intervals(mesh.intervals())?;
        Ok(Self::from_validated(interp, mesh, params.clone()))
    }

    fn from_validated(data: InterpolationData, mesh: Mesh, params: ShapeParams) -> Self {
        let numerators = numerator_bundles(&data, &mesh, &params);
        Self {
            data,
            mesh,
            params,
            numerators,
        }
    }

    /// Evaluates the spline. Knot abscissae return the data values exactly.
    pub fn eval(&self, xhat: f64) -> Result<f64> {
        if let Some(j) = self.mesh.knot_index(xhat) {
            return Ok(self.data.values[j]);
        }
        let i = self.mesh.locate(xhat)?;
        let u = self.mesh.phi(i, xhat);
        Ok(self.numerators[i].eval(u) / self.params.weight(i, u))
    }

    /// Uniform bound on |f|: |y|_inf + (h/4) |d|_inf with h the largest
    /// subinterval width.
    pub fn sup_bound(&self) -> f64 {
        sup_bound_validated(&self.data, &self.mesh)
    }

    pub fn data(&self) -> &InterpolationData {
        &self.data
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn params(&self) -> &ShapeParams {
        &self.params
    }
}

/// Numerator Bernstein bundles of the rational scheme, one per interval.
pub(crate) fn numerator_bundles(
    data: &InterpolationData,
    mesh: &Mesh,
    params: &ShapeParams,
) -> Vec<CubicBernstein> {
    let y = &data.values;
    let d = data.derivatives.as_ref().expect("derivatives present");
    let h = mesh.h();
    let (r, t) = (params.r(), params.t());
    (0..mesh.intervals())
        .map(|i| {
            CubicBernstein::new([
                r[i] * y[i],
                (2.0 * r[i] + t[i]) * y[i] + r[i] * h[i] * d[i],
                (r[i] + 2.0 * t[i]) * y[i + 1] - t[i] * h[i] * d[i + 1],
                t[i] * y[i + 1],
            ])
        })
        .collect()
}

fn sup_bound_validated(data: &InterpolationData, mesh: &Mesh) -> f64 {
    let y_inf = data.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let d = data.derivatives.as_ref().expect("derivatives present");
    let d_inf = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let h_max = mesh.h().iter().fold(0.0f64, |m, v| m.max(*v));
    y_inf + 0.25 * h_max * d_inf
}

/// One-shot evaluation; prefer [`ClassicalSpline`] for repeated queries.
pub fn eval_classical(data: &InterpolationData, params: &ShapeParams, xhat: f64) -> Result<f64> {
    ClassicalSpline::new(data, params)?.eval(xhat)
}

/// One-shot values-only evaluation, see
/// [`ClassicalSpline::from_values_only`].
pub fn eval_classical_values_only(
    data: &InterpolationData,
    params: &ShapeParams,
    xhat: f64,
) -> Result<f64> {
    ClassicalSpline::from_values_only(data, params)?.eval(xhat)
}

/// Uniform bound on the interpolant magnitude, independent of the shape
/// parameters.
pub fn sup_bound_classical(data: &InterpolationData) -> Result<f64> {
    let mesh = data.validate()?;
    data.require_derivatives()?;
    Ok(sup_bound_validated(data, &mesh))
}
