//! Interpolation data and the affine maps that tile the domain.
//!
//! A mesh over knots `x_0 < x_1 < ... < x_{N-1}` carries, per subinterval
//! `I_i = [x_i, x_{i+1}]`, the width `h_i`, the contraction ratio
//! `a_i = h_i / (x_{N-1} - x_0)` and the offset `e_i` of the affine map
//! `L_i(x) = a_i x + e_i` taking the whole domain onto `I_i`. The ratios
//! satisfy `0 < a_i < 1` and sum to one, which is what makes the family of
//! maps an exact tiling.

use crate::error::{Error, Result};

/// Knot/value/derivative triples driving a spline construction.
///
/// Derivatives are optional; constructions that need them either require
/// them ([`Error::MissingDerivatives`]) or estimate them with
/// [`estimate_derivatives`].
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationData {
    pub knots: Vec<f64>,
    pub values: Vec<f64>,
    pub derivatives: Option<Vec<f64>>,
}

impl InterpolationData {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Self {
        Self {
            knots,
            values,
            derivatives: None,
        }
    }

    pub fn with_derivatives(knots: Vec<f64>, values: Vec<f64>, derivatives: Vec<f64>) -> Self {
        Self {
            knots,
            values,
            derivatives: Some(derivatives),
        }
    }

    /// Number of data points.
    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    /// Checks the structural invariants and derives the mesh quantities.
    ///
    /// # Errors
    ///
    /// `TooFewPoints` for fewer than three points, `NonIncreasingKnots` when
    /// the abscissae are not strictly increasing (NaN knots fail the ordering
    /// comparison and are reported the same way), `LengthMismatch` when the
    /// value or derivative array disagrees with the knot count.
    pub fn validate(&self) -> Result<Mesh> {
        let n = self.knots.len();
        if n < 3 {
            return Err(Error::TooFewPoints { needed: 3, got: n });
        }
        if self.values.len() != n {
            return Err(Error::LengthMismatch {
                what: "values",
                got: self.values.len(),
                expected: n,
            });
        }
        if let Some(d) = &self.derivatives {
            if d.len() != n {
                return Err(Error::LengthMismatch {
                    what: "derivatives",
                    got: d.len(),
                    expected: n,
                });
            }
        }
        for i in 0..n - 1 {
            if !(self.knots[i] < self.knots[i + 1]) {
                return Err(Error::NonIncreasingKnots { index: i });
            }
        }
        Ok(Mesh::from_checked(self))
    }

    /// Returns the derivative slice or `MissingDerivatives`.
    pub fn require_derivatives(&self) -> Result<&[f64]> {
        self.derivatives
            .as_deref()
            .ok_or(Error::MissingDerivatives)
    }
}

/// Derived mesh quantities plus the affine map family.
#[derive(Debug, Clone)]
pub struct Mesh {
    knots: Vec<f64>,
    h: Vec<f64>,
    a: Vec<f64>,
    e: Vec<f64>,
    slopes: Vec<f64>,
    span: f64,
}

impl Mesh {
    fn from_checked(data: &InterpolationData) -> Self {
        let x = &data.knots;
        let y = &data.values;
        let n = x.len();
        let first = x[0];
        let last = x[n - 1];
        let span = last - first;
        let mut h = Vec::with_capacity(n - 1);
        let mut a = Vec::with_capacity(n - 1);
        let mut e = Vec::with_capacity(n - 1);
        let mut slopes = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let hi = x[i + 1] - x[i];
            h.push(hi);
            a.push(hi / span);
            e.push((last * x[i] - first * x[i + 1]) / span);
            slopes.push((y[i + 1] - y[i]) / hi);
        }
        Self {
            knots: x.clone(),
            h,
            a,
            e,
            slopes,
            span,
        }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Number of subintervals, one less than the knot count.
    pub fn intervals(&self) -> usize {
        self.h.len()
    }

    /// Subinterval widths `h_i`.
    pub fn h(&self) -> &[f64] {
        &self.h
    }

    /// Contraction ratios `a_i`; each lies in (0, 1) and they sum to 1.
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// Offsets `e_i` of the affine maps.
    pub fn e(&self) -> &[f64] {
        &self.e
    }

    /// Chord slopes of the data over each subinterval.
    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    /// Total domain length.
    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn first(&self) -> f64 {
        self.knots[0]
    }

    pub fn last(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    fn check_interval(&self, i: usize) -> Result<()> {
        if i >= self.intervals() {
            return Err(Error::IndexOutOfRange {
                index: i,
                intervals: self.intervals(),
            });
        }
        Ok(())
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if !(x >= self.first() && x <= self.last()) {
            return Err(Error::PointOutsideDomain {
                x,
                lo: self.first(),
                hi: self.last(),
            });
        }
        Ok(())
    }

    /// Applies `L_i` to a point of the whole domain.
    ///
    /// Domain endpoints map to the subinterval endpoints exactly; interior
    /// images are kept inside the subinterval against roundoff.
    pub fn forward_map(&self, i: usize, x: f64) -> Result<f64> {
        self.check_interval(i)?;
        self.check_domain(x)?;
        if x == self.first() {
            return Ok(self.knots[i]);
        }
        if x == self.last() {
            return Ok(self.knots[i + 1]);
        }
        Ok((self.a[i] * x + self.e[i]).clamp(self.knots[i], self.knots[i + 1]))
    }

    /// Applies `L_i^{-1}` to a point of `I_i`.
    ///
    /// Subinterval endpoints map back to the domain endpoints exactly;
    /// interior pre-images are kept inside the domain against roundoff.
    pub fn inverse_map(&self, i: usize, xhat: f64) -> Result<f64> {
        self.check_interval(i)?;
        if !(xhat >= self.knots[i] && xhat <= self.knots[i + 1]) {
            return Err(Error::PointOutsideSubinterval {
                x: xhat,
                lo: self.knots[i],
                hi: self.knots[i + 1],
            });
        }
        if xhat == self.knots[i] {
            return Ok(self.first());
        }
        if xhat == self.knots[i + 1] {
            return Ok(self.last());
        }
        Ok(((xhat - self.e[i]) / self.a[i]).clamp(self.first(), self.last()))
    }

    /// Index of the subinterval containing `xhat`.
    ///
    /// Intervals are closed on the left; the last interval is closed on both
    /// ends, so every interior knot belongs to the interval it starts.
    pub fn locate(&self, xhat: f64) -> Result<usize> {
        self.check_domain(xhat)?;
        let n = self.knots.len();
        if xhat >= self.knots[n - 2] {
            return Ok(n - 2);
        }
        let mut lo = 0;
        let mut hi = n - 2;
        while hi - lo > 0 {
            let mid = (lo + hi + 1) / 2;
            if xhat >= self.knots[mid] {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        Ok(lo)
    }

    /// Normalized coordinate of `x` over the whole domain, in [0, 1].
    pub fn theta(&self, x: f64) -> f64 {
        if x == self.last() {
            return 1.0;
        }
        (x - self.first()) / self.span
    }

    /// Normalized coordinate of `xhat` within subinterval `i`, in [0, 1].
    pub fn phi(&self, i: usize, xhat: f64) -> f64 {
        if xhat == self.knots[i + 1] {
            return 1.0;
        }
        (xhat - self.knots[i]) / self.h[i]
    }

    /// Index of the knot bit-equal to `x`, if any.
    pub fn knot_index(&self, x: f64) -> Option<usize> {
        self.knots
            .binary_search_by(|k| k.partial_cmp(&x).unwrap())
            .ok()
    }
}

/// Derivative estimates by weighted chord-slope averaging.
///
/// Interior points take the width-weighted mean of the two adjacent chord
/// slopes; the ends extrapolate from the first and last two slopes. Exact
/// for data sampled from an affine function.
pub fn estimate_derivatives(data: &InterpolationData) -> Result<Vec<f64>> {
    let mesh = data.validate()?;
    let h = mesh.h();
    let s = mesh.slopes();
    let n = data.len();
    let m = n - 1;
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (h[i] * s[i - 1] + h[i - 1] * s[i]) / (h[i - 1] + h[i]);
    }
    d[0] = s[0] + (s[0] - s[1]) * h[0] / (h[0] + h[1]);
    d[n - 1] = s[m - 1] + (s[m - 1] - s[m - 2]) * h[m - 1] / (h[m - 2] + h[m - 1]);
    Ok(d)
}
