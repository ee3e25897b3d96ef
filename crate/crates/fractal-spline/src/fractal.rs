//! Self-referential spline engine.
//!
//! The model couples the mesh maps with per-interval vertical scalings
//! `alpha_i`: the curve value at `L_i(x)` equals
//! `alpha_i * value(x) + G_i(x)` for every `x` in the whole domain, where
//! `G_i` is a fixed rational term precomputed from the data. Because every
//! `|alpha_i|` is below the contraction ratio `a_i`, this equation has a
//! unique continuously differentiable solution that interpolates the data,
//! and the graph is the attractor of the associated map system.
//!
//! Two evaluators serve different needs. [`FractalSplineModel::eval_orbit`]
//! pushes the exact knot pairs forward through the maps; every produced
//! pair lies exactly on the graph, but only at mesh-determined abscissae.
//! [`FractalSplineModel::eval_point`] reaches an arbitrary abscissa by
//! unrolling the equation along nested pre-images and certifies the
//! truncated tail against an a-priori sup bound.

use crate::bernstein::CubicBernstein;
use crate::classical::{numerator_bundles, sup_bound_classical, ClassicalSpline, ShapeParams};
use crate::error::{Error, Result};
use crate::exec;
use crate::mesh::{InterpolationData, Mesh};

/// Default ceiling on orbit size, in points.
pub const DEFAULT_ORBIT_CAP: u64 = 4_194_304;

/// Per-interval vertical scaling factors.
///
/// Admissibility (`|alpha_i| < a_i` against a concrete mesh) is checked at
/// model build time, not at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingVector {
    alpha: Vec<f64>,
}

impl ScalingVector {
    pub fn new(alpha: Vec<f64>) -> Self {
        Self { alpha }
    }

    /// All factors equal to `value`.
    pub fn uniform(intervals: usize, value: f64) -> Self {
        Self {
            alpha: vec![value; intervals],
        }
    }

    /// The null vector: the model degenerates to the classical spline.
    pub fn zero(intervals: usize) -> Self {
        Self {
            alpha: vec![0.0; intervals],
        }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.alpha
    }

    /// Largest absolute factor.
    pub fn sup_norm(&self) -> f64 {
        self.alpha.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Verifies length and the strict per-interval bound `|alpha_i| < a_i`.
    pub fn check_against(&self, mesh: &Mesh) -> Result<()> {
        if self.alpha.len() != mesh.intervals() {
            return Err(Error::LengthMismatch {
                what: "scaling vector",
                got: self.alpha.len(),
                expected: mesh.intervals(),
            });
        }
        for (i, (&v, &a)) in self.alpha.iter().zip(mesh.a()).enumerate() {
            if !(v.abs() < a) {
                return Err(Error::ScalingOutOfRange {
                    index: i,
                    value: v,
                    limit: a,
                });
            }
        }
        Ok(())
    }
}

/// How knot derivatives enter the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplineMode {
    /// Derivative values are part of the data.
    Hermite,
    /// Derivatives are replaced by chord slopes; needs one extra trailing
    /// point beyond the interpolated set to supply the last slope.
    ValuesOnly,
}

/// Base-function family of the recursion.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseKind {
    /// Rational base with the same denominator as the data term; the
    /// standard construction.
    Rational,
    /// Classical spline minus a positive quartic bump of the given
    /// amplitude per interval; with positive scalings the curve stays
    /// above the classical spline.
    Bump(Vec<f64>),
}

enum BaseFamily {
    Rational,
    Bump {
        classical: ClassicalSpline,
        betas: Vec<f64>,
    },
}

/// Immutable assembled fractal spline.
pub struct FractalSplineModel {
    data: InterpolationData,
    mesh: Mesh,
    params: ShapeParams,
    alpha: ScalingVector,
    mode: SplineMode,
    base: BaseFamily,
    /// Numerator bundles of G_i over the global coordinate.
    bundles: Vec<CubicBernstein>,
    value_bound: f64,
}

impl FractalSplineModel {
    /// Assembles the model and precomputes the recursion terms.
    pub fn build(
        data: &InterpolationData,
        params: &ShapeParams,
        alpha: &ScalingVector,
        mode: SplineMode,
        base_kind: BaseKind,
    ) -> Result<Self> {
        let data = effective_data(data, mode)?;
        let mesh = data.validate()?;
        params.check_intervals(mesh.intervals())?;
        alpha.check_against(&mesh)?;
        let base = match base_kind {
            BaseKind::Rational => BaseFamily::Rational,
            BaseKind::Bump(betas) => {
                if betas.len() != mesh.intervals() {
                    return Err(Error::LengthMismatch {
                        what: "bump amplitudes",
                        got: betas.len(),
                        expected: mesh.intervals(),
                    });
                }
                if let Some(i) = betas.iter().position(|b| !(*b > 0.0)) {
                    return Err(Error::NonPositiveBump {
                        index: i,
                        value: betas[i],
                    });
                }
                BaseFamily::Bump {
                    classical: ClassicalSpline::new(&data, params)?,
                    betas,
                }
            }
        };
        let bundles = match &base {
            BaseFamily::Rational => equation_bundles(&data, &mesh, params, alpha),
            // The bump recursion evaluates the classical spline directly;
            // the data-term bundles are those of the classical scheme.
            BaseFamily::Bump { .. } => numerator_bundles(&data, &mesh, params),
        };
        let value_bound = sup_recursion_bound(&base, &bundles, params, alpha);
        Ok(Self {
            data,
            mesh,
            params: params.clone(),
            alpha: alpha.clone(),
            mode,
            base,
            bundles,
            value_bound,
        })
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

    pub fn alpha(&self) -> &ScalingVector {
        &self.alpha
    }

    pub fn mode(&self) -> SplineMode {
        self.mode
    }

    pub fn base_kind(&self) -> BaseKind {
        match &self.base {
            BaseFamily::Rational => BaseKind::Rational,
            BaseFamily::Bump { betas, .. } => BaseKind::Bump(betas.clone()),
        }
    }

    /// A-priori sup bound on the curve used to certify evaluation tails.
    pub fn value_bound(&self) -> f64 {
        self.value_bound
    }

    /// Evaluation tolerance well below plotting and test resolution.
    pub fn default_tol(&self) -> f64 {
        let scale = self.data.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        1e-10 * (1.0 + scale)
    }

    /// Recursion term G_i evaluated at a domain point.
    fn base_term(&self, i: usize, x: f64) -> f64 {
        let th = self.mesh.theta(x);
        match &self.base {
            BaseFamily::Rational => self.bundles[i].eval(th) / self.params.weight(i, th),
            BaseFamily::Bump { classical, betas } => {
                let fx = classical.eval(x).expect("argument inside the domain");
                let fxh = classical
                    .eval(self.image_x(i, x))
                    .expect("map image inside the domain");
                let bump = quartic_bump(&self.mesh, betas[i], x);
                fxh - self.alpha.values()[i] * (fx - bump)
            }
        }
    }

    /// Forward map image kept inside its subinterval against roundoff.
    fn image_x(&self, i: usize, x: f64) -> f64 {
        let k = self.mesh.knots();
        if x == self.mesh.first() {
            k[i]
        } else if x == self.mesh.last() {
            k[i + 1]
        } else {
            (self.mesh.a()[i] * x + self.mesh.e()[i]).clamp(k[i], k[i + 1])
        }
    }

    /// Exact graph points: forward images of the knot pairs, `depth` levels
    /// deep, sorted by abscissa with junction duplicates removed. Sized
    /// against [`DEFAULT_ORBIT_CAP`].
    pub fn eval_orbit(&self, depth: u32) -> Result<Vec<(f64, f64)>> {
        self.eval_orbit_capped(depth, DEFAULT_ORBIT_CAP)
    }

    /// As [`eval_orbit`](Self::eval_orbit) with an explicit point cap.
    pub fn eval_orbit_capped(&self, depth: u32, cap: u64) -> Result<Vec<(f64, f64)>> {
        let n = self.data.len();
        let mut points = n as u128;
        for _ in 0..depth {
            points = points.saturating_mul((n - 1) as u128);
        }
        if points > cap as u128 {
            return Err(Error::DepthTooLarge { depth, points, cap });
        }
        let mut pts: Vec<(f64, f64)> = self
            .data
            .knots
            .iter()
            .copied()
            .zip(self.data.values.iter().copied())
            .collect();
        for _ in 0..depth {
            let mut next = Vec::with_capacity(pts.len() * (n - 1));
            for i in 0..n - 1 {
                let al = self.alpha.values()[i];
                // Images of a sorted list are sorted and the per-map blocks
                // tile the domain left to right, so `next` stays sorted.
                for &(x, v) in &pts {
                    next.push((self.image_x(i, x), al * v + self.base_term(i, x)));
                }
            }
            pts = next;
        }
        pts.dedup_by(|a, b| a.0 == b.0);
        Ok(pts)
    }

    /// Value at an arbitrary abscissa with a certified truncation bound.
    ///
    /// Unrolls the defining equation along nested pre-images, accumulating
    /// `coeff * G_i(pre)` while `coeff` shrinks by `alpha_i` each step;
    /// stops once the discarded tail is at most `tol` (or exactly zero when
    /// a pre-image lands on a knot). Returns the value and the tail bound.
    pub fn eval_point(&self, x: f64, tol: f64) -> Result<(f64, f64)> {
        if !(tol > 0.0) {
            return Err(Error::NonPositiveTolerance { value: tol });
        }
        let mut value = 0.0f64;
        let mut coeff = 1.0f64;
        let mut cur = x;
        loop {
            if let Some(j) = self.mesh.knot_index(cur) {
                value += coeff * self.data.values[j];
                return Ok((value, 0.0));
            }
            let tail = coeff.abs() * self.value_bound;
            if tail <= tol {
                return Ok((value, tail));
            }
            let i = self.mesh.locate(cur)?;
            let pre = self.mesh.inverse_map(i, cur)?;
            value += coeff * self.base_term(i, pre);
            coeff *= self.alpha.values()[i];
            cur = pre;
        }
    }

    /// Values on a uniform grid including both endpoints; parallel when the
    /// `parallel` feature is on.
    pub fn sample_uniform(&self, n_points: usize, tol: f64) -> Result<Vec<(f64, f64)>> {
        let xs = self.uniform_grid(n_points, tol)?;
        let values = exec::map_collect(&xs, |x| self.eval_point(*x, tol));
        collect_samples(xs, values)
    }

    /// Sequential twin of [`sample_uniform`](Self::sample_uniform), for
    /// baseline comparisons regardless of features.
    pub fn sample_uniform_seq(&self, n_points: usize, tol: f64) -> Result<Vec<(f64, f64)>> {
        let xs = self.uniform_grid(n_points, tol)?;
        let values = exec::map_collect_seq(&xs, |x| self.eval_point(*x, tol));
        collect_samples(xs, values)
    }

    fn uniform_grid(&self, n_points: usize, tol: f64) -> Result<Vec<f64>> {
        if n_points < 2 {
            return Err(Error::InvalidSizes(format!(
                "uniform grid needs at least 2 points, got {n_points}"
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::NonPositiveTolerance { value: tol });
        }
        let (lo, hi) = (self.mesh.first(), self.mesh.last());
        let step = (hi - lo) / (n_points - 1) as f64;
        Ok((0..n_points)
            .map(|k| {
                if k == n_points - 1 {
                    hi
                } else {
                    lo + k as f64 * step
                }
            })
            .collect())
    }

    /// Uniform bound on the distance between the curve and the classical
    /// spline on the same data and parameters.
    pub fn perturbation_bound(&self) -> f64 {
        let a = self.alpha.sup_norm();
        if a == 0.0 {
            return 0.0;
        }
        let classical_sup =
            sup_bound_classical(&self.data).expect("model data carries derivatives");
        let base_sup = match &self.base {
            BaseFamily::Rational => {
                let n = self.data.len();
                let d = self.data.derivatives.as_ref().expect("derivatives present");
                let ends_y = self.data.values[0].abs().max(self.data.values[n - 1].abs());
                let ends_d = d[0].abs().max(d[n - 1].abs());
                ends_y + 0.25 * self.mesh.span() * ends_d
            }
            BaseFamily::Bump { classical, betas } => {
                let beta_max = betas.iter().fold(0.0f64, |m, v| m.max(*v));
                classical.sup_bound() + beta_max
            }
        };
        a / (1.0 - a) * (classical_sup + base_sup)
    }
}

/// Quartic bump: nonnegative, maximal at the domain midpoint with value
/// `beta`, vanishing with its first derivative at both domain endpoints.
fn quartic_bump(mesh: &Mesh, beta: f64, x: f64) -> f64 {
    let half = 0.5 * mesh.span();
    let w = (x - mesh.first()) * (mesh.last() - x);
    beta * (w * w) / (half * half * half * half)
}

/// Resolves the data a model interpolates under the given mode.
fn effective_data(data: &InterpolationData, mode: SplineMode) -> Result<InterpolationData> {
    match mode {
        SplineMode::Hermite => {
            data.validate()?;
            data.require_derivatives()?;
            Ok(data.clone())
        }
        SplineMode::ValuesOnly => {
            if data.len() < 4 {
                return Err(Error::TooFewPoints {
                    needed: 4,
                    got: data.len(),
                });
            }
            let raw = InterpolationData::new(data.knots.clone(), data.values.clone());
            let raw_mesh = raw.validate()?;
            let n = data.len() - 1;
            Ok(InterpolationData::with_derivatives(
                data.knots[..n].to_vec(),
                data.values[..n].to_vec(),
                raw_mesh.slopes().to_vec(),
            ))
        }
    }
}

/// Numerator bundles of the recursion terms G_i for the rational base: the
/// classical data term minus `alpha_i` times the endpoint base term, both
/// over the shared linear denominator in the global coordinate.
fn equation_bundles(
    data: &InterpolationData,
    mesh: &Mesh,
    params: &ShapeParams,
    alpha: &ScalingVector,
) -> Vec<CubicBernstein> {
    let y = &data.values;
    let d = data.derivatives.as_ref().expect("derivatives present");
    let h = mesh.h();
    let span = mesh.span();
    let n = data.len();
    let (y1, yn) = (y[0], y[n - 1]);
    let (d1, dn) = (d[0], d[n - 1]);
    (0..n - 1)
        .map(|i| {
            let (r, t) = (params.r()[i], params.t()[i]);
            let al = alpha.values()[i];
            CubicBernstein::new([
                (y[i] - al * y1) * r,
                (2.0 * r + t) * y[i] + r * h[i] * d[i] - al * ((2.0 * r + t) * y1 + r * span * d1),
                (r + 2.0 * t) * y[i + 1]
                    - t * h[i] * d[i + 1]
                    - al * ((r + 2.0 * t) * yn - t * span * dn),
                (y[i + 1] - al * yn) * t,
            ])
        })
        .collect()
}

/// Sup bound on the curve: sup |G_i| / (1 - |alpha|_inf).
fn sup_recursion_bound(
    base: &BaseFamily,
    bundles: &[CubicBernstein],
    params: &ShapeParams,
    alpha: &ScalingVector,
) -> f64 {
    let g_sup = match base {
        BaseFamily::Rational => bundles
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let num = b.c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                num / params.r()[i].min(params.t()[i])
            })
            .fold(0.0f64, f64::max),
        BaseFamily::Bump { classical, betas } => {
            let f_sup = classical.sup_bound();
            betas
                .iter()
                .zip(alpha.values())
                .map(|(&b, &al)| f_sup * (1.0 + al.abs()) + al.abs() * b)
                .fold(0.0f64, f64::max)
        }
    };
    g_sup / (1.0 - alpha.sup_norm())
}

fn collect_samples(
    xs: Vec<f64>,
    values: Vec<Result<(f64, f64)>>,
) -> Result<Vec<(f64, f64)>> {
    xs.into_iter()
        .zip(values)
        .map(|(x, res)| res.map(|(v, _)| (x, v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::eval_classical;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn valley_data() -> InterpolationData {
        InterpolationData::with_derivatives(
            vec![0.0, 3.0, 7.0, 10.0, 15.0],
            vec![18.0, 10.0, 12.0, 9.0, 20.0],
            vec![-4.02, -1.31, -0.36, 0.2, 4.2],
        )
    }

    fn fig_params() -> ShapeParams {
        ShapeParams::new(vec![1.0; 4], vec![3.35, 1.0, 1.0, 1.0]).unwrap()
    }

    fn fig_model(alpha: [f64; 4]) -> FractalSplineModel {
        FractalSplineModel::build(
            &valley_data(),
            &fig_params(),
            &ScalingVector::new(alpha.to_vec()),
            SplineMode::Hermite,
            BaseKind::Rational,
        )
        .unwrap()
    }

    // --- scaling admissibility ---

    #[test]
    fn rejects_scaling_length_mismatch() {
        let mesh = valley_data().validate().unwrap();
        assert!(matches!(
            ScalingVector::zero(3).check_against(&mesh),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn rejects_scaling_at_or_above_ratio() {
        let mesh = valley_data().validate().unwrap();
        // a = (0.2, 4/15, 0.2, 1/3)
        let at = ScalingVector::new(vec![0.2, 0.0, 0.0, 0.0]);
        assert!(matches!(
            at.check_against(&mesh),
            Err(Error::ScalingOutOfRange { index: 0, .. })
        ));
        let nan = ScalingVector::new(vec![0.0, f64::NAN, 0.0, 0.0]);
        assert!(matches!(
            nan.check_against(&mesh),
            Err(Error::ScalingOutOfRange { index: 1, .. })
        ));
        let under = ScalingVector::new(vec![-0.19, 0.26, 0.1, 0.333]);
        assert!(under.check_against(&mesh).is_ok());
    }

    #[test]
    fn build_requires_derivatives_in_hermite_mode() {
        let data = InterpolationData::new(vec![0.0, 1.0, 2.0], vec![1.0, 2.0, 3.0]);
        assert!(matches!(
            FractalSplineModel::build(
                &data,
                &ShapeParams::unit(2),
                &ScalingVector::zero(2),
                SplineMode::Hermite,
                BaseKind::Rational,
            ),
            Err(Error::MissingDerivatives)
        ));
    }

    // --- classical degeneration ---

    #[test]
    fn null_scaling_matches_classical_evaluation() {
        let model = fig_model([0.0; 4]);
        let data = valley_data();
        let params = fig_params();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let x = rng.gen_range(0.0..15.0);
            let (v, tail) = model.eval_point(x, 1e-13).unwrap();
            let c = eval_classical(&data, &params, x).unwrap();
            assert_abs_diff_eq!(v, c, epsilon = 1e-12);
            assert!(tail <= 1e-13);
        }
    }

    // --- orbit evaluation ---

    #[test]
    fn orbit_depth_zero_is_the_knot_set() {
        let model = fig_model([0.010, 0.020, 0.030, 0.333]);
        let pts = model.eval_orbit(0).unwrap();
        let data = valley_data();
        assert_eq!(pts.len(), 5);
        for (j, &(x, v)) in pts.iter().enumerate() {
            assert_eq!(x, data.knots[j]);
            assert_eq!(v, data.values[j]);
        }
    }

    #[test]
    fn orbit_reproduces_knot_values() {
        let model = fig_model([0.010, 0.020, 0.030, 0.333]);
        let pts = model.eval_orbit(4).unwrap();
        let data = valley_data();
        for (j, &k) in data.knots.iter().enumerate() {
            let v = pts
                .iter()
                .find(|(x, _)| *x == k)
                .map(|(_, v)| *v)
                .expect("knot present in orbit");
            assert_abs_diff_eq!(v, data.values[j], epsilon = 1e-12);
        }
    }

    #[test]
    fn orbit_is_strictly_sorted_with_predicted_size() {
        let model = fig_model([0.027, 0.027, 0.027, 0.024]);
        let pts = model.eval_orbit(2).unwrap();
        // 4 maps over depth 2 tile the domain into 4^3 cells sharing ends.
        assert_eq!(pts.len(), 4usize.pow(3) + 1);
        assert_eq!(pts.first().unwrap().0, 0.0);
        assert_eq!(pts.last().unwrap().0, 15.0);
        for w in pts.windows(2) {
            assert!(w[0].0 < w[1].0);
        }
    }

    #[test]
    fn rejects_orbit_beyond_point_cap() {
        let model = fig_model([0.0; 4]);
        assert!(matches!(
            model.eval_orbit_capped(3, 100),
            Err(Error::DepthTooLarge { points: 320, .. })
        ));
        assert!(matches!(
            model.eval_orbit(12),
            Err(Error::DepthTooLarge { .. })
        ));
    }

    #[test]
    fn constant_data_stays_flat_at_any_depth() {
        let data = InterpolationData::with_derivatives(
            vec![0.0, 3.0, 7.0, 10.0, 15.0],
            vec![3.0; 5],
            vec![0.0; 5],
        );
        let params = ShapeParams::new(vec![2.0, 0.5, 1.0, 4.0], vec![1.0, 3.0, 0.2, 1.0]).unwrap();
        let alpha = ScalingVector::new(vec![0.18, -0.2, 0.15, 0.3]);
        let model = FractalSplineModel::build(
            &data,
            &params,
            &alpha,
            SplineMode::Hermite,
            BaseKind::Rational,
        )
        .unwrap();
        for (_, v) in model.eval_orbit(3).unwrap() {
            assert_abs_diff_eq!(v, 3.0, epsilon = 1e-12);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let (v, _) = model.eval_point(rng.gen_range(0.0..15.0), 1e-12).unwrap();
            assert_abs_diff_eq!(v, 3.0, epsilon = 1e-12);
        }
    }

    // --- point evaluation ---

    #[test]
    fn knot_evaluation_is_exact_with_zero_tail() {
        let model = fig_model([0.010, 0.020, 0.030, 0.333]);
        let data = valley_data();
        for (j, &k) in data.knots.iter().enumerate() {
            let (v, tail) = model.eval_point(k, 1e-12).unwrap();
            assert_eq!(v, data.values[j]);
            assert_eq!(tail, 0.0);
        }
    }

    #[test]
    fn rejects_bad_point_queries() {
        let model = fig_model([0.0; 4]);
        assert!(matches!(
            model.eval_point(5.0, 0.0),
            Err(Error::NonPositiveTolerance { .. })
        ));
        assert!(matches!(
            model.eval_point(-1.0, 1e-10),
            Err(Error::PointOutsideDomain { .. })
        ));
    }

    #[test]
    fn tail_bound_certifies_the_truncation() {
        let model = fig_model([0.027, 0.027, 0.027, 0.024]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = rng.gen_range(0.0..15.0);
            let (coarse, tail) = model.eval_point(x, 1e-4).unwrap();
            let (fine, _) = model.eval_point(x, 1e-13).unwrap();
            assert!(tail <= 1e-4);
            assert!(
                (coarse - fine).abs() <= tail + 1e-12,
                "deviation {} above certified tail {}",
                (coarse - fine).abs(),
                tail
            );
        }
    }

    #[test]
    fn point_and_orbit_evaluators_agree() {
        let model = fig_model([0.010, 0.020, 0.030, 0.333]);
        let tol = 1e-10;
        for (x, v) in model.eval_orbit(3).unwrap() {
            let (p, tail) = model.eval_point(x, tol).unwrap();
            assert!(
                (p - v).abs() <= tol + 1e-12,
                "at x = {x}: point {p} vs orbit {v}, tail {tail}"
            );
        }
    }

    #[test]
    fn satisfies_the_defining_equation() {
        let model = fig_model([0.010, 0.020, 0.030, 0.333]);
        let tol = 1e-12;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = rng.gen_range(0.0..15.0);
            let (v, _) = model.eval_point(x, tol).unwrap();
            for i in 0..4 {
                let xh = model.image_x(i, x);
                let (vh, _) = model.eval_point(xh, tol).unwrap();
                let rhs = model.alpha.values()[i] * v + model.base_term(i, x);
                assert_abs_diff_eq!(vh, rhs, epsilon = 2e-11);
            }
        }
    }

    #[test]
    fn junctions_are_continuous_and_smooth() {
        let model = fig_model([0.027, 0.027, 0.027, 0.024]);
        let data = valley_data();
        let mesh = data.validate().unwrap();
        let tol = 1e-13;
        for j in 1..4 {
            let k = data.knots[j];
            let (hl, hr) = (mesh.h()[j - 1], mesh.h()[j]);
            // value continuity at vanishing offsets
            let (vl, _) = model.eval_point(k - 1e-9 * hl, tol).unwrap();
            let (vr, _) = model.eval_point(k + 1e-9 * hr, tol).unwrap();
            assert_abs_diff_eq!(vl, data.values[j], epsilon = 1e-5);
            assert_abs_diff_eq!(vr, data.values[j], epsilon = 1e-5);
            // one-sided difference quotients agree within 5 percent
            let (el, er) = (1e-3 * hl, 1e-3 * hr);
            let (wl, _) = model.eval_point(k - el, tol).unwrap();
            let (wr, _) = model.eval_point(k + er, tol).unwrap();
            let (sl, sr) = ((data.values[j] - wl) / el, (wr - data.values[j]) / er);
            assert!(
                (sl - sr).abs() <= 0.05 * sl.abs().max(sr.abs()).max(1.0),
                "one-sided slopes {sl} and {sr} disagree at knot {j}"
            );
        }
    }

    // --- values-only mode ---

    #[test]
    fn values_only_consumes_one_extra_point() {
        let data = InterpolationData::new(
            vec![0.0, 3.0, 7.0, 10.0, 15.0, 16.0],
            vec![18.0, 10.0, 12.0, 9.0, 20.0, 22.0],
        );
        let params = ShapeParams::unit(4);
        let alpha = ScalingVector::uniform(4, 0.1);
        let model = FractalSplineModel::build(
            &data,
            &params,
            &alpha,
            SplineMode::ValuesOnly,
            BaseKind::Rational,
        )
        .unwrap();
        assert_eq!(model.data().len(), 5);
        // identical to the Hermite build fed the chord slopes
        let slopes = vec![-8.0 / 3.0, 0.5, -1.0, 11.0 / 5.0, 2.0];
        let hermite = InterpolationData::with_derivatives(
            vec![0.0, 3.0, 7.0, 10.0, 15.0],
            vec![18.0, 10.0, 12.0, 9.0, 20.0],
            slopes,
        );
        let twin = FractalSplineModel::build(
            &hermite,
            &params,
            &alpha,
            SplineMode::Hermite,
            BaseKind::Rational,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let x = rng.gen_range(0.0..15.0);
            let (a, _) = model.eval_point(x, 1e-12).unwrap();
            let (b, _) = twin.eval_point(x, 1e-12).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        for (j, &k) in model.data().knots.iter().enumerate() {
            let (v, _) = model.eval_point(k, 1e-12).unwrap();
            assert_eq!(v, model.data().values[j]);
        }
    }

    #[test]
    fn rejects_values_only_without_the_extra_point() {
        let data = InterpolationData::new(vec![0.0, 1.0, 2.0], vec![1.0, 2.0, 3.0]);
        assert!(matches!(
            FractalSplineModel::build(
                &data,
                &ShapeParams::unit(2),
                &ScalingVector::zero(2),
                SplineMode::ValuesOnly,
                BaseKind::Rational,
            ),
            Err(Error::TooFewPoints { needed: 4, got: 3 })
        ));
    }

    // --- bump base ---

    #[test]
    fn bump_base_keeps_curve_above_classical() {
        let data = valley_data();
        let params = ShapeParams::unit(4);
        let mesh = data.validate().unwrap();
        let alpha = ScalingVector::new(mesh.a().iter().map(|a| 0.5 * a).collect());
        let model = FractalSplineModel::build(
            &data,
            &params,
            &alpha,
            SplineMode::Hermite,
            BaseKind::Bump(vec![1.0; 4]),
        )
        .unwrap();
        let spline = ClassicalSpline::new(&data, &params).unwrap();
        let mut min_gap = f64::INFINITY;
        for (x, v) in model.eval_orbit(5).unwrap() {
            min_gap = min_gap.min(v - spline.eval(x).unwrap());
        }
        assert!(min_gap >= -1e-12, "curve dips {min_gap} below the spline");
    }

    #[test]
    fn rejects_nonpositive_bump_amplitudes() {
        let data = valley_data();
        let err = FractalSplineModel::build(
            &data,
            &ShapeParams::unit(4),
            &ScalingVector::uniform(4, 0.1),
            SplineMode::Hermite,
            BaseKind::Bump(vec![1.0, 0.0, 1.0, 1.0]),
        );
        assert!(matches!(
            err,
            Err(Error::NonPositiveBump { index: 1, .. })
        ));
        let err = FractalSplineModel::build(
            &data,
            &ShapeParams::unit(4),
            &ScalingVector::uniform(4, 0.1),
            SplineMode::Hermite,
            BaseKind::Bump(vec![1.0; 3]),
        );
        assert!(matches!(err, Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn bump_vanishes_to_first_order_at_domain_ends() {
        let mesh = valley_data().validate().unwrap();
        assert_eq!(quartic_bump(&mesh, 2.0, 0.0), 0.0);
        assert_eq!(quartic_bump(&mesh, 2.0, 15.0), 0.0);
        let eps = 1e-8;
        assert!(quartic_bump(&mesh, 2.0, eps) / eps < 1e-6);
        assert!(quartic_bump(&mesh, 2.0, 15.0 - eps) / eps < 1e-6);
        assert_abs_diff_eq!(quartic_bump(&mesh, 2.0, 7.5), 2.0, epsilon = 1e-12);
    }

    // --- base-term endpoint matching ---

    #[test]
    fn rational_base_matches_data_term_to_first_order_at_ends() {
        // Recover the endpoint base b_i from the bundle difference
        // (data term - G_i) / alpha_i and check it meets the data values
        // and slopes at the domain ends.
        let data = valley_data();
        let params = fig_params();
        let mesh = data.validate().unwrap();
        let alpha = ScalingVector::new(vec![0.1, 0.1, 0.1, 0.1]);
        let plain = numerator_bundles(&data, &mesh, &params);
        let fractal = equation_bundles(&data, &mesh, &params, &alpha);
        let span = mesh.span();
        for i in 0..4 {
            let base = |th: f64| {
                let num = (plain[i].eval(th) - fractal[i].eval(th)) / 0.1;
                num / params.weight(i, th)
            };
            assert_abs_diff_eq!(base(0.0), 18.0, epsilon = 1e-12);
            assert_abs_diff_eq!(base(1.0), 20.0, epsilon = 1e-12);
            let eps = 1e-7;
            let left_slope = (base(eps) - base(0.0)) / (eps * span);
            let right_slope = (base(1.0) - base(1.0 - eps)) / (eps * span);
            assert_abs_diff_eq!(left_slope, -4.02, epsilon = 1e-4);
            assert_abs_diff_eq!(right_slope, 4.2, epsilon = 1e-4);
        }
    }

    // --- bounds and sampling ---

    #[test]
    fn perturbation_bound_reference_value() {
        let data = valley_data();
        let model = FractalSplineModel::build(
            &data,
            &ShapeParams::unit(4),
            &ScalingVector::uniform(4, 2.0 / 63.0),
            SplineMode::Hermite,
            BaseKind::Rational,
        )
        .unwrap();
        assert_abs_diff_eq!(model.perturbation_bound(), 2.0, epsilon = 1e-9);
        let null = fig_model([0.0; 4]);
        assert_eq!(null.perturbation_bound(), 0.0);
    }

    #[test]
    fn sampling_covers_endpoints_and_matches_sequential() {
        let model = fig_model([0.027, 0.027, 0.027, 0.024]);
        let two = model.sample_uniform(2, 1e-10).unwrap();
        assert_eq!(two, vec![(0.0, 18.0), (15.0, 20.0)]);
        let par = model.sample_uniform(257, 1e-10).unwrap();
        let seq = model.sample_uniform_seq(257, 1e-10).unwrap();
        assert_eq!(par, seq);
        assert!(matches!(
            model.sample_uniform(1, 1e-10),
            Err(Error::InvalidSizes(_))
        ));
        assert!(matches!(
            model.sample_uniform(10, -1.0),
            Err(Error::NonPositiveTolerance { .. })
        ));
    }

    #[test]
    fn default_tolerance_tracks_data_scale() {
        let model = fig_model([0.0; 4]);
        assert_abs_diff_eq!(model.default_tol(), 2.1e-9, epsilon = 1e-16);
    }

    // --- randomized models ---

    prop_compose! {
        fn arb_model_inputs()(
            n in 3usize..7,
            seed in 0u64..1_000_000,
        ) -> (InterpolationData, ShapeParams, ScalingVector) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut knots = vec![rng.gen_range(-2.0..2.0)];
            for _ in 1..n {
                let step = rng.gen_range(0.1..2.0);
                knots.push(knots.last().unwrap() + step);
            }
            let values = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let derivs = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let data = InterpolationData::with_derivatives(knots, values, derivs);
            let mesh = data.validate().unwrap();
            let r = (0..n - 1).map(|_| rng.gen_range(0.05..5.0)).collect();
            let t = (0..n - 1).map(|_| rng.gen_range(0.05..5.0)).collect();
            let alpha = mesh
                .a()
                .iter()
                .map(|a| a * rng.gen_range(-0.95..0.95))
                .collect();
            (data, ShapeParams::new(r, t).unwrap(), ScalingVector::new(alpha))
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn random_models_interpolate_and_certify((data, params, alpha) in arb_model_inputs()) {
            let model = FractalSplineModel::build(
                &data, &params, &alpha, SplineMode::Hermite, BaseKind::Rational,
            ).unwrap();
            let level_one = model.eval_orbit(1).unwrap();
            for (j, &k) in data.knots.iter().enumerate() {
                let v = level_one.iter().find(|(x, _)| *x == k).map(|(_, v)| *v);
                prop_assert!(v.is_some(), "knot {k} missing from level-1 orbit");
                prop_assert!((v.unwrap() - data.values[j]).abs() <= 1e-10);
            }
            let tol = model.default_tol();
            let mid = 0.5 * (model.mesh().first() + model.mesh().last());
            let (_, tail) = model.eval_point(mid, tol).unwrap();
            prop_assert!(tail <= tol);
        }

        #[test]
        fn random_models_match_across_evaluators((data, params, alpha) in arb_model_inputs()) {
            let model = FractalSplineModel::build(
                &data, &params, &alpha, SplineMode::Hermite, BaseKind::Rational,
            ).unwrap();
            let pts = model.eval_orbit(2).unwrap();
            let probe = pts[pts.len() / 3];
            let (v, _) = model.eval_point(probe.0, 1e-11).unwrap();
            prop_assert!(
                (v - probe.1).abs() <= 1e-11 + 1e-12,
                "point {} vs orbit {}", v, probe.1
            );
        }
    }
}
