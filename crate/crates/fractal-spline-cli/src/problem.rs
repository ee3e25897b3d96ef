//! Problem files: a JSON description of data, parameters, and bounds.
//!
//! Unknown fields are rejected and every parse or semantic error carries
//! the path of the offending field.

use std::path::Path;

use fractal_spline::{
    estimate_derivatives, BaseKind, BoundPiece, BoundSpec, FractalSplineModel,
    InterpolationData, ScalingVector, ShapeParams, Side, SplineMode,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub knots: Vec<f64>,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivatives: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape_r: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape_t: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundFile>,
}

fn default_mode() -> String {
    "hermite".to_owned()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundFile {
    pub side: String,
    pub pieces: Vec<PieceFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceFile {
    pub kind: String,
    pub p_left: f64,
    pub p_right: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope_left: Option<f64>,
}

fn semantic(path: &str, message: impl Into<String>) -> CliError {
    CliError::Semantic {
        path: path.to_owned(),
        message: message.into(),
    }
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(de).map_err(|e| CliError::Parse {
            path: format!("{}: {}", path.display(), e.path()),
            message: e.inner().to_string(),
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("schema serializes");
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn mode(&self) -> Result<SplineMode> {
        match self.mode.as_str() {
            "hermite" => Ok(SplineMode::Hermite),
            "values-only" => Ok(SplineMode::ValuesOnly),
            other => Err(semantic(
                "mode",
                format!("expected \"hermite\" or \"values-only\", got \"{other}\""),
            )),
        }
    }

    /// Interpolation data as stored; derivatives are estimated for hermite
    /// mode when absent. The boolean reports whether estimation happened.
    pub fn data(&self) -> Result<(InterpolationData, bool)> {
        let mode = self.mode()?;
        match (&self.derivatives, mode) {
            (Some(d), _) => Ok((
                InterpolationData::with_derivatives(
                    self.knots.clone(),
                    self.values.clone(),
                    d.clone(),
                ),
                false,
            )),
            (None, SplineMode::ValuesOnly) => {
                Ok((InterpolationData::new(self.knots.clone(), self.values.clone()), false))
            }
            (None, SplineMode::Hermite) => {
                let raw = InterpolationData::new(self.knots.clone(), self.values.clone());
                let d = estimate_derivatives(&raw)?;
                Ok((
                    InterpolationData::with_derivatives(
                        self.knots.clone(),
                        self.values.clone(),
                        d,
                    ),
                    true,
                ))
            }
        }
    }

    /// Shape parameters; unit weights when the file carries none.
    pub fn params(&self) -> Result<ShapeParams> {
        match (&self.shape_r, &self.shape_t) {
            (Some(r), Some(t)) => Ok(ShapeParams::new(r.clone(), t.clone())?),
            (None, None) => Ok(ShapeParams::unit(self.intervals()?)),
            (Some(_), None) => Err(semantic("shape_t", "shape_r given without shape_t")),
            (None, Some(_)) => Err(semantic("shape_r", "shape_t given without shape_r")),
        }
    }

    pub fn alpha(&self) -> Result<ScalingVector> {
        match &self.alpha {
            Some(a) => Ok(ScalingVector::new(a.clone())),
            None => Err(semantic(
                "alpha",
                "this command needs scaling factors; add \"alpha\" or run solve",
            )),
        }
    }

    /// Subintervals carried by shape parameters and scalings: one fewer
    /// than the interpolated points.
    fn intervals(&self) -> Result<usize> {
        let interpolated = match self.mode()? {
            SplineMode::Hermite => self.knots.len(),
            SplineMode::ValuesOnly => self.knots.len().saturating_sub(1),
        };
        if interpolated < 2 {
            return Err(semantic("knots", "too few points for any subinterval"));
        }
        Ok(interpolated - 1)
    }

    pub fn bound(&self) -> Result<Option<BoundSpec>> {
        let Some(b) = &self.bound else {
            return Ok(None);
        };
        let side = match b.side.as_str() {
            "above" => Side::Above,
            "below" => Side::Below,
            other => {
                return Err(semantic(
                    "bound.side",
                    format!("expected \"above\" or \"below\", got \"{other}\""),
                ))
            }
        };
        let mut pieces = Vec::with_capacity(b.pieces.len());
        for (i, p) in b.pieces.iter().enumerate() {
            let piece = match (p.kind.as_str(), p.slope_left) {
                ("linear", None) => BoundPiece::Linear {
                    left: p.p_left,
                    right: p.p_right,
                },
                ("linear", Some(_)) => {
                    return Err(semantic(
                        &format!("bound.pieces[{i}].slope_left"),
                        "slope_left applies to quadratic pieces only",
                    ))
                }
                ("quadratic", Some(s)) => BoundPiece::Quadratic {
                    left: p.p_left,
                    right: p.p_right,
                    left_slope: s,
                },
                ("quadratic", None) => {
                    return Err(semantic(
                        &format!("bound.pieces[{i}].slope_left"),
                        "quadratic pieces need slope_left",
                    ))
                }
                (other, _) => {
                    return Err(semantic(
                        &format!("bound.pieces[{i}].kind"),
                        format!("expected \"linear\" or \"quadratic\", got \"{other}\""),
                    ))
                }
            };
            pieces.push(piece);
        }
        Ok(Some(BoundSpec::new(side, pieces)))
    }

    /// The bound, or a semantic error for commands that need one.
    pub fn require_bound(&self) -> Result<BoundSpec> {
        self.bound()?
            .ok_or_else(|| semantic("bound", "this command needs a bound section"))
    }

    /// Builds the model; the boolean reports derivative estimation.
    pub fn build_model(&self) -> Result<(FractalSplineModel, bool)> {
        let (data, estimated) = self.data()?;
        let params = self.params()?;
        let alpha = self.alpha()?;
        let model = FractalSplineModel::build(
            &data,
            &params,
            &alpha,
            self.mode()?,
            BaseKind::Rational,
        )?;
        Ok((model, estimated))
    }
}
