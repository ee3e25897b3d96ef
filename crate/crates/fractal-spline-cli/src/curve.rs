//! Curve files: a two-column CSV of strictly increasing abscissae.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{CliError, Result};

pub const HEADER: &str = "x,value";

/// Renders points with 15 significant digits, enough to round-trip curves
/// between runs without widening them.
pub fn render(points: &[(f64, f64)]) -> String {
    let mut out = String::with_capacity(points.len() * 48 + 8);
    out.push_str(HEADER);
    out.push('\n');
    for (x, v) in points {
        writeln!(out, "{x:.14e},{v:.14e}").expect("string write");
    }
    out
}

pub fn write(path: &Path, points: &[(f64, f64)]) -> Result<()> {
    std::fs::write(path, render(points))?;
    Ok(())
}

pub fn read(path: &Path) -> Result<Vec<(f64, f64)>> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, line)) if line.trim() == HEADER => {}
        Some((_, line)) => {
            return Err(CliError::Curve {
                path: name,
                line: 1,
                message: format!("expected header \"{HEADER}\", got \"{line}\""),
            })
        }
        None => return Err(CliError::EmptyCurve(name)),
    }
    let mut points = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| CliError::Curve {
            path: name.clone(),
            line: idx + 1,
            message,
        };
        let (xs, vs) = line
            .split_once(',')
            .ok_or_else(|| bad("expected two comma-separated numbers".to_owned()))?;
        let x: f64 = xs
            .trim()
            .parse()
            .map_err(|e| bad(format!("bad abscissa: {e}")))?;
        let v: f64 = vs
            .trim()
            .parse()
            .map_err(|e| bad(format!("bad value: {e}")))?;
        if let Some(&(prev, _)) = points.last() {
            if x <= prev {
                return Err(bad(format!("abscissae must increase: {prev} then {x}")));
            }
        }
        points.push((x, v));
    }
    if points.is_empty() {
        return Err(CliError::EmptyCurve(name));
    }
    Ok(points)
}
