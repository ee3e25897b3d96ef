//! Deterministic SVG rendering of curves and an optional bound overlay.
//!
//! Output depends only on the input points and legend names: fixed canvas,
//! fixed palette, fixed-precision coordinates, no timestamps.

use std::fmt::Write as _;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 560.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 24.0;
const MARGIN_B: f64 = 44.0;
const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
const BOUND_COLOR: &str = "#555555";

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    /// Dashed gray styling for bound overlays.
    pub dashed: bool,
}

struct Frame {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
}

impl Frame {
    fn of(series: &[Series]) -> Self {
        let mut f = Frame {
            x_lo: f64::INFINITY,
            x_hi: f64::NEG_INFINITY,
            y_lo: f64::INFINITY,
            y_hi: f64::NEG_INFINITY,
        };
        for s in series {
            for &(x, y) in &s.points {
                f.x_lo = f.x_lo.min(x);
                f.x_hi = f.x_hi.max(x);
                f.y_lo = f.y_lo.min(y);
                f.y_hi = f.y_hi.max(y);
            }
        }
        // degenerate ranges widen to a unit box around the data
        if f.x_hi - f.x_lo < 1e-12 {
            f.x_lo -= 0.5;
            f.x_hi += 0.5;
        }
        if f.y_hi - f.y_lo < 1e-12 {
            f.y_lo -= 0.5;
            f.y_hi += 0.5;
        }
        let pad = 0.05 * (f.y_hi - f.y_lo);
        f.y_lo -= pad;
        f.y_hi += pad;
        f
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x_lo) / (self.x_hi - self.x_lo) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn sy(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_B
            - (y - self.y_lo) / (self.y_hi - self.y_lo) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

/// Renders the series into a complete standalone SVG document.
pub fn render(series: &[Series]) -> String {
    let frame = Frame::of(series);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        svg,
        "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>"
    );
    axes(&mut svg, &frame);
    let mut color = 0usize;
    for s in series {
        let stroke = if s.dashed {
            BOUND_COLOR
        } else {
            let c = PALETTE[color % PALETTE.len()];
            color += 1;
            c
        };
        let dash = if s.dashed {
            " stroke-dasharray=\"6 4\""
        } else {
            ""
        };
        let mut pts = String::with_capacity(s.points.len() * 14);
        for &(x, y) in &s.points {
            let _ = write!(pts, "{:.2},{:.2} ", frame.sx(x), frame.sy(y));
        }
        let _ = writeln!(
            svg,
            "  <polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\"{dash} \
             points=\"{}\"/>",
            pts.trim_end()
        );
    }
    legend(&mut svg, series);
    svg.push_str("</svg>\n");
    svg
}

fn axes(svg: &mut String, frame: &Frame) {
    let x0 = MARGIN_L;
    let x1 = WIDTH - MARGIN_R;
    let y0 = HEIGHT - MARGIN_B;
    let y1 = MARGIN_T;
    let _ = writeln!(
        svg,
        "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"#000000\"/>"
    );
    let _ = writeln!(
        svg,
        "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"#000000\"/>"
    );
    for k in 0..=5 {
        let fx = frame.x_lo + (frame.x_hi - frame.x_lo) * k as f64 / 5.0;
        let sx = frame.sx(fx);
        let _ = writeln!(
            svg,
            "  <line x1=\"{sx:.2}\" y1=\"{y0}\" x2=\"{sx:.2}\" y2=\"{}\" stroke=\"#000000\"/>",
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{sx:.2}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" \
             text-anchor=\"middle\">{fx:.2}</text>",
            y0 + 20.0
        );
        let fy = frame.y_lo + (frame.y_hi - frame.y_lo) * k as f64 / 5.0;
        let sy = frame.sy(fy);
        let _ = writeln!(
            svg,
            "  <line x1=\"{}\" y1=\"{sy:.2}\" x2=\"{x0}\" y2=\"{sy:.2}\" stroke=\"#000000\"/>",
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" \
             text-anchor=\"end\">{fy:.2}</text>",
            x0 - 8.0,
            sy + 4.0
        );
    }
}

fn legend(svg: &mut String, series: &[Series]) {
    let mut color = 0usize;
    for (row, s) in series.iter().enumerate() {
        let stroke = if s.dashed {
            BOUND_COLOR
        } else {
            let c = PALETTE[color % PALETTE.len()];
            color += 1;
            c
        };
        let y = MARGIN_T + 10.0 + 16.0 * row as f64;
        let x = WIDTH - MARGIN_R - 180.0;
        let dash = if s.dashed {
            " stroke-dasharray=\"6 4\""
        } else {
            ""
        };
        let _ = writeln!(
            svg,
            "  <line x1=\"{x}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{stroke}\" \
             stroke-width=\"1.5\"{dash}/>",
            x + 24.0
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\">{}</text>",
            x + 30.0,
            y + 4.0,
            s.name
        );
    }
}
