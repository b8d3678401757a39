//! SVG plots of sampled curves.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::locus::{group_branches, CurveSample};

/// A polyline breaks where a step is this many times longer than both of its
/// neighbouring steps.
pub const JUMP_FACTOR: f64 = 10.0;

/// Output size in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub width: u32,
    pub height: u32,
}

impl Default for Viewport {
    fn default() -> Self {
        Viewport {
            width: 800,
            height: 600,
        }
    }
}

fn spacing(p: &CurveSample, q: &CurveSample) -> f64 {
    (q.point.x - p.point.x).hypot(q.point.y - p.point.y)
}

/// Splits samples into connected polylines.
///
/// Spacing grows smoothly along a curve running off to infinity, so only an
/// isolated long step counts as a break.
pub fn polylines(samples: &[CurveSample]) -> Vec<Vec<(f64, f64)>> {
    let mut lines = Vec::new();
    for branch in group_branches(samples) {
        let pts = &branch.samples;
        let steps: Vec<f64> = pts.windows(2).map(|w| spacing(&w[0], &w[1])).collect();
        let mut line: Vec<(f64, f64)> = Vec::new();
        for (i, s) in pts.iter().enumerate() {
            if i > 0 {
                let step = steps[i - 1];
                let prev = if i >= 2 { steps[i - 2] } else { 0.0 };
                let next = steps.get(i).copied().unwrap_or(0.0);
                let local = prev.max(next);
                if local > 0.0 && step > JUMP_FACTOR * local {
                    lines.push(std::mem::take(&mut line));
                }
            }
            line.push((s.point.x, s.point.y));
        }
        lines.push(line);
    }
    lines
}

/// Renders the samples as polylines over the boundary axis `y = 0`.
///
/// The view box is in curve coordinates with `y` flipped, padded by 5% of the
/// extent on each side.
pub fn render_svg(samples: &[CurveSample], viewport: Viewport) -> Result<String> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (0f64, f64::NEG_INFINITY);
    for s in samples {
        x0 = x0.min(s.point.x);
        x1 = x1.max(s.point.x);
        y0 = y0.min(s.point.y);
        y1 = y1.max(s.point.y);
    }
    let pad_x = 0.05 * (x1 - x0).max(f64::EPSILON);
    let pad_y = 0.05 * (y1 - y0).max(f64::EPSILON);
    let (vx, vw) = (x0 - pad_x, x1 - x0 + 2.0 * pad_x);
    let (vy, vh) = (-(y1 + pad_y), y1 - y0 + 2.0 * pad_y);

    let mut out = String::new();
    // Writing into a String cannot fail.
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}" preserveAspectRatio="xMidYMid meet">"#,
        viewport.width,
        viewport.height,
        num(vx),
        num(vy),
        num(vw),
        num(vh)
    );
    let _ = writeln!(out, r#"<g transform="scale(1,-1)" fill="none">"#);
    let _ = writeln!(
        out,
        r##"<line x1="{}" y1="0" x2="{}" y2="0" stroke="#888888" stroke-width="1" vector-effect="non-scaling-stroke"/>"##,
        num(vx),
        num(vx + vw)
    );
    for line in polylines(samples) {
        let points: Vec<String> = line
            .iter()
            .map(|(x, y)| format!("{},{}", num(*x), num(*y)))
            .collect();
        let _ = writeln!(
            out,
            r##"<polyline points="{}" stroke="#1f4e9c" stroke-width="1.5" vector-effect="non-scaling-stroke"/>"##,
            points.join(" ")
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}
