//! Multi-panel SVG rendering of a flip trace: one panel per flip showing
//! the state before it, plus a final panel with the result.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::geom::{Color, Point};
use crate::graph::{Edge, Trace};

const PANEL: f64 = 260.0;
const MARGIN: f64 = 16.0;
const COLUMNS: usize = 4;

struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
}

impl Frame {
    fn new(points: &[Point]) -> Self {
        let xs = points.iter().map(|p| p.x as f64);
        let ys = points.iter().map(|p| p.y as f64);
        let (min_x, max_x) = xs.fold((f64::MAX, f64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)));
        let (min_y, max_y) = ys.fold((f64::MAX, f64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)));
        let extent = (max_x - min_x).max(max_y - min_y).max(1.0);
        Frame { min_x, max_y, scale: (PANEL - 2.0 * MARGIN) / extent }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (MARGIN + (x - self.min_x) * self.scale, MARGIN + (self.max_y - y) * self.scale)
    }
}

fn line(out: &mut String, f: &Frame, pts: &[Point], e: Edge, style: &str) {
    let (x1, y1) = f.map(pts[e.0].x as f64, pts[e.0].y as f64);
    let (x2, y2) = f.map(pts[e.1].x as f64, pts[e.1].y as f64);
    let _ = writeln!(out, r#"    <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" {style}/>"#);
}

fn panel(out: &mut String, f: &Frame, pts: &[Point], edges: &[Edge], step: Option<&crate::graph::FlipStep>, title: &str) {
    let _ = writeln!(out, r##"    <rect width="{PANEL}" height="{PANEL}" fill="white" stroke="#ccc"/>"##);
    let _ = writeln!(out, r#"    <text x="4" y="12" font-size="10" font-family="sans-serif">{title}</text>"#);
    for &e in edges {
        if step.is_some_and(|s| s.removed.contains(&e)) {
            continue;
        }
        line(out, f, pts, e, r##"stroke="#555" stroke-width="1.2""##);
    }
    if let Some(s) = step {
        for &e in &s.removed {
            line(out, f, pts, e, r##"stroke="#d33" stroke-width="1.2" stroke-dasharray="4 3""##);
        }
        for &e in &s.added {
            line(out, f, pts, e, r##"stroke="#16a" stroke-width="3""##);
        }
        let (cx, cy) = s.crossing_point.to_f64();
        let (cx, cy) = f.map(cx, cy);
        let _ = writeln!(out, r##"    <circle cx="{cx:.2}" cy="{cy:.2}" r="4" fill="none" stroke="#d33"/>"##);
    }
    for p in pts {
        let (x, y) = f.map(p.x as f64, p.y as f64);
        let fill = match p.color {
            Color::Red => "#d33",
            Color::Blue => "#16a",
            Color::None => "#000",
        };
        let _ = writeln!(out, r#"    <circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{fill}"/>"#);
    }
}

/// SVG document with `trace.len() + 1` panels. Removed edges are dashed,
/// added edges bold, and each crossing point is circled.
pub fn render_trace_svg(points: &[Point], trace: &Trace) -> String {
    let f = Frame::new(points);
    let panels = trace.len() + 1;
    let cols = panels.min(COLUMNS);
    let rows = panels.div_ceil(COLUMNS);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}">"#,
        cols as f64 * PANEL,
        rows as f64 * PANEL
    );
    for (k, edges) in trace.states().iter().enumerate() {
        let (dx, dy) = ((k % COLUMNS) as f64 * PANEL, (k / COLUMNS) as f64 * PANEL);
        let _ = writeln!(out, r#"  <g class="panel" transform="translate({dx} {dy})">"#);
        let step = trace.steps.get(k);
        let title = match step {
            Some(s) => format!("flip {}: {}", k + 1, s.rule),
            None => format!("result after {} flips", trace.len()),
        };
        panel(&mut out, &f, points, edges, step, &title);
        let _ = writeln!(out, "  </g>");
    }
    out.push_str("</svg>\n");
    out
}

pub fn save_trace_svg(path: impl AsRef<Path>, points: &[Point], trace: &Trace) -> Result<()> {
    std::fs::write(path, render_trace_svg(points, trace))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::matching::untangle_leftmost;
    use crate::geom::{PointSet, PositionClass};
    use crate::graph::{FlipGraph, Matching};
    use std::sync::Arc;

    fn square(edges: Vec<Edge>) -> Matching {
        let pts = [(0, 0), (2, 2), (0, 2), (2, 0)].into_iter().map(|(x, y)| Point::new(x, y)).collect();
        Matching::new(Arc::new(PointSet::new(pts, PositionClass::General).unwrap()), edges, false).unwrap()
    }

    #[test]
    fn panel_counts() {
        let plane = untangle_leftmost(&square(vec![Edge(0, 2), Edge(1, 3)])).unwrap();
        let svg = render_trace_svg(plane.final_state.points().points(), &plane.trace);
        assert_eq!(svg.matches(r#"class="panel""#).count(), 1);
        let one = untangle_leftmost(&square(vec![Edge(0, 1), Edge(2, 3)])).unwrap();
        let svg = render_trace_svg(one.final_state.points().points(), &one.trace);
        assert_eq!(svg.matches(r#"class="panel""#).count(), 2);
        assert_eq!(svg.matches("stroke-dasharray").count(), 2);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }
}
