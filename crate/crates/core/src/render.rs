//! SVG rendering of a 2-D path trace.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::grid::{GridError, GridPoint, GridSpec};
use crate::search::PathTrace;

const CELL: f64 = 48.0;
const MARGIN: f64 = 24.0;

fn screen(spec: &GridSpec, p: &GridPoint) -> (f64, f64) {
    let x = MARGIN + p.coord(1) as f64 * CELL;
    let y = MARGIN + (spec.m() - p.coord(2)) as f64 * CELL;
    (x, y)
}

fn points_attr(spec: &GridSpec, verts: &[GridPoint]) -> String {
    verts
        .iter()
        .map(|v| {
            let (x, y) = screen(spec, v);
            format!("{x:.1},{y:.1}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// One polyline per visited string, vertex labels as text, the final string
/// highlighted. Only `n = 2` grids are drawable.
pub fn trace_svg(spec: &GridSpec, trace: &PathTrace) -> Result<String, GridError> {
    assert_eq!(spec.n(), 2, "trace_svg draws 2-D grids only");
    let size = 2.0 * MARGIN + spec.m() as f64 * CELL;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size:.1}" height="{size:.1}" viewBox="0 0 {size:.1} {size:.1}">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(out, r##"<g stroke="#dddddd" stroke-width="1">"##);
    for i in 0..=spec.m() {
        let t = MARGIN + i as f64 * CELL;
        let end = size - MARGIN;
        let _ = writeln!(out, r#"<line x1="{t:.1}" y1="{MARGIN:.1}" x2="{t:.1}" y2="{end:.1}"/>"#);
        let _ = writeln!(out, r#"<line x1="{MARGIN:.1}" y1="{t:.1}" x2="{end:.1}" y2="{t:.1}"/>"#);
    }
    out.push_str("</g>\n");

    let mut labels: BTreeMap<GridPoint, usize> = BTreeMap::new();
    let last = trace.steps.len().saturating_sub(1);
    for (i, step) in trace.steps.iter().enumerate() {
        let s = step.string(spec)?;
        let verts = s.vertices();
        for (v, &l) in verts.iter().zip(&step.labels) {
            labels.insert(v.clone(), l);
        }
        let (stroke, width) = if i == last {
            ("#d62728", 4.0)
        } else {
            ("#1f77b4", 2.0)
        };
        let _ = writeln!(
            out,
            r#"<polyline data-step="{i}" data-level="{}" points="{}" fill="none" stroke="{stroke}" stroke-width="{width:.1}" stroke-linejoin="round"/>"#,
            step.level,
            points_attr(spec, &verts)
        );
    }
    for (v, l) in &labels {
        let (x, y) = screen(spec, v);
        let _ = writeln!(
            out,
            r##"<circle cx="{x:.1}" cy="{y:.1}" r="3.0" fill="#333333"/><text x="{:.1}" y="{:.1}" font-family="monospace" font-size="12">{l}</text>"##,
            x + 4.0,
            y - 4.0
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
