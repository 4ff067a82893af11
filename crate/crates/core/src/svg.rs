//! SVG rendering of a mask assignment.

use std::fmt::Write;

use crate::decomp::DecompositionGraph;
use crate::error::{Error, Result};
use crate::Color;

/// Fill per mask index; masks beyond the palette wrap around.
pub const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#edc948", "#76b7b2", "#9c755f",
];

const CONFLICT_STROKE: &str = "#d62728";

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            // Control characters other than tab/newline are not legal XML 1.0.
            c if (c as u32) < 0x20 && !matches!(c, '\t' | '\n' | '\r') => out.push('\u{fffd}'),
            c => out.push(c),
        }
    }
    out
}

/// Draws one `<rect>` per vertex segment, filled by mask. Split features
/// show as abutting rectangles. Every vertex on a monochrome conflict edge
/// is overdrawn with a hatched outline.
pub fn render_svg(dg: &DecompositionGraph, colors: &[Color], k: usize) -> Result<String> {
    let origin = dg
        .origin()
        .ok_or_else(|| Error::contract("rendering needs a graph built from a layout"))?;
    if colors.len() != dg.n() {
        return Err(Error::contract(format!(
            "assignment has {} entries for {} vertices",
            colors.len(),
            dg.n()
        )));
    }
    if let Some((v, c)) = colors.iter().enumerate().find(|(_, &c)| c >= k) {
        return Err(Error::contract(format!("vertex {v} has color {c} outside 0..{k}")));
    }

    let segments = origin.iter().flat_map(|o| &o.segments);
    let bounds = segments.clone().fold(None, |acc: Option<(i64, i64, i64, i64)>, r| {
        Some(match acc {
            None => (r.x_lo, r.y_lo, r.x_hi, r.y_hi),
            Some((a, b, c, d)) => (a.min(r.x_lo), b.min(r.y_lo), c.max(r.x_hi), d.max(r.y_hi)),
        })
    });
    let (x0, y0, x1, y1) = bounds.unwrap_or((0, 0, 1, 1));
    let extent = (x1 - x0).max(y1 - y0).max(1);
    let margin = extent / 50 + 1;
    let stroke = extent as f64 / 1000.0;
    let hatch = (extent as f64 / 150.0).max(1.0);

    let mut svg = String::new();
    let (vx, vy, vw, vh) = (x0 - margin, y0 - margin, x1 - x0 + 2 * margin, y1 - y0 + 2 * margin);
    let scale = 1000.0 / vw.max(vh) as f64;
    writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{vx} {vy} {vw} {vh}" width="{:.0}" height="{:.0}">"#,
        vw as f64 * scale,
        vh as f64 * scale
    )
    .unwrap();
    writeln!(
        svg,
        r#"<defs><pattern id="hatch" patternUnits="userSpaceOnUse" width="{hatch}" height="{hatch}" patternTransform="rotate(45)"><path d="M0 0V{hatch}" stroke="{CONFLICT_STROKE}" stroke-width="{}"/></pattern></defs>"#,
        hatch / 3.0
    )
    .unwrap();
    // Flip y so the layout's y axis points up.
    writeln!(svg, r#"<g transform="matrix(1 0 0 -1 0 {})">"#, y0 + y1).unwrap();

    for (v, o) in origin.iter().enumerate() {
        let fill = PALETTE[colors[v] % PALETTE.len()];
        for r in &o.segments {
            writeln!(
                svg,
                r##"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}" stroke="#222" stroke-width="{stroke}"><title>{} (vertex {v}, mask {})</title></rect>"##,
                r.x_lo,
                r.y_lo,
                r.width(),
                r.height(),
                escape(&o.feature_id),
                colors[v]
            )
            .unwrap();
        }
    }

    let mut flagged = vec![false; dg.n()];
    for &(u, v) in dg.conflict_edges() {
        if colors[u] == colors[v] {
            flagged[u] = true;
            flagged[v] = true;
        }
    }
    for v in (0..dg.n()).filter(|&v| flagged[v]) {
        for r in &origin[v].segments {
            writeln!(
                svg,
                r#"<path class="conflict" d="M{} {}H{}V{}H{}Z" fill="url(#hatch)" stroke="{CONFLICT_STROKE}" stroke-width="{}"/>"#,
                r.x_lo,
                r.y_lo,
                r.x_hi,
                r.y_hi,
                r.x_lo,
                stroke * 3.0
            )
            .unwrap();
        }
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}
