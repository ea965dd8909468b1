//! Schematic SVG drawings of witness graphs.
//!
//! The first two coordinates are drawn. Vertices take the fill of their
//! color when a coloring is given; otherwise the remaining coordinates are
//! mapped onto a blue-to-red ramp.

use std::fmt::Write as _;

use udcert::udgraph::{Coloring, UnitDistanceGraph};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;

const PALETTE: [&str; 8] = [
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#9a6324",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace("--", "- -")
}

fn ramp(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let r = (255.0 * t).round() as u8;
    let b = (255.0 * (1.0 - t)).round() as u8;
    format!("#{r:02x}40{b:02x}")
}

pub fn render(g: &UnitDistanceGraph, coloring: Option<&Coloring>, config: &str) -> String {
    let pts: Vec<Vec<f64>> = g.points().iter().map(|p| p.to_f64()).collect();
    let xy: Vec<[f64; 2]> = pts
        .iter()
        .map(|c| [c[0], c.get(1).copied().unwrap_or(0.0)])
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in &xy {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    if xy.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let s = (WIDTH - 2.0 * MARGIN) / span;
    let height = ((y1 - y0) * s + 2.0 * MARGIN).ceil();
    let map = |p: [f64; 2]| [MARGIN + (p[0] - x0) * s, height - MARGIN - (p[1] - y0) * s];

    // Depth for the ramp: coordinates past the first two, relative to the slab width.
    let width = g.slab.epsilon.to_f64().max(1e-12);
    let depth = |c: &[f64]| -> f64 {
        if c.len() <= 2 {
            0.5
        } else {
            c[2..].iter().sum::<f64>() / ((c.len() - 2) as f64 * width)
        }
    };

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(out, "<!-- {} -->", escape(config));
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(out, r##"<g stroke="#555555" stroke-width="0.6" stroke-opacity="0.7">"##);
    for &(a, b) in g.edges() {
        let p = map(xy[a]);
        let q = map(xy[b]);
        let _ = writeln!(out, r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#, p[0], p[1], q[0], q[1]);
    }
    out.push_str("</g>\n<g stroke=\"#000000\" stroke-width=\"0.4\">\n");
    for (i, c) in pts.iter().enumerate() {
        let p = map(xy[i]);
        let fill = match coloring {
            Some(col) => PALETTE[col.colors[i] % PALETTE.len()].to_string(),
            None => ramp(depth(c)),
        };
        let label = escape(g.labels().get(i).map(String::as_str).unwrap_or(""));
        let _ = writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="{fill}"><title>{i} {label}</title></circle>"#,
            p[0], p[1]
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}
