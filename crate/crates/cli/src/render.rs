//! SVG 1.1 drawing of a network, its diametral pairs, and optional shortcuts.

use std::fmt::Write;

use locus_core::{continuous_diameter, Network, Result, ShortcutSet};

use crate::geometry::geometry;

const SIZE: f64 = 800.0;

pub fn svg(net: &Network, overlay: Option<&ShortcutSet>) -> Result<String> {
    let mut pts: Vec<[f64; 2]> = net.vertices().iter().map(|v| v.xy()).collect();
    if let Some(set) = overlay {
        for s in &set.segments {
            pts.push(s.a.to_f64());
            pts.push(s.b.to_f64());
        }
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in &pts {
        x0 = x0.min(p[0]);
        y0 = y0.min(p[1]);
        x1 = x1.max(p[0]);
        y1 = y1.max(p[1]);
    }
    if pts.is_empty() {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let scale = SIZE * 0.9 / span;
    let pad = SIZE * 0.05;
    let map = |p: [f64; 2]| ((p[0] - x0) * scale + pad, SIZE - ((p[1] - y0) * scale + pad));

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).ok();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).ok();
    writeln!(
        out,
        "<style>.edge{{stroke:#333;stroke-width:2}}.vertex{{fill:#111}}.diametral{{fill:none;stroke:#d33;stroke-width:3;stroke-dasharray:8 4}}.shortcut{{stroke:#27c;stroke-width:2.5}}</style>"
    )
    .ok();
    for e in net.edges() {
        let (a, b) = (map(net.vertices()[e.u].xy()), map(net.vertices()[e.v].xy()));
        writeln!(out, r#"<line class="edge" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#, a.0, a.1, b.0, b.1).ok();
    }
    if net.is_connected() && net.edge_count() > 0 {
        let report = continuous_diameter(net)?;
        writeln!(out, "<title>continuous diameter {}</title>", crate::output::round12(report.d)).ok();
        for pr in geometry(net, &report).pairs {
            let pts: Vec<String> = pr.path.iter().map(|&p| map(p)).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
            writeln!(out, r#"<polyline class="diametral" points="{}"/>"#, pts.join(" ")).ok();
        }
    }
    if let Some(set) = overlay {
        for s in &set.segments {
            let (a, b) = (map(s.a.to_f64()), map(s.b.to_f64()));
            writeln!(out, r#"<line class="shortcut" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#, a.0, a.1, b.0, b.1).ok();
        }
    }
    for v in net.vertices() {
        let p = map(v.xy());
        writeln!(out, r#"<circle class="vertex" cx="{:.3}" cy="{:.3}" r="4"><title>{}</title></circle>"#, p.0, p.1, v.id).ok();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
