//! Minimal SVG plots of diagrams and projected clouds.

use std::fmt::Write as _;

use crate::domain::PointCloud;
use crate::rips::PersistenceDiagram;

const SIZE: f64 = 400.0;
const MARGIN: f64 = 40.0;
const COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

struct Frame {
    lo: [f64; 2],
    hi: [f64; 2],
}

impl Frame {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let span = |k: usize| (self.hi[k] - self.lo[k]).max(1e-12);
        let px = MARGIN + (x - self.lo[0]) / span(0) * (SIZE - 2.0 * MARGIN);
        let py = SIZE - MARGIN - (y - self.lo[1]) / span(1) * (SIZE - 2.0 * MARGIN);
        (px, py)
    }
}

fn open(svg: &mut String, title: &str) {
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="20" font-family="sans-serif" font-size="14" text-anchor="middle">{title}</text>"#,
        SIZE / 2.0
    );
}

fn axes(svg: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let (x0, y0) = frame.map(frame.lo[0], frame.lo[1]);
    let (x1, y1) = frame.map(frame.hi[0], frame.hi[1]);
    let _ = writeln!(
        svg,
        r#"<path d="M{x0:.2},{y1:.2} L{x0:.2},{y0:.2} L{x1:.2},{y0:.2}" stroke="black" fill="none"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{x_label}</text>"#,
        (x0 + x1) / 2.0,
        SIZE - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="12" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 12 {:.2})">{y_label}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x0:.2}" y="{:.2}" font-family="sans-serif" font-size="10">{:.3}</text>"#,
        y0 + 14.0,
        frame.lo[0]
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x1:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="end">{:.3}</text>"#,
        y0 + 14.0,
        frame.hi[0]
    );
}

/// Birth/death scatter with the diagonal. Features alive at the cap are
/// drawn as hollow markers on the top edge.
pub fn diagram_svg(diagram: &PersistenceDiagram) -> String {
    let finite_max = diagram
        .features()
        .iter()
        .filter(|f| f.death.is_finite())
        .map(|f| f.death)
        .fold(0.0, f64::max);
    let top = diagram
        .max_eps()
        .min(finite_max * 1.1)
        .max(finite_max)
        .max(1e-9);
    let frame = Frame {
        lo: [0.0, 0.0],
        hi: [top, top],
    };
    let mut svg = String::new();
    open(&mut svg, "persistence diagram");
    axes(&mut svg, &frame, "birth", "death");
    let (dx0, dy0) = frame.map(0.0, 0.0);
    let (dx1, dy1) = frame.map(top, top);
    let _ = writeln!(
        svg,
        r#"<line x1="{dx0:.2}" y1="{dy0:.2}" x2="{dx1:.2}" y2="{dy1:.2}" stroke="gray" stroke-dasharray="4 3"/>"#
    );
    for f in diagram.features() {
        let color = COLORS[f.dim.min(2)];
        let (x, y) = frame.map(f.birth.min(top), f.death.min(top));
        let fill = if f.death.is_finite() { color } else { "none" };
        let _ = writeln!(
            svg,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{fill}" stroke="{color}"><title>H{} ({}, {})</title></circle>"#,
            f.dim, f.birth, f.death
        );
    }
    for (dim, color) in COLORS.iter().enumerate() {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" fill="{color}">H{dim}</text>"#,
            SIZE - MARGIN - 20.0,
            MARGIN + 14.0 * dim as f64 + 10.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// First two coordinates of a cloud as a closed polyline in label order.
pub fn pca_svg(cloud: &PointCloud) -> String {
    let y_of = |p: &[f64]| p.get(1).copied().unwrap_or(0.0);
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in cloud.points() {
        lo[0] = lo[0].min(p[0]);
        hi[0] = hi[0].max(p[0]);
        lo[1] = lo[1].min(y_of(p));
        hi[1] = hi[1].max(y_of(p));
    }
    if cloud.is_empty() {
        lo = [0.0; 2];
        hi = [1.0; 2];
    }
    let frame = Frame { lo, hi };
    let mut svg = String::new();
    open(&mut svg, "principal components");
    axes(&mut svg, &frame, "PC1", "PC2");
    let mut order: Vec<usize> = (0..cloud.len()).collect();
    if let Some(labels) = cloud.labels() {
        if labels.iter().all(|l| l.angle().is_some()) {
            order.sort_by(|&a, &b| {
                labels[a]
                    .angle()
                    .unwrap()
                    .total_cmp(&labels[b].angle().unwrap())
            });
        }
    }
    let mut d = String::new();
    for (k, &i) in order.iter().enumerate() {
        let p = cloud.point(i);
        let (x, y) = frame.map(p[0], y_of(p));
        let _ = write!(d, "{}{x:.2},{y:.2} ", if k == 0 { "M" } else { "L" });
    }
    if !order.is_empty() {
        d.push('Z');
    }
    let _ = writeln!(
        svg,
        r#"<path d="{}" stroke="{}" stroke-width="1" fill="none"/>"#,
        d.trim_end(),
        COLORS[0]
    );
    svg.push_str("</svg>\n");
    svg
}
