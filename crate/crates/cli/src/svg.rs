//! SVG 1.1 figures: bars or overlapping trapezoids drawn to scale, the
//! centroid as a labeled dot, and the comparison midline as a dashed line.
//!
//! All coordinates are printed with three decimals so identical inputs give
//! identical bytes.

use std::fmt::Write as _;

use fuzzmark_core::comparison::CohortResult;
use fuzzmark_core::fuzzy_core::{trapezoid_cell, trapezoid_cells};
use fuzzmark_core::ModelKind;

use crate::report::rational_string;

const WIDTH: f64 = 640.0;
const PANEL_HEIGHT: f64 = 300.0;
const MARGIN: f64 = 48.0;
const FILLS: [&str; 5] = ["#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2"];

struct Frame {
    top: f64,
    x_scale: f64,
    y_scale: f64,
}

impl Frame {
    fn new(panel: usize, extent: f64) -> Self {
        Self {
            top: panel as f64 * PANEL_HEIGHT,
            x_scale: (WIDTH - 2.0 * MARGIN) / extent,
            y_scale: PANEL_HEIGHT - 2.0 * MARGIN,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + x * self.x_scale
    }

    fn py(&self, y: f64) -> f64 {
        self.top + PANEL_HEIGHT - MARGIN - y * self.y_scale
    }

    fn point(&self, (x, y): (f64, f64)) -> String {
        format!("{:.3},{:.3}", self.px(x), self.py(y))
    }
}

fn short(x: f64) -> String {
    match rational_string(x) {
        Some(r) => r,
        None => format!("{x:.4}"),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Cell outlines of a cohort's figure, one per nonzero level.
fn shapes(cohort: &CohortResult) -> Vec<(usize, Vec<(f64, f64)>)> {
    let d = cohort.distribution();
    match cohort.model() {
        ModelKind::Rectangular => d
            .levels()
            .filter(|&(_, y)| y > 0.0)
            .map(|(i, y)| {
                let (lo, hi) = ((i - 1) as f64, i as f64);
                (i, vec![(lo, 0.0), (hi, 0.0), (hi, y), (lo, y)])
            })
            .collect(),
        model => trapezoid_cells(d, model)
            .expect("trapezoidal model")
            .into_iter()
            .filter(|c| c.height > 0.0)
            .map(|c| (c.index, c.vertices().to_vec()))
            .collect(),
    }
}

fn panel(out: &mut String, index: usize, cohort: &CohortResult) {
    let model = cohort.model();
    let d = cohort.distribution();
    let extent = model.extent(d.len());
    let f = Frame::new(index, extent);

    writeln!(out, r#"  <g id="panel-{index}">"#).unwrap();
    writeln!(
        out,
        r#"    <text x="{:.3}" y="{:.3}" font-size="14">{} ({})</text>"#,
        MARGIN,
        f.top + MARGIN / 2.0,
        escape(cohort.label()),
        model
    )
    .unwrap();
    writeln!(
        out,
        r##"    <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#333" stroke-width="1"/>"##,
        f.px(0.0),
        f.py(0.0),
        f.px(extent),
        f.py(0.0)
    )
    .unwrap();

    let opacity = if model == ModelKind::Rectangular {
        "0.8"
    } else {
        "0.45"
    };
    for (i, vertices) in shapes(cohort) {
        let points: Vec<String> = vertices.iter().map(|&v| f.point(v)).collect();
        writeln!(
            out,
            r##"    <polygon points="{}" fill="{}" fill-opacity="{opacity}" stroke="#222" stroke-width="1"/>"##,
            points.join(" "),
            FILLS[(i - 1) % FILLS.len()]
        )
        .unwrap();
    }

    for (i, label) in d.labels().iter().enumerate() {
        let center = match model.trapezoid_base() {
            None => i as f64 + 0.5,
            Some(b) => trapezoid_cell(i + 1, b, 0.0)
                .expect("positive base")
                .center_x(),
        };
        writeln!(
            out,
            r#"    <text x="{:.3}" y="{:.3}" font-size="12" text-anchor="middle">{}</text>"#,
            f.px(center),
            f.py(0.0) + 16.0,
            escape(label)
        )
        .unwrap();
    }

    let threshold = cohort.threshold();
    writeln!(
        out,
        r##"    <line x1="{x:.3}" y1="{:.3}" x2="{x:.3}" y2="{:.3}" stroke="#888" stroke-dasharray="4 3"/>"##,
        f.py(0.0),
        f.py(1.0),
        x = f.px(threshold)
    )
    .unwrap();

    let c = cohort.centroid();
    writeln!(
        out,
        r##"    <circle cx="{:.3}" cy="{:.3}" r="4" fill="#000"/>"##,
        f.px(c.x),
        f.py(c.y)
    )
    .unwrap();
    writeln!(
        out,
        r#"    <text x="{:.3}" y="{:.3}" font-size="12">({}, {})</text>"#,
        f.px(c.x) + 6.0,
        f.py(c.y) - 6.0,
        short(c.x),
        short(c.y)
    )
    .unwrap();
    writeln!(out, "  </g>").unwrap();
}

/// One stacked panel per cohort.
pub fn render_svg(cohorts: &[CohortResult]) -> String {
    let height = PANEL_HEIGHT * cohorts.len().max(1) as f64;
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}">"#
    )
    .unwrap();
    writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (i, c) in cohorts.iter().enumerate() {
        panel(&mut out, i, c);
    }
    writeln!(out, "</svg>").unwrap();
    out
}
