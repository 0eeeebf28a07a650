//! Minimal standalone SVG charts: line plots of node profiles and the
//! horizontal-bar tornado chart for PRCC values.

use std::fmt::Write;

use crate::sensitivity::TornadoRow;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;
const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.2e}")
    } else {
        format!("{v:.2}")
    }
}

#[derive(Debug, Clone, Copy)]
struct Axis {
    min: f64,
    max: f64,
    lo_px: f64,
    hi_px: f64,
}

impl Axis {
    fn new(min: f64, max: f64, lo_px: f64, hi_px: f64) -> Self {
        let (min, max) = if (max - min).abs() <= f64::EPSILON * max.abs().max(1.0) {
            let pad = if min == 0.0 { 1.0 } else { 0.05 * min.abs() };
            (min - pad, max + pad)
        } else {
            (min, max)
        };
        Axis { min, max, lo_px, hi_px }
    }

    fn px(&self, v: f64) -> f64 {
        self.lo_px + (v - self.min) / (self.max - self.min) * (self.hi_px - self.lo_px)
    }

    fn ticks(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        (0..=n).map(move |k| self.min + (self.max - self.min) * k as f64 / n as f64)
    }
}

#[derive(Debug, Clone)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<(String, Vec<(f64, f64)>)>,
}

impl LineChart {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        LineChart {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
        }
    }

    pub fn series(mut self, name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        self.series.push((name.into(), points));
        self
    }

    pub fn render(&self) -> String {
        let finite = self
            .series
            .iter()
            .flat_map(|(_, pts)| pts.iter())
            .filter(|(x, y)| x.is_finite() && y.is_finite());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in finite {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        let xa = Axis::new(x0, x1, MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
        let ya = Axis::new(y0, y1, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);

        let mut svg = header(&self.title);
        frame(&mut svg, &xa, &ya, &self.x_label, &self.y_label);
        for (k, (name, pts)) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let path: Vec<String> = pts
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", xa.px(x), ya.px(y)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                path.join(" ")
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" font-size="12" fill="{color}">{}</text>"#,
                WIDTH - MARGIN_RIGHT - 120.0,
                MARGIN_TOP + 14.0 * (k as f64 + 1.0),
                escape(name)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn header(title: &str) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" font-size="15" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    svg
}

fn frame(svg: &mut String, xa: &Axis, ya: &Axis, x_label: &str, y_label: &str) {
    let (left, right) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (top, bottom) = (MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);
    let _ = writeln!(
        svg,
        r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    for t in xa.ticks(5) {
        let x = xa.px(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.1}" y1="{bottom}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{x:.1}" y="{:.1}" font-size="11" text-anchor="middle">{}</text>"#,
            bottom + 5.0,
            bottom + 18.0,
            tick_label(t)
        );
    }
    for t in ya.ticks(5) {
        let y = ya.px(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{left}" y2="{y:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">{}</text>"#,
            left - 5.0,
            left - 8.0,
            y + 4.0,
            tick_label(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle">{}</text>"#,
        (left + right) / 2.0,
        HEIGHT - 10.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.1}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        (top + bottom) / 2.0,
        (top + bottom) / 2.0,
        escape(y_label)
    );
}

/// Horizontal bars on [-1, 1] with dashed lines at ±`threshold`.
pub fn tornado_svg(rows: &[TornadoRow], threshold: f64, title: &str) -> String {
    let xa = Axis::new(-1.0, 1.0, MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (top, bottom) = (MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);
    let band = (bottom - top) / rows.len().max(1) as f64;
    let mut svg = header(title);
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - MARGIN_RIGHT - MARGIN_LEFT,
        bottom - top
    );
    for t in xa.ticks(4) {
        let x = xa.px(t);
        let _ = writeln!(
            svg,
            r#"<text x="{x:.1}" y="{:.1}" font-size="11" text-anchor="middle">{t:.1}</text>"#,
            bottom + 18.0
        );
    }
    for (k, row) in rows.iter().enumerate() {
        let y = top + band * (k as f64 + 0.2);
        let (x_start, x_end) = if row.prcc >= 0.0 {
            (xa.px(0.0), xa.px(row.prcc))
        } else {
            (xa.px(row.prcc), xa.px(0.0))
        };
        let color = if row.prcc >= 0.0 { PALETTE[0] } else { PALETTE[1] };
        let _ = writeln!(
            svg,
            r#"<rect x="{x_start:.1}" y="{y:.1}" width="{:.1}" height="{:.1}" fill="{color}"/>"#,
            (x_end - x_start).max(0.5),
            band * 0.6
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 6.0,
            y + band * 0.4,
            escape(&row.parameter)
        );
    }
    for t in [-threshold, 0.0, threshold] {
        let x = xa.px(t);
        let dash = if t == 0.0 { "" } else { r#" stroke-dasharray="5,4""# };
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.1}" y1="{top}" x2="{x:.1}" y2="{bottom}" stroke="black"{dash}/>"#
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle">PRCC</text>"#,
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        HEIGHT - 10.0
    );
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_chart_is_wellformed() {
        let svg = LineChart::new("S at t = 5", "x (mm)", "cells")
            .series("S", vec![(0.0, 1.0), (1.0, 2.0), (2.0, f64::NAN)])
            .render();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn flat_series_gets_padded_axis() {
        let svg = LineChart::new("flat", "x", "y")
            .series("I", vec![(0.0, 0.0), (1.0, 0.0)])
            .render();
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }

    #[test]
    fn tornado_draws_threshold_lines() {
        let rows = vec![
            TornadoRow {
                parameter: "beta1".into(),
                prcc: 0.9,
                abs_prcc: 0.9,
                significant: true,
            },
            TornadoRow {
                parameter: "d_V".into(),
                prcc: -0.7,
                abs_prcc: 0.7,
                significant: true,
            },
        ];
        let svg = tornado_svg(&rows, 0.5, "R0");
        assert_eq!(svg.matches("stroke-dasharray").count(), 2);
        assert!(svg.contains(">beta1<") && svg.contains(">d_V<"));
    }
}
