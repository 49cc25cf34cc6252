//! Curve export: CSV and a self-contained SVG line chart (inline styling,
//! no external assets), with a legend keyed by series name.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::indicator::SaStCurve;
use crate::scalar::Real;

/// One plotted line.
#[derive(Debug, Clone)]
pub struct ChartSeries {
    pub name: String,
    /// (x, y) samples, x ascending.
    pub points: Vec<(f64, f64)>,
}

impl ChartSeries {
    pub fn from_curve<R: Real>(name: impl Into<String>, curve: &SaStCurve<R>) -> Self {
        let points = curve
            .thresholds()
            .iter()
            .zip(curve.accuracies())
            .map(|(&t, &s)| (t.to_f64().unwrap(), s.to_f64().unwrap()))
            .collect();
        Self {
            name: name.into(),
            points,
        }
    }
}

/// Renders a curve as `T,S` CSV text.
pub fn curve_csv<R: Real>(curve: &SaStCurve<R>) -> String {
    let mut out = String::from("T,S\n");
    for (t, s) in curve.thresholds().iter().zip(curve.accuracies()) {
        let _ = writeln!(out, "{t},{s}");
    }
    out
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 56.0;

/// Renders an overlay line chart of the given series to standalone SVG.
pub fn render_line_chart(
    series: &[ChartSeries],
    x_label: &str,
    y_label: &str,
) -> Result<String> {
    if series.is_empty() || series.iter().any(|s| s.points.len() < 2) {
        return Err(Error::TooFewItems { needed: 2, got: 0 });
    }
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            if !(x.is_finite() && y.is_finite()) {
                return Err(Error::NonFinite(format!("point in series `{}`", s.name)));
            }
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if x_max == x_min {
        return Err(Error::InvalidArgument("zero-width x range".into()));
    }
    if y_max == y_min {
        // Flat lines still need a visible band.
        y_min -= 0.5;
        y_max += 0.5;
    }
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // Axes.
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h;
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black" stroke-width="1"/>"#,
        x0 + plot_w
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{}" x2="{x0}" y2="{y0}" stroke="black" stroke-width="1"/>"#,
        MARGIN_TOP
    );

    // Ticks and grid, 5 intervals each axis.
    for k in 0..=5 {
        let fx = x_min + (x_max - x_min) * k as f64 / 5.0;
        let px = sx(fx);
        let _ = writeln!(
            svg,
            r#"<line x1="{px}" y1="{y0}" x2="{px}" y2="{}" stroke="black" stroke-width="1"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{fx:.1}</text>"#,
            y0 + 18.0
        );
        let fy = y_min + (y_max - y_min) * k as f64 / 5.0;
        let py = sy(fy);
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{py}" x2="{x0}" y2="{py}" stroke="black" stroke-width="1"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{fy:.2}</text>"#,
            x0 - 8.0,
            py + 4.0
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{x0}" y1="{py}" x2="{}" y2="{py}" stroke="#dddddd" stroke-width="0.5"/>"##,
            x0 + plot_w
        );
    }

    // Axis labels.
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        x0 + plot_w / 2.0,
        HEIGHT - 12.0,
        xml_escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        xml_escape(y_label)
    );

    // Series polylines plus legend.
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut path = String::new();
        for &(x, y) in &s.points {
            let _ = write!(path, "{:.2},{:.2} ", sx(x), sy(y));
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#,
            path.trim_end()
        );
        let ly = MARGIN_TOP + 16.0 + 18.0 * k as f64;
        let lx = MARGIN_LEFT + plot_w + 16.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2.5"/>"#,
            lx + 22.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            lx + 28.0,
            ly + 4.0,
            xml_escape(&s.name)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
