//! Dependency-free SVG line charts of a case-count history and its forecast.
//!
//! Layout (see `docs/plotting.md`): 800x500 canvas, plot margins
//! top/right/bottom/left = 60/20/40/60, linear scales over the data extents
//! padded by 5% on each side. Coordinates are written with two decimals.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::forecast::ForecastResult;
use crate::series::TimeSeries;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_TOP: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 40.0;
const MARGIN_LEFT: f64 = 60.0;
const PAD_FRACTION: f64 = 0.05;
const MAX_X_TICKS: usize = 20;
const Y_TICKS: usize = 5;

struct Scale {
    domain: (f64, f64),
    range: (f64, f64),
}

impl Scale {
    fn padded(lo: f64, hi: f64, range: (f64, f64)) -> Self {
        let span = hi - lo;
        let pad = if span > 0.0 {
            span * PAD_FRACTION
        } else if lo != 0.0 {
            lo.abs() * PAD_FRACTION
        } else {
            1.0
        };
        Self {
            domain: (lo - pad, hi + pad),
            range,
        }
    }

    fn map(&self, v: f64) -> f64 {
        let (d0, d1) = self.domain;
        let (r0, r1) = self.range;
        r0 + (v - d0) / (d1 - d0) * (r1 - r0)
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn points(coords: impl Iterator<Item = (f64, f64)>) -> String {
    coords
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renders the history as one polyline and, when `fc` is given, the
/// forecast as a second polyline over a shaded interval polygon.
pub fn render_svg(history: &TimeSeries, fc: Option<&ForecastResult>, title: &str) -> Result<String> {
    if history.is_empty() {
        return Err(Error::Empty);
    }
    let first = history.start_label();
    let last = fc
        .and_then(|f| f.horizon_labels.last().copied())
        .unwrap_or(history.label(history.len() - 1));

    let mut values: Vec<f64> = history.values().to_vec();
    if let Some(f) = fc {
        values.extend(&f.point);
        values.extend(&f.lower);
        values.extend(&f.upper);
    }
    let finite = values.iter().copied().filter(|v| v.is_finite());
    let y_lo = finite.clone().fold(f64::INFINITY, f64::min);
    let y_hi = finite.fold(f64::NEG_INFINITY, f64::max);
    let (y_lo, y_hi) = if y_lo.is_finite() { (y_lo, y_hi) } else { (0.0, 0.0) };

    let x_scale = Scale::padded(first as f64, last as f64, (MARGIN_LEFT, WIDTH - MARGIN_RIGHT));
    let y_scale = Scale::padded(y_lo, y_hi, (HEIGHT - MARGIN_BOTTOM, MARGIN_TOP));
    let (plot_left, plot_right) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (plot_top, plot_bottom) = (MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="35" text-anchor="middle" font-family="sans-serif" font-size="18">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    // Axes.
    let _ = writeln!(
        svg,
        r#"<line x1="{plot_left:.2}" y1="{plot_bottom:.2}" x2="{plot_right:.2}" y2="{plot_bottom:.2}" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{plot_left:.2}" y1="{plot_top:.2}" x2="{plot_left:.2}" y2="{plot_bottom:.2}" stroke="black"/>"#
    );

    let years = (last - first + 1) as usize;
    let step = years.div_ceil(MAX_X_TICKS).max(1);
    for year in (first..=last).step_by(step) {
        let x = x_scale.map(year as f64);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{plot_bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            plot_bottom + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="12">{year}</text>"#,
            plot_bottom + 20.0
        );
    }
    let (d0, d1) = y_scale.domain;
    for i in 0..Y_TICKS {
        let v = d0 + (d1 - d0) * i as f64 / (Y_TICKS - 1) as f64;
        let y = y_scale.map(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{plot_left:.2}" y2="{y:.2}" stroke="black"/>"#,
            plot_left - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="12">{v:.0}</text>"#,
            plot_left - 8.0,
            y + 4.0
        );
    }

    if let Some(f) = fc {
        let upper = f
            .horizon_labels
            .iter()
            .zip(&f.upper)
            .map(|(&x, &y)| (x_scale.map(x as f64), y_scale.map(y)));
        let lower = f
            .horizon_labels
            .iter()
            .zip(&f.lower)
            .rev()
            .map(|(&x, &y)| (x_scale.map(x as f64), y_scale.map(y)));
        let _ = writeln!(
            svg,
            r##"<polygon class="interval" points="{}" fill="#9ecae1" fill-opacity="0.5" stroke="none"/>"##,
            points(upper.chain(lower))
        );
    }

    let history_points = history
        .labels()
        .zip(history.values())
        .map(|(x, &y)| (x_scale.map(x as f64), y_scale.map(y)));
    let _ = writeln!(
        svg,
        r##"<polyline class="history" points="{}" fill="none" stroke="#1f77b4" stroke-width="2"/>"##,
        points(history_points)
    );

    if let Some(f) = fc {
        let anchor = (history.len() - 1, history.values()[history.len() - 1]);
        let anchor = (x_scale.map(history.label(anchor.0) as f64), y_scale.map(anchor.1));
        let path = std::iter::once(anchor).chain(
            f.horizon_labels
                .iter()
                .zip(&f.point)
                .map(|(&x, &y)| (x_scale.map(x as f64), y_scale.map(y))),
        );
        let _ = writeln!(
            svg,
            r##"<polyline class="forecast" points="{}" fill="none" stroke="#d62728" stroke-width="2" stroke-dasharray="6 4"/>"##,
            points(path)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
