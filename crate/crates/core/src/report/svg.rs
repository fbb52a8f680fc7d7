//! Deterministic SVG rendering. Every plot is a list of elements in data
//! coordinates mapped onto a fixed canvas by one affine transform per axis.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stats::quantile;

pub const WIDTH: f64 = 720.0;
pub const HEIGHT: f64 = 480.0;

const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;

const PALETTE: [&str; 8] = [
    "#0072B2", "#D55E00", "#009E73", "#CC79A7", "#E69F00", "#56B4E9", "#F0E442", "#000000",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub group: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub label: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PlotSpec {
    Scatter {
        title: String,
        x_label: String,
        y_label: String,
        points: Vec<Point>,
    },
    /// One box per series; whiskers reach the furthest values within 1.5 IQR.
    Boxplot {
        title: String,
        y_label: String,
        series: Vec<Series>,
    },
    /// Horizontal bars, one per label, drawn from zero.
    Bars {
        title: String,
        x_label: String,
        labels: Vec<String>,
        values: Vec<f64>,
    },
    /// Clusters of vertical bars: one cluster per category, one bar per series.
    GroupedBars {
        title: String,
        y_label: String,
        categories: Vec<String>,
        series: Vec<Series>,
    },
}

/// Linear map from a data interval onto a pixel interval.
#[derive(Debug, Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Axis {
    fn fit(values: impl IntoIterator<Item = f64>, px_lo: f64, px_hi: f64, include_zero: bool) -> Axis {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if include_zero {
            lo = lo.min(0.0);
            hi = hi.max(0.0);
        }
        let span = hi - lo;
        let pad = if span > 0.0 { 0.05 * span } else { 0.5 };
        Axis {
            lo: lo - pad,
            hi: hi + pad,
            px_lo,
            px_hi,
        }
    }

    fn map(&self, v: f64) -> f64 {
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }

    fn ticks(&self) -> Vec<f64> {
        (0..TICKS)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (TICKS - 1) as f64)
            .collect()
    }
}

fn px(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Colour per label, assigned by the label's position in sorted order.
struct Colors(Vec<String>);

impl Colors {
    fn new<'a>(labels: impl IntoIterator<Item = &'a str>) -> Colors {
        let set: BTreeSet<&str> = labels.into_iter().collect();
        Colors(set.into_iter().map(String::from).collect())
    }

    fn of(&self, label: &str) -> &'static str {
        let i = self.0.iter().position(|l| l == label).unwrap_or(0);
        PALETTE[i % PALETTE.len()]
    }
}

struct Canvas {
    out: String,
}

impl Canvas {
    fn new(title: &str) -> Canvas {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
            w = WIDTH,
            h = HEIGHT
        );
        let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            px((LEFT + WIDTH - RIGHT) / 2.0),
            escape(title)
        );
        Canvas { out }
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, class: &str, stroke: &str) {
        let _ = writeln!(
            self.out,
            r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}"/>"#,
            px(x1),
            px(y1),
            px(x2),
            px(y2)
        );
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, body: &str) {
        let _ = writeln!(
            self.out,
            r#"<text x="{}" y="{}" text-anchor="{anchor}">{}</text>"#,
            px(x),
            px(y),
            escape(body)
        );
    }

    fn x_axis(&mut self, axis: &Axis, label: &str) {
        let y = HEIGHT - BOTTOM;
        self.line(LEFT, y, WIDTH - RIGHT, y, "axis", "black");
        for t in axis.ticks() {
            let x = axis.map(t);
            self.line(x, y, x, y + 5.0, "tick", "black");
            self.text(x, y + 18.0, "middle", &px(t));
        }
        self.text((LEFT + WIDTH - RIGHT) / 2.0, HEIGHT - 16.0, "middle", label);
    }

    fn y_axis(&mut self, axis: &Axis, label: &str) {
        self.line(LEFT, TOP, LEFT, HEIGHT - BOTTOM, "axis", "black");
        for t in axis.ticks() {
            let y = axis.map(t);
            self.line(LEFT - 5.0, y, LEFT, y, "tick", "black");
            self.text(LEFT - 8.0, y + 4.0, "end", &px(t));
        }
        let (cx, cy) = (18.0, (TOP + HEIGHT - BOTTOM) / 2.0);
        let _ = writeln!(
            self.out,
            r#"<text x="{}" y="{}" text-anchor="middle" transform="rotate(-90 {} {})">{}</text>"#,
            px(cx),
            px(cy),
            px(cx),
            px(cy),
            escape(label)
        );
    }

    fn legend(&mut self, colors: &Colors) {
        let x = WIDTH - RIGHT + 16.0;
        for (i, label) in colors.0.iter().enumerate() {
            let y = TOP + 8.0 + 20.0 * i as f64;
            let _ = writeln!(
                self.out,
                r#"<rect class="legend-key" x="{}" y="{}" width="12" height="12" fill="{}"/>"#,
                px(x),
                px(y),
                colors.of(label)
            );
            self.text(x + 18.0, y + 10.0, "start", label);
        }
    }

    fn finish(mut self) -> Vec<u8> {
        self.out.push_str("</svg>\n");
        self.out.into_bytes()
    }
}

fn check_finite<'a>(what: &str, values: impl IntoIterator<Item = &'a f64>) -> Result<()> {
    match values.into_iter().find(|v| !v.is_finite()) {
        Some(v) => Err(Error::Render(format!("non-finite {what} coordinate {v}"))),
        None => Ok(()),
    }
}

fn plot_x() -> (f64, f64) {
    (LEFT, WIDTH - RIGHT)
}

fn plot_y() -> (f64, f64) {
    (HEIGHT - BOTTOM, TOP)
}

/// Renders a plot to SVG bytes. Identical specs always give identical bytes.
pub fn emit_svg(spec: &PlotSpec) -> Result<Vec<u8>> {
    match spec {
        PlotSpec::Scatter {
            title,
            x_label,
            y_label,
            points,
        } => scatter(title, x_label, y_label, points),
        PlotSpec::Boxplot { title, y_label, series } => boxplot(title, y_label, series),
        PlotSpec::Bars {
            title,
            x_label,
            labels,
            values,
        } => bars(title, x_label, labels, values),
        PlotSpec::GroupedBars {
            title,
            y_label,
            categories,
            series,
        } => grouped_bars(title, y_label, categories, series),
    }
}

fn scatter(title: &str, x_label: &str, y_label: &str, points: &[Point]) -> Result<Vec<u8>> {
    if points.is_empty() {
        return Err(Error::Render("scatter plot has no points".into()));
    }
    check_finite("x", points.iter().map(|p| &p.x))?;
    check_finite("y", points.iter().map(|p| &p.y))?;
    let (x0, x1) = plot_x();
    let (y0, y1) = plot_y();
    let xa = Axis::fit(points.iter().map(|p| p.x), x0, x1, false);
    let ya = Axis::fit(points.iter().map(|p| p.y), y0, y1, false);
    let colors = Colors::new(points.iter().map(|p| p.group.as_str()));
    let mut c = Canvas::new(title);
    c.x_axis(&xa, x_label);
    c.y_axis(&ya, y_label);
    for p in points {
        let _ = writeln!(
            c.out,
            r#"<circle class="point" data-group="{}" cx="{}" cy="{}" r="3.5" fill="{}" fill-opacity="0.8"/>"#,
            escape(&p.group),
            px(xa.map(p.x)),
            px(ya.map(p.y)),
            colors.of(&p.group)
        );
    }
    c.legend(&colors);
    Ok(c.finish())
}

fn boxplot(title: &str, y_label: &str, series: &[Series]) -> Result<Vec<u8>> {
    if series.is_empty() || series.iter().any(|s| s.values.is_empty()) {
        return Err(Error::Render("boxplot needs at least one value per series".into()));
    }
    for s in series {
        check_finite("y", &s.values)?;
    }
    let (x0, x1) = plot_x();
    let (y0, y1) = plot_y();
    let ya = Axis::fit(series.iter().flat_map(|s| s.values.iter().copied()), y0, y1, false);
    let colors = Colors::new(series.iter().map(|s| s.label.as_str()));
    let mut c = Canvas::new(title);
    c.y_axis(&ya, y_label);
    c.line(x0, y0, x1, y0, "axis", "black");
    let slot = (x1 - x0) / series.len() as f64;
    for (i, s) in series.iter().enumerate() {
        let mut v = s.values.clone();
        v.sort_by(f64::total_cmp);
        let (q1, med, q3) = (quantile(&v, 0.25), quantile(&v, 0.5), quantile(&v, 0.75));
        let fence = 1.5 * (q3 - q1);
        let lo = v.iter().copied().find(|&x| x >= q1 - fence).unwrap_or(q1);
        let hi = v.iter().rev().copied().find(|&x| x <= q3 + fence).unwrap_or(q3);
        let center = x0 + slot * (i as f64 + 0.5);
        let half = (slot * 0.3).min(40.0);
        let color = colors.of(&s.label);
        c.line(center, ya.map(lo), center, ya.map(q1), "whisker", "black");
        c.line(center, ya.map(q3), center, ya.map(hi), "whisker", "black");
        let _ = writeln!(
            c.out,
            r#"<rect class="box" data-group="{}" data-q1="{q1}" data-median="{med}" data-q3="{q3}" x="{}" y="{}" width="{}" height="{}" fill="{color}" fill-opacity="0.5" stroke="black"/>"#,
            escape(&s.label),
            px(center - half),
            px(ya.map(q3)),
            px(2.0 * half),
            px(ya.map(q1) - ya.map(q3)),
        );
        c.line(center - half, ya.map(med), center + half, ya.map(med), "median", "black");
        for &x in v.iter().filter(|&&x| x < lo || x > hi) {
            let _ = writeln!(
                c.out,
                r#"<circle class="outlier" cx="{}" cy="{}" r="2.5" fill="none" stroke="{color}"/>"#,
                px(center),
                px(ya.map(x))
            );
        }
        c.text(center, y0 + 18.0, "middle", &s.label);
    }
    Ok(c.finish())
}

fn bars(title: &str, x_label: &str, labels: &[String], values: &[f64]) -> Result<Vec<u8>> {
    if labels.is_empty() || labels.len() != values.len() {
        return Err(Error::Render(format!(
            "bar chart has {} labels and {} values",
            labels.len(),
            values.len()
        )));
    }
    check_finite("x", values)?;
    let (x0, x1) = plot_x();
    let (y0, y1) = plot_y();
    let xa = Axis::fit(values.iter().copied(), x0, x1, true);
    let mut c = Canvas::new(title);
    c.x_axis(&xa, x_label);
    let slot = (y0 - y1) / labels.len() as f64;
    let zero = xa.map(0.0);
    for (i, (label, &v)) in labels.iter().zip(values).enumerate() {
        let top = y1 + slot * i as f64 + slot * 0.15;
        let (left, right) = if v >= 0.0 { (zero, xa.map(v)) } else { (xa.map(v), zero) };
        let fill = if v >= 0.0 { PALETTE[0] } else { PALETTE[1] };
        let _ = writeln!(
            c.out,
            r#"<rect class="bar" data-label="{}" data-value="{v}" x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#,
            escape(label),
            px(left),
            px(top),
            px(right - left),
            px(slot * 0.7)
        );
        c.text(x0 - 6.0, top + slot * 0.35 + 4.0, "end", label);
    }
    c.line(zero, y1, zero, y0, "zero", "black");
    Ok(c.finish())
}

fn grouped_bars(title: &str, y_label: &str, categories: &[String], series: &[Series]) -> Result<Vec<u8>> {
    if categories.is_empty() || series.is_empty() {
        return Err(Error::Render("grouped bar chart needs categories and series".into()));
    }
    for s in series {
        if s.values.len() != categories.len() {
            return Err(Error::Render(format!(
                "series `{}` has {} values for {} categories",
                s.label,
                s.values.len(),
                categories.len()
            )));
        }
        check_finite("y", &s.values)?;
    }
    let (x0, x1) = plot_x();
    let (y0, y1) = plot_y();
    let ya = Axis::fit(series.iter().flat_map(|s| s.values.iter().copied()), y0, y1, true);
    let colors = Colors::new(series.iter().map(|s| s.label.as_str()));
    let mut c = Canvas::new(title);
    c.y_axis(&ya, y_label);
    c.line(x0, y0, x1, y0, "axis", "black");
    let slot = (x1 - x0) / categories.len() as f64;
    let bar = slot * 0.8 / series.len() as f64;
    let zero = ya.map(0.0);
    for (j, cat) in categories.iter().enumerate() {
        let start = x0 + slot * j as f64 + slot * 0.1;
        for (k, s) in series.iter().enumerate() {
            let v = s.values[j];
            let (top, bottom) = if v >= 0.0 { (ya.map(v), zero) } else { (zero, ya.map(v)) };
            let _ = writeln!(
                c.out,
                r#"<rect class="bar" data-category="{}" data-group="{}" data-value="{v}" x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                escape(cat),
                escape(&s.label),
                px(start + bar * k as f64),
                px(top),
                px(bar),
                px(bottom - top),
                colors.of(&s.label)
            );
        }
        c.text(start + slot * 0.4, y0 + 18.0, "middle", cat);
    }
    c.legend(&colors);
    Ok(c.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64, g: &str) -> Point {
        Point { x, y, group: g.into() }
    }

    #[test]
    fn colors_follow_sorted_labels() {
        let c = Colors::new(["b", "a", "c", "a"]);
        assert_eq!(c.of("a"), PALETTE[0]);
        assert_eq!(c.of("b"), PALETTE[1]);
        assert_eq!(c.of("c"), PALETTE[2]);
    }

    #[test]
    fn axis_has_five_percent_margins() {
        let a = Axis::fit([0.0, 10.0], 0.0, 100.0, false);
        assert_eq!((a.lo, a.hi), (-0.5, 10.5));
        assert!((a.map(-0.5) - 0.0).abs() < 1e-12);
        assert!((a.map(10.5) - 100.0).abs() < 1e-12);
    }

    #[test]
    fn constant_data_still_gets_a_range() {
        let a = Axis::fit([3.0, 3.0], 0.0, 100.0, false);
        assert!(a.hi > a.lo);
    }

    #[test]
    fn labels_are_escaped() {
        let svg = emit_svg(&PlotSpec::Scatter {
            title: "a<b & c".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            points: vec![pt(0.0, 0.0, "\"q\"")],
        })
        .unwrap();
        let s = String::from_utf8(svg).unwrap();
        assert!(s.contains("a&lt;b &amp; c"));
        assert!(s.contains("&quot;q&quot;"));
    }

    #[test]
    fn bars_reject_shape_mismatch() {
        let err = emit_svg(&PlotSpec::Bars {
            title: "t".into(),
            x_label: "x".into(),
            labels: vec!["a".into()],
            values: vec![],
        })
        .unwrap_err();
        assert!(matches!(err, Error::Render(_)));
    }
}
