//! Minimal SVG scatter and line plots.

use std::fmt::Write;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    /// Covers `values` with 5% padding; falls back to `[0, 1]`.
    pub fn covering(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.into_iter().filter(|v| v.is_finite()) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return Self::new(0.0, 1.0);
        }
        if hi - lo < 1e-12 {
            return Self::new(lo - 0.5, hi + 0.5);
        }
        let pad = 0.05 * (hi - lo);
        Self::new(lo - pad, hi + pad)
    }

    fn ticks(&self) -> Vec<f64> {
        let span = self.hi - self.lo;
        let raw = span / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 2.5, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| span / s <= 6.0)
            .unwrap_or(10.0 * mag);
        let first = (self.lo / step).ceil() * step;
        let mut out = Vec::new();
        let mut t = first;
        while t <= self.hi + step * 1e-9 {
            out.push(if t.abs() < step * 1e-9 { 0.0 } else { t });
            t += step;
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x: Range,
    pub y: Range,
    pub points: Vec<(f64, f64)>,
    pub lines: Vec<Vec<(f64, f64)>>,
    /// Horizontal reference lines.
    pub h_lines: Vec<f64>,
}

impl Panel {
    pub fn new(title: &str, x_label: &str, y_label: &str, x: Range, y: Range) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            x,
            y,
            points: Vec::new(),
            lines: Vec::new(),
            h_lines: Vec::new(),
        }
    }
}

pub fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Draws `panel` into the box at `(left, top)` of size `w × h`. Marks
/// outside the axis ranges are clipped.
fn render_panel(out: &mut String, panel: &Panel, id: usize, left: f64, top: f64, w: f64, h: f64) {
    let (ml, mr, mt, mb) = (70.0, 20.0, 40.0, 55.0);
    let (px, py) = (left + ml, top + mt);
    let (pw, ph) = (w - ml - mr, h - mt - mb);
    let sx = |x: f64| px + (x - panel.x.lo) / (panel.x.hi - panel.x.lo) * pw;
    let sy = |y: f64| py + ph - (y - panel.y.lo) / (panel.y.hi - panel.y.lo) * ph;

    let _ = writeln!(
        out,
        r#"<clipPath id="clip{id}"><rect x="{px:.2}" y="{py:.2}" width="{pw:.2}" height="{ph:.2}"/></clipPath>"#
    );
    let _ = writeln!(
        out,
        r##"<rect x="{px:.2}" y="{py:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="#333"/>"##
    );
    for t in panel.x.ticks() {
        let x = sx(t);
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#333"/><text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"##,
            py + ph,
            py + ph + 5.0,
            py + ph + 18.0,
            fmt_tick(t)
        );
    }
    for t in panel.y.ticks() {
        let y = sy(t);
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{px:.2}" y2="{y:.2}" stroke="#333"/><text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"##,
            px - 5.0,
            px - 8.0,
            y + 4.0,
            fmt_tick(t)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">{}</text>"#,
        px + pw / 2.0,
        top + 24.0,
        escape(&panel.title)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
        px + pw / 2.0,
        top + h - 12.0,
        escape(&panel.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">{}</text>"#,
        left + 18.0,
        py + ph / 2.0,
        left + 18.0,
        py + ph / 2.0,
        escape(&panel.y_label)
    );
    let _ = writeln!(out, r#"<g clip-path="url(#clip{id})">"#);
    for &y in &panel.h_lines {
        let _ = writeln!(
            out,
            r##"<line x1="{px:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
            sy(y),
            px + pw,
            sy(y)
        );
    }
    for line in &panel.lines {
        let pts: Vec<String> = line
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        if pts.len() >= 2 {
            let _ = writeln!(
                out,
                r##"<polyline points="{}" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##,
                pts.join(" ")
            );
        }
    }
    for &(x, y) in panel.points.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="#1f5fa8" fill-opacity="0.6"/>"##,
            sx(x),
            sy(y)
        );
    }
    out.push_str("</g>\n");
}

fn document(body: &str) -> String {
    format!(
        concat!(
            r#"<?xml version="1.0" encoding="UTF-8"?>"#,
            "\n",
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            "\n",
            r#"<rect width="{w}" height="{h}" fill="white"/>"#,
            "\n{body}</svg>\n"
        ),
        w = WIDTH,
        h = HEIGHT,
        body = body
    )
}

pub fn single(panel: &Panel) -> String {
    let mut body = String::new();
    render_panel(&mut body, panel, 0, 0.0, 0.0, WIDTH, HEIGHT);
    document(&body)
}

/// Panels laid out row by row on a `cols`-wide grid.
pub fn grid(panels: &[Panel], cols: usize) -> String {
    let rows = panels.len().div_ceil(cols).max(1);
    let (w, h) = (WIDTH / cols as f64, HEIGHT / rows as f64);
    let mut body = String::new();
    for (i, p) in panels.iter().enumerate() {
        let (r, c) = (i / cols, i % cols);
        render_panel(&mut body, p, i, c as f64 * w, r as f64 * h, w, h);
    }
    document(&body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_cover_range() {
        let t = Range::new(0.0, 200.0).ticks();
        assert_eq!(t.first(), Some(&0.0));
        assert_eq!(t.last(), Some(&200.0));
        let t = Range::new(0.0, 1.0).ticks();
        assert!(t.contains(&0.5) || t.contains(&0.4));
    }

    #[test]
    fn document_shape() {
        let mut p = Panel::new("I <n>", "n", "I", Range::new(0.0, 10.0), Range::new(0.0, 1.0));
        p.points = vec![(1.0, 0.5), (2.0, 3.0)];
        let s = single(&p);
        assert!(s.starts_with("<?xml"));
        assert!(s.contains(r#"width="800" height="600""#));
        assert!(s.contains("I &lt;n&gt;"));
        assert!(s.contains("clip-path"));
        assert_eq!(s.matches("<circle").count(), 2);
    }

    #[test]
    fn degenerate_range() {
        let r = Range::covering([3.0, 3.0]);
        assert!(r.lo < 3.0 && r.hi > 3.0);
        assert_eq!(Range::covering([f64::NAN]), Range::new(0.0, 1.0));
    }
}
