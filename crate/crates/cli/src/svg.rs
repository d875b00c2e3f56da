//! Minimal standalone SVG plotting: one panel, axes with ticks, polylines,
//! filled regions and markers. Deterministic output.

use std::fmt::Write;

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 58.0;

pub struct Plot {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    body: String,
    x_label: String,
    y_label: String,
    title: String,
}

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-3..1e4).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s.is_empty() {
            "0".to_string()
        } else {
            s
        }
    } else {
        format!("{v:.2e}")
    }
}

impl Plot {
    pub fn new(
        title: &str,
        x_label: &str,
        y_label: &str,
        x_range: (f64, f64),
        y_range: (f64, f64),
    ) -> Self {
        let pad = 0.04 * (y_range.1 - y_range.0).max(1e-30);
        Self {
            x_min: x_range.0,
            x_max: x_range.1,
            y_min: y_range.0 - pad,
            y_max: y_range.1 + pad,
            body: String::new(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            title: title.to_string(),
        }
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN_LEFT
            + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn sy(&self, y: f64) -> f64 {
        HEIGHT
            - MARGIN_BOTTOM
            - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], stroke: &str, width: f64) {
        let mut d = String::new();
        for (i, (x, y)) in points.iter().enumerate() {
            let _ = write!(
                d,
                "{}{},{}",
                if i == 0 { "M" } else { " L" },
                fmt(self.sx(*x)),
                fmt(self.sy(*y))
            );
        }
        let _ = writeln!(
            self.body,
            r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#
        );
    }

    /// Region between a curve segment and the horizontal level closing it.
    pub fn fill_between_level(&mut self, points: &[(f64, f64)], level: f64, fill: &str) {
        if points.is_empty() {
            return;
        }
        let mut d = String::new();
        let _ = write!(d, "M{},{}", fmt(self.sx(points[0].0)), fmt(self.sy(level)));
        for (x, y) in points {
            let _ = write!(d, " L{},{}", fmt(self.sx(*x)), fmt(self.sy(*y)));
        }
        let last = points[points.len() - 1].0;
        let _ = write!(d, " L{},{} Z", fmt(self.sx(last)), fmt(self.sy(level)));
        let _ = writeln!(self.body, r#"<path d="{d}" fill="{fill}" stroke="none"/>"#);
    }

    pub fn hline(&mut self, y: f64, stroke: &str, dashed: bool) {
        let dash = if dashed {
            r#" stroke-dasharray="7,5""#
        } else {
            ""
        };
        let _ = writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="1.1"{dash}/>"#,
            fmt(self.sx(self.x_min)),
            fmt(self.sy(y)),
            fmt(self.sx(self.x_max)),
            fmt(self.sy(y)),
        );
    }

    pub fn vline(&mut self, x: f64, stroke: &str, dashed: bool) {
        let dash = if dashed {
            r#" stroke-dasharray="7,5""#
        } else {
            ""
        };
        let _ = writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="1.1"{dash}/>"#,
            fmt(self.sx(x)),
            fmt(self.sy(self.y_min)),
            fmt(self.sx(x)),
            fmt(self.sy(self.y_max)),
        );
    }

    pub fn marker(&mut self, x: f64, y: f64, fill: &str, label: &str) {
        let _ = writeln!(
            self.body,
            r##"<circle cx="{}" cy="{}" r="4.5" fill="{fill}" stroke="#202020" stroke-width="1"/>"##,
            fmt(self.sx(x)),
            fmt(self.sy(y)),
        );
        if !label.is_empty() {
            let _ = writeln!(
                self.body,
                r##"<text x="{}" y="{}" font-size="14" fill="#202020">{label}</text>"##,
                fmt(self.sx(x) + 8.0),
                fmt(self.sy(y) - 8.0),
            );
        }
    }

    fn ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        (0..=count)
            .map(|i| lo + (hi - lo) * i as f64 / count as f64)
            .collect()
    }

    pub fn render(&self) -> String {
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(
            svg,
            r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        );
        // frame
        let (x0, y0) = (MARGIN_LEFT, HEIGHT - MARGIN_BOTTOM);
        let (x1, y1) = (WIDTH - MARGIN_RIGHT, MARGIN_TOP);
        let _ = writeln!(
            svg,
            r##"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="#404040" stroke-width="1.2"/>"##,
            x1 - x0,
            y0 - y1
        );
        for tx in Self::ticks(self.x_min, self.x_max, 6) {
            let px = self.sx(tx);
            let _ = writeln!(
                svg,
                r##"<line x1="{px:.3}" y1="{y0}" x2="{px:.3}" y2="{}" stroke="#404040" stroke-width="1"/>"##,
                y0 + 5.0
            );
            let _ = writeln!(
                svg,
                r##"<text x="{px:.3}" y="{}" font-size="13" text-anchor="middle" fill="#202020">{}</text>"##,
                y0 + 21.0,
                tick_label(tx)
            );
        }
        for ty in Self::ticks(self.y_min, self.y_max, 6) {
            let py = self.sy(ty);
            let _ = writeln!(
                svg,
                r##"<line x1="{}" y1="{py:.3}" x2="{x0}" y2="{py:.3}" stroke="#404040" stroke-width="1"/>"##,
                x0 - 5.0
            );
            let _ = writeln!(
                svg,
                r##"<text x="{}" y="{}" font-size="13" text-anchor="end" fill="#202020">{}</text>"##,
                x0 - 9.0,
                py + 4.0,
                tick_label(ty)
            );
        }
        let _ = writeln!(
            svg,
            r##"<text x="{}" y="{}" font-size="15" text-anchor="middle" fill="#202020">{}</text>"##,
            0.5 * (x0 + x1),
            HEIGHT - 16.0,
            self.x_label
        );
        let _ = writeln!(
            svg,
            r##"<text x="20" y="{}" font-size="15" text-anchor="middle" fill="#202020" transform="rotate(-90 20 {})">{}</text>"##,
            0.5 * (y0 + y1),
            0.5 * (y0 + y1),
            self.y_label
        );
        let _ = writeln!(
            svg,
            r##"<text x="{}" y="20" font-size="15" text-anchor="middle" fill="#202020">{}</text>"##,
            0.5 * (x0 + x1),
            self.title
        );
        svg.push_str(&self.body);
        svg.push_str("</svg>\n");
        svg
    }
}
