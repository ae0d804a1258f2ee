//! Self-contained SVG renderings: decision graph, sorted decision values and
//! 2-D scatter plots. No fonts or scripts are referenced beyond the generic
//! `sans-serif` family.

use std::fmt::Write;

use crate::dpc::DpcProfile;
use crate::{Dataset, Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 48.0;

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#393b79", "#ad494a",
];

pub fn color(label: usize) -> &'static str {
    PALETTE[label % PALETTE.len()]
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Axis range over finite values, padded by 5%; infinities are drawn at the
/// top of the range.
fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi == lo {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn tick_label(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e4).contains(&a) {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

struct Canvas {
    svg: String,
    x: (f64, f64),
    y: (f64, f64),
}

impl Canvas {
    fn new(title: &str, x_label: &str, y_label: &str, x: (f64, f64), y: (f64, f64)) -> Self {
        let mut svg = String::new();
        let _ = write!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = write!(
            svg,
            r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        );
        let _ = write!(
            svg,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(title)
        );
        let mut c = Canvas { svg, x, y };
        c.axes(x_label, y_label);
        c
    }

    fn px(&self, v: f64) -> f64 {
        let v = if v.is_finite() { v } else { self.x.1 };
        MARGIN_LEFT + (v - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, v: f64) -> f64 {
        let v = if v.is_finite() { v } else { self.y.1 };
        HEIGHT
            - MARGIN_BOTTOM
            - (v - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }

    fn axes(&mut self, x_label: &str, y_label: &str) {
        let (l, r) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
        let (t, b) = (MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);
        let _ = write!(
            self.svg,
            r##"<path d="M{l},{t} L{l},{b} L{r},{b}" fill="none" stroke="#333"/>"##
        );
        for step in 0..=4 {
            let f = step as f64 / 4.0;
            let xv = self.x.0 + f * (self.x.1 - self.x.0);
            let yv = self.y.0 + f * (self.y.1 - self.y.0);
            let (xp, yp) = (self.px(xv), self.py(yv));
            let _ = write!(
                self.svg,
                r##"<line x1="{xp:.1}" y1="{b}" x2="{xp:.1}" y2="{}" stroke="#333"/><text x="{xp:.1}" y="{}" text-anchor="middle">{}</text>"##,
                b + 4.0,
                b + 17.0,
                tick_label(xv)
            );
            let _ = write!(
                self.svg,
                r##"<line x1="{}" y1="{yp:.1}" x2="{l}" y2="{yp:.1}" stroke="#333"/><text x="{}" y="{:.1}" text-anchor="end">{}</text>"##,
                l - 4.0,
                l - 6.0,
                yp + 4.0,
                tick_label(yv)
            );
        }
        let _ = write!(
            self.svg,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            (l + r) / 2.0,
            HEIGHT - 10.0,
            escape(x_label)
        );
        let _ = write!(
            self.svg,
            r#"<text transform="translate(16,{}) rotate(-90)" text-anchor="middle">{}</text>"#,
            (t + b) / 2.0,
            escape(y_label)
        );
    }

    fn dot(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        let _ = write!(
            self.svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{r}" fill="{fill}" fill-opacity="0.8"/>"#,
            self.px(x),
            self.py(y)
        );
    }

    fn marker(&mut self, x: f64, y: f64) {
        let _ = write!(
            self.svg,
            r##"<circle cx="{:.2}" cy="{:.2}" r="7" fill="none" stroke="#000" stroke-width="2"/>"##,
            self.px(x),
            self.py(y)
        );
    }

    fn finish(mut self) -> String {
        self.svg.push_str("</svg>\n");
        self.svg
    }
}

/// Density against separation, with the given centres circled.
pub fn decision_graph(profile: &DpcProfile, centers: &[usize], title: &str) -> String {
    let x = range(profile.rho.iter().copied());
    let y = range(profile.delta.iter().copied());
    let mut c = Canvas::new(title, "local density \u{3c1}", "separation \u{3b4}", x, y);
    for (i, (&r, &d)) in profile.rho.iter().zip(&profile.delta).enumerate() {
        let fill = match centers.iter().position(|&c| c == i) {
            Some(id) => color(id),
            None => "#888",
        };
        c.dot(r, d, 2.5, fill);
    }
    for &i in centers {
        c.marker(profile.rho[i], profile.delta[i]);
    }
    c.finish()
}

/// Sorted decision values for the first `limit` ranks, with the mutation
/// point drawn as a dashed line.
pub fn gamma_chart(sorted_gamma: &[f64], m_p: usize, limit: usize, title: &str) -> String {
    let shown = &sorted_gamma[..limit
        .clamp(1, sorted_gamma.len().max(1))
        .min(sorted_gamma.len())];
    let x = (0.5, shown.len() as f64 + 0.5);
    let (_, hi) = range(shown.iter().copied());
    let y = (0.0, hi.max(f64::MIN_POSITIVE));
    let mut c = Canvas::new(title, "rank", "decision value \u{3b3}", x, y);
    let bar = (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / shown.len() as f64 * 0.8;
    for (r, &g) in shown.iter().enumerate() {
        let rank = r + 1;
        let (top, base) = (c.py(g), c.py(0.0));
        let fill = if rank <= m_p { "#d62728" } else { "#1f77b4" };
        let _ = write!(
            c.svg,
            r#"<rect x="{:.2}" y="{top:.2}" width="{bar:.2}" height="{:.2}" fill="{fill}"/>"#,
            c.px(rank as f64) - bar / 2.0,
            (base - top).max(0.0)
        );
    }
    if m_p >= 1 && m_p <= shown.len() {
        let xp = c.px(m_p as f64 + 0.5);
        let _ = write!(
            c.svg,
            r##"<line x1="{xp:.2}" y1="{MARGIN_TOP}" x2="{xp:.2}" y2="{}" stroke="#000" stroke-dasharray="5,4"/><text x="{:.2}" y="{}">mutation point M = {m_p}</text>"##,
            HEIGHT - MARGIN_BOTTOM,
            xp + 4.0,
            MARGIN_TOP + 14.0
        );
    }
    c.finish()
}

/// Two-dimensional points coloured by label; `centers` are circled.
pub fn scatter(data: &Dataset, labels: &[usize], centers: &[usize], title: &str) -> Result<String> {
    if data.is_empty() {
        return Err(Error::Plot("nothing to plot".into()));
    }
    if data.dim() != 2 {
        return Err(Error::Plot(format!(
            "scatter needs 2-D data, got {} dimensions (reduce it first)",
            data.dim()
        )));
    }
    if labels.len() != data.len() {
        return Err(Error::LengthMismatch {
            truth: data.len(),
            pred: labels.len(),
        });
    }
    let x = range(data.points().map(|p| p[0]));
    let y = range(data.points().map(|p| p[1]));
    let mut c = Canvas::new(title, "x\u{2081}", "x\u{2082}", x, y);
    for (p, &l) in data.points().zip(labels) {
        c.dot(p[0], p[1], 2.5, color(l));
    }
    for &i in centers {
        let p = data.point(i);
        c.marker(p[0], p[1]);
    }
    Ok(c.finish())
}
