//! Minimal static SVG 1.1 plots.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f4e9c", "#c0392b", "#2e8b57", "#7d3c98"];

pub enum Style {
    Line,
    Stem,
}

pub struct Series<'a> {
    pub label: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

pub struct Plot<'a> {
    pub title: String,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub style: Style,
    pub series: Vec<Series<'a>>,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }
    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    v.filter(|x| x.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)))
}

/// Tick positions at 1, 2 or 5 times a power of ten.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| raw <= *s)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 {
        "0".into()
    } else if !(1e-3..1e5).contains(&a) {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Keeps, per horizontal pixel, the first, lowest, highest and last point,
/// so dense series keep their envelope at a bounded size.
fn decimate(f: &Frame, x: &[f64], y: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < x.len() {
        let col = f.px(x[i]).floor();
        let mut j = i;
        let (mut lo, mut hi) = (i, i);
        while j < x.len() && f.px(x[j]).floor() == col {
            if y[j] < y[lo] {
                lo = j;
            }
            if y[j] > y[hi] {
                hi = j;
            }
            j += 1;
        }
        let mut keep = vec![i, lo, hi, j - 1];
        keep.sort_unstable();
        keep.dedup();
        out.extend(keep.into_iter().map(|k| (f.px(x[k]), f.py(y[k]))));
        i = j;
    }
    out
}

impl Plot<'_> {
    pub fn render(&self) -> String {
        let (mut x0, mut x1) = range(self.series.iter().flat_map(|s| s.x.iter().copied()));
        let (mut y0, mut y1) = range(self.series.iter().flat_map(|s| s.y.iter().copied()));
        if !x0.is_finite() {
            (x0, x1) = (0.0, 1.0);
        }
        if !y0.is_finite() {
            (y0, y1) = (0.0, 1.0);
        }
        y0 = y0.min(0.0);
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
        if matches!(self.style, Style::Stem) {
            let pad = 0.5 * (x1 - x0) / self.series.first().map_or(1, |s| s.x.len().max(1)) as f64;
            x0 -= pad;
            x1 += pad;
        }
        y1 += 0.05 * (y1 - y0);
        let f = Frame { x0, x1, y0, y1 };

        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let (bx, by) = (HEIGHT - BOTTOM, WIDTH - RIGHT);
        let _ = writeln!(s, r#"<path d="M{LEFT} {TOP}V{bx}H{by}" fill="none" stroke="black"/>"#);
        for t in ticks(f.x0, f.x1) {
            let x = f.px(t);
            let _ = writeln!(
                s,
                r#"<path d="M{x:.2} {bx}v5" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                bx + 18.0,
                tick_label(t)
            );
        }
        for t in ticks(f.y0, f.y1) {
            let y = f.py(t);
            let _ = writeln!(
                s,
                r#"<path d="M{LEFT} {y:.2}h-5" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                LEFT - 8.0,
                y + 4.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (LEFT + WIDTH - RIGHT) / 2.0,
            HEIGHT - 10.0,
            escape(self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            (TOP + bx) / 2.0,
            (TOP + bx) / 2.0,
            escape(self.y_label)
        );

        for (k, ser) in self.series.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            match self.style {
                Style::Line => {
                    let pts = decimate(&f, ser.x, ser.y);
                    let mut d = String::new();
                    for (i, (x, y)) in pts.iter().enumerate() {
                        let _ = write!(d, "{}{x:.2} {y:.2}", if i == 0 { "M" } else { "L" });
                    }
                    let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1"/>"#);
                }
                Style::Stem => {
                    let base = f.py(0.0);
                    let mut d = String::new();
                    // Later series sit slightly right so overlapping stems stay visible.
                    let shift = 2.0 * k as f64;
                    for (x, y) in ser.x.iter().zip(ser.y) {
                        let _ = write!(d, "M{:.2} {base:.2}V{:.2}", f.px(*x) + shift, f.py(*y));
                    }
                    let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#);
                }
            }
            let ly = TOP + 8.0 + 16.0 * k as f64;
            let lx = WIDTH - RIGHT - 230.0;
            let _ = writeln!(
                s,
                r#"<path d="M{lx} {ly}h20" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                lx + 26.0,
                ly + 4.0,
                escape(ser.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}
