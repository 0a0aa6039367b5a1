//! Minimal log-x regret chart: mean regret with a one-stderr band and the
//! lower-bound curve, dashed.

use std::fmt::Write;

use crate::csv::Row;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 450.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

struct Frame {
    log_lo: f64,
    log_hi: f64,
    y_hi: f64,
}

impl Frame {
    fn x(&self, t: u64) -> f64 {
        let span = (self.log_hi - self.log_lo).max(1e-12);
        LEFT + ((t as f64).log10() - self.log_lo) / span * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - v / self.y_hi * (HEIGHT - TOP - BOTTOM)
    }
}

/// Rounds up to 1, 2 or 5 times a power of ten.
fn nice_ceiling(v: f64) -> f64 {
    if v <= 0.0 {
        return 1.0;
    }
    let p = 10f64.powf(v.log10().floor());
    [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * p).find(|&c| c >= v).unwrap_or(10.0 * p)
}

fn polyline(points: impl Iterator<Item = (f64, f64)>) -> String {
    points.map(|(x, y)| format!("{x:.2},{y:.2}")).collect::<Vec<_>>().join(" ")
}

pub fn render(title: &str, rows: &[Row]) -> String {
    let mut svg = String::new();
    let first = rows.first().map_or(1, |r| r.t.max(1));
    let last = rows.last().map_or(10, |r| r.t.max(1));
    let top_value = rows
        .iter()
        .flat_map(|r| [r.mean_regret + r.stderr.unwrap_or(0.0), r.lower_bound.unwrap_or(0.0)])
        .fold(0.0f64, f64::max);
    let frame = Frame { log_lo: (first as f64).log10(), log_hi: (last as f64).log10(), y_hi: nice_ceiling(top_value) };

    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));

    // axes
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(svg, r#"<path d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" fill="none" stroke="black"/>"#);
    let mut decade = 10f64.powf(frame.log_lo.ceil());
    while decade <= last as f64 {
        let x = frame.x(decade as u64);
        let _ = writeln!(svg, r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{}" text-anchor="middle">1e{}</text>"#,
            y0 + 18.0,
            decade.log10().round()
        );
        decade *= 10.0;
    }
    for i in 0..=5 {
        let v = frame.y_hi * i as f64 / 5.0;
        let y = frame.y(v);
        let _ = writeln!(svg, r#"<line x1="{}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(svg, r#"<text x="{}" y="{:.2}" text-anchor="end">{v}</text>"#, x0 - 8.0, y + 4.0);
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">round t</text>"#, (x0 + x1) / 2.0, HEIGHT - 12.0);
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">cumulative regret</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    if rows.iter().any(|r| r.stderr.is_some()) {
        let upper = rows.iter().map(|r| (frame.x(r.t), frame.y(r.mean_regret + r.stderr.unwrap_or(0.0))));
        let lower = rows.iter().rev().map(|r| (frame.x(r.t), frame.y((r.mean_regret - r.stderr.unwrap_or(0.0)).max(0.0))));
        let _ = writeln!(svg, r##"<polygon points="{}" fill="#1f77b4" fill-opacity="0.2" stroke="none"/>"##, polyline(upper.chain(lower)));
    }
    let mean = rows.iter().map(|r| (frame.x(r.t), frame.y(r.mean_regret)));
    let _ = writeln!(svg, r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="2"/>"##, polyline(mean));
    if rows.iter().all(|r| r.lower_bound.is_some()) && !rows.is_empty() {
        let bound = rows.iter().map(|r| (frame.x(r.t), frame.y(r.lower_bound.unwrap_or(0.0))));
        let _ = writeln!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="#d62728" stroke-width="2" stroke-dasharray="6 4"/>"##,
            polyline(bound)
        );
    }

    // legend
    let lx = x0 + 15.0;
    let _ = writeln!(svg, r##"<line x1="{lx}" y1="{}" x2="{}" y2="{}" stroke="#1f77b4" stroke-width="2"/>"##, y1 + 10.0, lx + 25.0, y1 + 10.0);
    let _ = writeln!(svg, r#"<text x="{}" y="{}">mean regret</text>"#, lx + 32.0, y1 + 14.0);
    let _ = writeln!(
        svg,
        r##"<line x1="{lx}" y1="{}" x2="{}" y2="{}" stroke="#d62728" stroke-width="2" stroke-dasharray="6 4"/>"##,
        y1 + 28.0,
        lx + 25.0,
        y1 + 28.0
    );
    let _ = writeln!(svg, r#"<text x="{}" y="{}">C ln t</text>"#, lx + 32.0, y1 + 32.0);
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
