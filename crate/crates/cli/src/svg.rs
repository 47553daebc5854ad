use std::collections::BTreeMap;
use std::fmt::Write;

use crate::report::ExperimentReport;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];
const MAX_SERIES: usize = 8;

/// Line plot of `value` against `n`, one series per candidate. Uses a
/// log₁₀ value axis when every plotted value is positive.
pub fn render_svg(report: &ExperimentReport) -> String {
    let mut series: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
    for r in &report.rows {
        if r.value.is_finite() {
            series.entry(r.candidate.as_str()).or_default().push((r.n as f64, r.value));
        }
    }
    let mut ranked: Vec<(&str, Vec<(f64, f64)>)> = series.into_iter().collect();
    // keep the series with the smallest minimum when there are too many
    ranked.sort_by(|a, b| {
        let ma = a.1.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let mb = b.1.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        ma.total_cmp(&mb).then(a.0.cmp(b.0))
    });
    ranked.truncate(MAX_SERIES);
    let points: Vec<(f64, f64)> = ranked.iter().flat_map(|s| s.1.iter().copied()).collect();
    let log = !points.is_empty() && points.iter().all(|p| p.1 > 0.0);
    let ty = |v: f64| if log { v.log10() } else { v };
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(ty(y));
        y1 = y1.max(ty(y));
    }
    if points.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (ty(y) - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{} ({})</text>"#,
        WIDTH / 2.0,
        escape(&report.experiment),
        escape(&report.param_hash)
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" stroke="black" fill="none"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">n</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0
    );
    let ylabel = if log { "log10 value" } else { "value" };
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" font-family="sans-serif" font-size="12" transform="rotate(-90 16 {})" text-anchor="middle">{ylabel}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (v, anchor_x, anchor_y, align) in [
        (x0, left, bottom + 16.0, "start"),
        (x1, right, bottom + 16.0, "end"),
    ] {
        let _ = writeln!(
            s,
            r#"<text x="{anchor_x}" y="{anchor_y}" font-family="sans-serif" font-size="10" text-anchor="{align}">{}</text>"#,
            fmt_tick(v)
        );
    }
    for (v, y) in [(y0, bottom), (y1, top)] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>"#,
            left - 4.0,
            fmt_tick(v)
        );
    }
    for (i, (name, pts)) in ranked.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut d = String::new();
        for (j, &(x, y)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.2} {:.2} ", if j == 0 { "M" } else { "L" }, sx(x), sy(y));
        }
        let _ = writeln!(s, r#"<path d="{}" stroke="{color}" fill="none" stroke-width="1.2"/>"#, d.trim_end());
        if pts.len() <= 200 {
            for &(x, y) in pts {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{color}"/>"#, sx(x), sy(y));
            }
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" fill="{color}">{}</text>"#,
            right - 150.0,
            top + 14.0 * (i as f64 + 1.0),
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e5) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
