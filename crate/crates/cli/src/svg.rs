//! Minimal static charts.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

fn frame(title: &str, y_max: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
    let (x0, y0, y1) = (PAD, H - PAD, PAD);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#, W - PAD);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#, x0 - 4.0, y1 + 4.0, y_max);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">0</text>"#, x0 - 4.0, y0 + 4.0);
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Bar chart of one value per label.
pub fn bars(title: &str, labels: &[String], values: &[f64]) -> String {
    let y_max = values.iter().copied().fold(0.0, f64::max).max(1e-12);
    let mut s = frame(title, y_max);
    let slot = (W - 2.0 * PAD) / values.len().max(1) as f64;
    for (i, (l, &v)) in labels.iter().zip(values).enumerate() {
        let h = (H - 2.0 * PAD) * v / y_max;
        let x = PAD + i as f64 * slot + 0.15 * slot;
        let _ = writeln!(
            s,
            r#"<rect x="{x:.1}" y="{:.1}" width="{:.1}" height="{h:.1}" fill="{}"/>"#,
            H - PAD - h,
            0.7 * slot,
            COLORS[i % COLORS.len()]
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#, x + 0.35 * slot, H - PAD + 16.0, escape(l));
    }
    s.push_str("</svg>\n");
    s
}

/// Line chart with one polyline per named series over a shared x axis.
/// Missing points break the line.
pub fn lines(title: &str, x: &[f64], series: &[(String, Vec<Option<f64>>)]) -> String {
    let y_max = series
        .iter()
        .flat_map(|(_, v)| v.iter().flatten().copied())
        .fold(0.0, f64::max)
        .max(1e-12);
    let (lo, hi) = (x.first().copied().unwrap_or(0.0), x.last().copied().unwrap_or(1.0));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let px = |v: f64| PAD + (W - 2.0 * PAD) * (v - lo) / span;
    let py = |v: f64| H - PAD - (H - 2.0 * PAD) * v / y_max;
    let mut s = frame(title, y_max);
    let _ = writeln!(s, r#"<text x="{PAD}" y="{}" text-anchor="middle">{lo}</text>"#, H - PAD + 16.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{hi}</text>"#, W - PAD, H - PAD + 16.0);
    for (i, (name, values)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut run: Vec<String> = Vec::new();
        let flush = |run: &mut Vec<String>, s: &mut String| {
            if run.len() > 1 {
                let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, run.join(" "));
            }
            run.clear();
        };
        for (&xv, v) in x.iter().zip(values) {
            match v {
                Some(v) => {
                    run.push(format!("{:.1},{:.1}", px(xv), py(*v)));
                    let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#, px(xv), py(*v));
                }
                None => flush(&mut run, &mut s),
            }
        }
        flush(&mut run, &mut s);
        let _ = writeln!(s, r#"<text x="{}" y="{}" fill="{color}">{}</text>"#, W - PAD - 100.0, PAD + 14.0 * i as f64, escape(name));
    }
    s.push_str("</svg>\n");
    s
}
