//! Standalone SVG line plots of sweep tables.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::sweep::Table;

const WIDTH: f64 = 820.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

fn key_label(name: &str, v: f64) -> String {
    if name == "n" {
        if v.is_infinite() {
            "n=inf".into()
        } else {
            format!("n={}", v as u64)
        }
    } else {
        format!("{name}={v}")
    }
}

/// Group rows into series keyed by every input column other than the x axis,
/// in order of first appearance.
fn series(table: &Table, x: usize, y: usize) -> Vec<Series> {
    let inputs = table.model.inputs();
    let keys: Vec<usize> = (0..inputs.len()).filter(|&i| i != x).collect();
    let mut out: Vec<(Vec<u64>, Series)> = Vec::new();
    for row in &table.rows {
        let id: Vec<u64> = keys.iter().map(|&k| row[k].to_bits()).collect();
        let pos = match out.iter().position(|(k, _)| *k == id) {
            Some(p) => p,
            None => {
                let label = keys.iter().map(|&k| key_label(inputs[k], row[k])).collect::<Vec<_>>().join(", ");
                out.push((id, Series { label, points: Vec::new() }));
                out.len() - 1
            }
        };
        if row[x].is_finite() && row[y].is_finite() {
            out[pos].1.points.push((row[x], row[y]));
        }
    }
    out.into_iter().map(|(_, s)| s).filter(|s| !s.points.is_empty()).collect()
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 1.0, hi + 1.0)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Render column `y` against the model's control parameter. Defaults to the
/// last output column.
pub fn render_svg(table: &Table, y: Option<&str>) -> Result<String> {
    let x_name = table.model.x_column();
    let y_name = y.unwrap_or_else(|| table.model.outputs().last().expect("every model has an output"));
    if !table.model.outputs().contains(&y_name) {
        return Err(Error::InvalidParameter(format!(
            "column {y_name:?} is not an output of the {} schema",
            table.model.name()
        )));
    }
    let x = table.column_index(x_name).expect("x column belongs to the schema");
    let y = table.column_index(y_name).expect("checked above");
    let all = series(table, x, y);
    if all.is_empty() {
        return Err(Error::InsufficientData("nothing to plot: no finite data points".into()));
    }
    let (x0, x1) = bounds(all.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y0, y1) = bounds(all.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |v: f64| LEFT + (v - x0) / (x1 - x0) * plot_w;
    let sy = |v: f64| TOP + plot_h - (v - y0) / (y1 - y0) * plot_h;

    let mut svg = String::new();
    let w = &mut svg;
    // writes to a String cannot fail
    let _ = writeln!(w, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(w, r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{} model: {y_name} vs {x_name}</text>"#, LEFT + plot_w / 2.0, table.model.name());
    let _ = writeln!(w, r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#);
    for i in 0..TICKS {
        let t = i as f64 / (TICKS - 1) as f64;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(w, r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, TOP + plot_h, TOP + plot_h + 5.0);
        let _ = writeln!(w, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{xv:.4}</text>"#, TOP + plot_h + 20.0);
        let _ = writeln!(w, r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/>"#, LEFT - 5.0);
        let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.4}</text>"#, LEFT - 8.0, py + 4.0);
    }
    let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x_name}</text>"#, LEFT + plot_w / 2.0, HEIGHT - 15.0);
    let _ = writeln!(w, r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{y_name}</text>"#, TOP + plot_h / 2.0, TOP + plot_h / 2.0);
    for (i, s) in all.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s.points.iter().map(|&(a, b)| format!("{:.2},{:.2}", sx(a), sy(b))).collect();
        let _ = writeln!(w, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(w, r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&s.label));
    }
    let _ = writeln!(w, "</svg>");
    Ok(svg)
}
