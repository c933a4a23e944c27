use std::collections::BTreeMap;
use std::fmt::Write;

use anyhow::{bail, Result};
use clap::ValueEnum;

use crate::record::BenchRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    Runtime,
    Iterations,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64> + Clone, log: bool) -> Self {
        let map = |v: f64| if log { v.log10() } else { v };
        let lo = values.clone().map(map).fold(f64::INFINITY, f64::min);
        let hi = values.map(map).fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = if log {
            (lo.floor(), hi.ceil().max(lo.floor() + 1.0))
        } else {
            let lo = lo.min(0.0);
            (lo, if hi > lo { hi } else { lo + 1.0 })
        };
        Self { lo, hi, log }
    }

    /// Position of `v` in `[0, 1]`.
    fn unit(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            (self.lo as i32..=self.hi as i32)
                .map(|e| (10f64.powi(e), format!("1e{e}")))
                .collect()
        } else {
            (0..=5)
                .map(|k| {
                    let v = self.lo + (self.hi - self.lo) * k as f64 / 5.0;
                    (v, format_tick(v))
                })
                .collect()
        }
    }
}

fn format_tick(v: f64) -> String {
    if v.abs() >= 1e4 || (v != 0.0 && v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

/// Renders a Figure-1-style chart: the mean of the chosen quantity per
/// instance size. Path-family files are plotted against `F` on a log axis,
/// everything else against `n`.
pub fn render(rows: &[BenchRecord], kind: PlotKind) -> Result<String> {
    if rows.is_empty() {
        bail!("no records to plot");
    }
    let scaling = rows.iter().all(|r| r.family == "path");
    let mut groups: BTreeMap<u64, (f64, f64, usize)> = BTreeMap::new();
    for r in rows {
        let x = if scaling { r.f_max } else { r.n as f64 };
        let y = match kind {
            PlotKind::Iterations => r.total as f64,
            PlotKind::Runtime => match r.wall_ms {
                Some(ms) => ms,
                None => bail!("record {} has no wall time; rerun the benchmark with timing", r.id),
            },
        };
        let e = groups.entry(x.to_bits()).or_insert((x, 0.0, 0));
        e.1 += y;
        e.2 += 1;
    }
    let mut points: Vec<(f64, f64)> = groups.values().map(|&(x, s, c)| (x, s / c as f64)).collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    if scaling && points.iter().any(|p| p.0 <= 0.0) {
        bail!("log axis needs positive F values");
    }

    let xa = Axis::new(points.iter().map(|p| p.0), scaling);
    let ya = Axis::new(points.iter().map(|p| p.1), false);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + xa.unit(x) * plot_w;
    let py = |y: f64| TOP + (1.0 - ya.unit(y)) * plot_h;

    let (x_label, y_label) = (
        if scaling { "F (log scale)" } else { "n" },
        match kind {
            PlotKind::Iterations => "total iterations",
            PlotKind::Runtime => "wall time (ms)",
        },
    );
    let title = format!("{} vs {}", y_label, if scaling { "F" } else { "n" });

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )?;
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{title}</text>"#,
        WIDTH / 2.0
    )?;
    let (x0, y0, x1, y1) = (LEFT, TOP + plot_h, LEFT + plot_w, TOP);
    writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#)?;
    writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#)?;
    for (v, label) in xa.ticks() {
        let x = px(v);
        writeln!(s, r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{}" stroke="black"/>"#, y0 + 5.0)?;
        writeln!(
            s,
            r#"<text x="{x:.2}" y="{}" text-anchor="middle">{label}</text>"#,
            y0 + 20.0
        )?;
    }
    for (v, label) in ya.ticks() {
        let y = py(v);
        writeln!(s, r#"<line x1="{}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/>"#, x0 - 5.0)?;
        writeln!(
            s,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{label}</text>"#,
            x0 - 8.0,
            y + 4.0
        )?;
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 16.0
    )?;
    writeln!(
        s,
        r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">{y_label}</text>"#,
        TOP + plot_h / 2.0
    )?;
    let path: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
        .collect();
    writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        path.join(" ")
    )?;
    for &(x, y) in &points {
        writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#,
            px(x),
            py(y)
        )?;
    }
    writeln!(s, "</svg>")?;
    Ok(s)
}
