//! CSV, JSON and SVG output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::experiment::TrialRecord;

/// Record columns in output order; `wall_time_ms` is appended when enabled.
pub const COLUMNS: [&str; 11] = [
    "instance",
    "family",
    "n",
    "instance_index",
    "graph_seed",
    "algorithm",
    "param",
    "seed",
    "cut_value",
    "status",
    "aux",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes records as RFC 4180 CSV. Floats use the shortest representation
/// that round-trips, so the file is reproducible byte for byte.
pub fn write_csv<W: Write>(records: &[TrialRecord], wall_time: bool, out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(out);
    let mut header: Vec<&str> = COLUMNS.to_vec();
    if wall_time {
        header.push("wall_time_ms");
    }
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![
            r.instance.clone(),
            r.family.clone(),
            r.n.to_string(),
            r.instance_index.to_string(),
            r.graph_seed.to_string(),
            r.algorithm.clone(),
            opt(r.param),
            r.seed.to_string(),
            opt(r.cut_value),
            r.status.clone(),
            r.aux.clone(),
        ];
        if wall_time {
            row.push(opt(r.wall_time_ms));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> csv::Result<Vec<TrialRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

pub fn write_csv_file(records: &[TrialRecord], wall_time: bool, path: &Path) -> csv::Result<()> {
    write_csv(
        records,
        wall_time,
        io::BufWriter::new(fs::File::create(path)?),
    )
}

pub fn read_csv_file(path: &Path) -> csv::Result<Vec<TrialRecord>> {
    read_csv(io::BufReader::new(fs::File::open(path)?))
}

/// Pretty JSON with fields in declaration order and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    serde_json::to_string_pretty(value).map(|s| s + "\n")
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> io::Result<()> {
    fs::write(path, to_json(value)?)
}

/// One plotted line: mean cut value per parameter over instances and seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(usize, f64)>,
}

/// Successful parameterised records grouped by (algorithm, n).
pub fn chart_series(records: &[TrialRecord]) -> Vec<Series> {
    let mut acc: BTreeMap<(String, usize), BTreeMap<usize, (f64, usize)>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_ok()) {
        if let (Some(p), Some(v)) = (r.param, r.cut_value) {
            let e = acc
                .entry((r.algorithm.clone(), r.n))
                .or_default()
                .entry(p)
                .or_insert((0.0, 0));
            e.0 += v;
            e.1 += 1;
        }
    }
    acc.into_iter()
        .map(|((algo, n), pts)| Series {
            label: format!("{algo} n={n}"),
            points: pts
                .into_iter()
                .map(|(p, (sum, c))| (p, sum / c as f64))
                .collect(),
        })
        .collect()
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

/// Line chart of cut value against the algorithm parameter, one series per
/// (algorithm, n). Axis ticks increase left to right and bottom to top.
pub fn render_svg(records: &[TrialRecord]) -> String {
    let series = chart_series(records);
    let xs: Vec<usize> = {
        let mut xs: Vec<usize> = series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.0))
            .collect();
        xs.sort_unstable();
        xs.dedup();
        xs
    };
    let values = series.iter().flat_map(|s| s.points.iter().map(|p| p.1));
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    let (y0, y1) = if lo.is_finite() {
        let y0 = (lo * 20.0).floor() / 20.0;
        let y1 = ((hi * 20.0).ceil() / 20.0).max(y0 + 0.05);
        (y0, y1)
    } else {
        (0.0, 1.0)
    };
    let (x0, x1) = match (xs.first(), xs.last()) {
        (Some(&a), Some(&b)) if b > a => (a as f64, b as f64),
        (Some(&a), _) => (a as f64 - 1.0, a as f64 + 1.0),
        _ => (0.0, 1.0),
    };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let py = |y: f64| TOP + (y1 - y) / (y1 - y0) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let (bx, by) = (LEFT, TOP + plot_h);
    let _ = writeln!(
        s,
        r#"<path class="axes" d="M{LEFT:.2},{TOP:.2} L{bx:.2},{by:.2} L{:.2},{by:.2}" stroke="black" fill="none"/>"#,
        LEFT + plot_w
    );
    for &x in &xs {
        let cx = px(x as f64);
        let _ = writeln!(
            s,
            r#"<g class="xtick"><line x1="{cx:.2}" y1="{by:.2}" x2="{cx:.2}" y2="{:.2}" stroke="black"/><text x="{cx:.2}" y="{:.2}" text-anchor="middle">{x}</text></g>"#,
            by + 5.0,
            by + 18.0
        );
    }
    let steps = ((y1 - y0) / 0.05).round() as usize;
    for i in 0..=steps {
        let y = y0 + i as f64 * (y1 - y0) / steps as f64;
        let cy = py(y);
        let _ = writeln!(
            s,
            r#"<g class="ytick"><line x1="{:.2}" y1="{cy:.2}" x2="{LEFT:.2}" y2="{cy:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{y:.2}</text></g>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            cy + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">parameter (p or k)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">cut fraction</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );
    for (i, ser) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let d: Vec<String> = ser
            .points
            .iter()
            .enumerate()
            .map(|(j, &(x, y))| {
                format!(
                    "{}{:.2},{:.2}",
                    if j == 0 { "M" } else { "L" },
                    px(x as f64),
                    py(y)
                )
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<path class="series" data-label="{}" d="{}" stroke="{colour}" fill="none" stroke-width="1.5"/>"#,
            ser.label,
            d.join(" ")
        );
        for &(x, y) in &ser.points {
            let _ = writeln!(
                s,
                r#"<circle class="point" data-series="{}" data-x="{x}" data-y="{y}" cx="{:.2}" cy="{:.2}" r="3" fill="{colour}"/>"#,
                ser.label,
                px(x as f64),
                py(y)
            );
        }
        let ly = TOP + 10.0 + 16.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<g class="legend"><line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text></g>"#,
            lx + 20.0,
            lx + 25.0,
            ly + 4.0,
            ser.label
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(records: &[TrialRecord], path: &Path) -> io::Result<()> {
    fs::write(path, render_svg(records))
}
