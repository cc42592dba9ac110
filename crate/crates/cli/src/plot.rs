//! Static SVG line plots of seed-aggregated metrics (mean line, ± one
//! standard deviation band).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::Experiment;
use crate::error::{io_err, Result};
use crate::table::Table;

#[derive(Clone, Copy, Debug)]
pub struct PlotSpec {
    pub file: &'static str,
    pub title: &'static str,
    pub x: &'static str,
    pub ys: &'static [&'static str],
    /// Columns whose values split the rows into separate lines; every other
    /// column is averaged over.
    pub series: &'static [&'static str],
    pub log_x: bool,
    pub log_y: bool,
}

const fn spec(
    file: &'static str,
    title: &'static str,
    x: &'static str,
    ys: &'static [&'static str],
    series: &'static [&'static str],
    log_x: bool,
    log_y: bool,
) -> PlotSpec {
    PlotSpec { file, title, x, ys, series, log_x, log_y }
}

pub fn specs(experiment: Experiment) -> Vec<PlotSpec> {
    match experiment {
        Experiment::Toy => vec![
            spec("toy_error.svg", "closed form vs simulation", "d", &["abs_error"], &["noise_value"], false, true),
            spec("toy_gap.svg", "symmetry gap", "d", &["symmetry_gap"], &["noise_value"], false, false),
        ],
        Experiment::Symmetry => vec![
            spec("variance_vs_d.svg", "prediction variance", "d", &["variance"], &["model", "noise_value"], false, true),
            spec("chi2_vs_d.svg", "chi-squared", "d", &["chi2"], &["model", "noise_value"], false, true),
            spec("lm_vs_d.svg", "label misassignment", "d", &["lm"], &["model", "noise_value"], false, false),
            spec("lm_vs_noise.svg", "label misassignment", "noise_value", &["lm"], &["model", "d"], true, false),
        ],
        Experiment::Train => vec![
            spec("loss.svg", "training loss", "epoch", &["loss"], &["model", "d", "noise_value"], false, false),
            spec("train_accuracy.svg", "training accuracy", "epoch", &["train_accuracy"], &["model", "d", "noise_value"], false, false),
        ],
        Experiment::Sweep => vec![
            spec("accuracy_vs_d.svg", "test accuracy", "d", &["accuracy"], &["model", "noise_value"], false, false),
            spec("lm_vs_d.svg", "label misassignment", "d", &["lm"], &["model", "noise_value"], false, false),
        ],
        Experiment::Zne => vec![
            spec("zne_lm.svg", "label misassignment", "d", &["lm_unmitigated", "lm_mitigated"], &["model", "noise_value"], false, false),
            spec("zne_error.svg", "mean absolute error", "d", &["error_unmitigated", "error_mitigated"], &["model", "noise_value"], false, true),
        ],
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub label: String,
    /// `(x, mean, std)` sorted by x.
    pub points: Vec<(f64, f64, f64)>,
}

/// Groups rows by the series columns and averages each y column per x.
pub fn aggregate(table: &Table, spec: &PlotSpec) -> Vec<Series> {
    let mut groups: Vec<(String, BTreeMap<u64, (f64, Vec<f64>)>)> = Vec::new();
    for y in spec.ys {
        for row in &table.rows {
            let mut label: Vec<String> = spec
                .series
                .iter()
                .map(|c| format!("{c}={}", table.text(row, c)))
                .collect();
            if spec.ys.len() > 1 {
                label.insert(0, y.to_string());
            }
            let label = label.join(" ");
            let x = table.num(row, spec.x);
            let v = table.num(row, y);
            if !x.is_finite() || !v.is_finite() {
                continue;
            }
            let idx = match groups.iter().position(|(l, _)| *l == label) {
                Some(i) => i,
                None => {
                    groups.push((label, BTreeMap::new()));
                    groups.len() - 1
                }
            };
            // order by the float value; the key is monotone in x for finite x
            let key = ordered_bits(x);
            groups[idx].1.entry(key).or_insert((x, Vec::new())).1.push(v);
        }
    }
    groups
        .into_iter()
        .map(|(label, by_x)| Series {
            label,
            points: by_x
                .into_values()
                .map(|(x, vals)| {
                    let n = vals.len() as f64;
                    let mean = vals.iter().sum::<f64>() / n;
                    let std = if vals.len() > 1 {
                        (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
                    } else {
                        0.0
                    };
                    (x, mean, std)
                })
                .collect(),
        })
        .collect()
}

fn ordered_bits(x: f64) -> u64 {
    let b = x.to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | (1 << 63)
    }
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
const W: f64 = 760.0;
const H: f64 = 460.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 250.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Axis {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            let v = if log { v.log10() } else { v };
            if v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if log {
            (lo, hi) = (lo.floor(), hi.ceil());
        }
        if hi - lo < 1e-12 {
            (lo, hi) = (lo - 0.5, hi + 0.5);
        }
        if !log {
            let pad = 0.05 * (hi - lo);
            (lo, hi) = (lo - pad, hi + pad);
        }
        Axis { lo, hi, log }
    }

    /// Position in `[0, 1]`.
    fn unit(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let step = ((self.hi - self.lo) / 8.0).ceil().max(1.0) as i32;
            return (self.lo as i32..=self.hi as i32)
                .step_by(step as usize)
                .map(|e| (10f64.powi(e), format!("1e{e}")))
                .collect();
        }
        let raw = (self.hi - self.lo) / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
        let decimals = (-step.log10().floor()).max(0.0) as usize;
        let mut out = Vec::new();
        let mut k = (self.lo / step).ceil();
        while k * step <= self.hi + 1e-12 * step {
            let v = k * step;
            out.push((v, format!("{:.*}", decimals, if v.abs() < 0.5 * step { 0.0 } else { v })));
            k += 1.0;
        }
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_svg(spec: &PlotSpec, series: &[Series]) -> String {
    let keep = |x: f64, y: f64| (!spec.log_x || x > 0.0) && (!spec.log_y || y > 0.0);
    let series: Vec<Series> = series
        .iter()
        .map(|s| Series {
            label: s.label.clone(),
            points: s.points.iter().copied().filter(|&(x, y, _)| keep(x, y)).collect(),
        })
        .collect();
    let pts = || series.iter().flat_map(|s| s.points.iter().copied());
    let xa = Axis::fit(pts().map(|p| p.0), spec.log_x);
    let ya = Axis::fit(
        pts().flat_map(|(_, m, s)| [m - s, m + s, m]).filter(|v| !spec.log_y || *v > 0.0),
        spec.log_y,
    );
    let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
    let px = |x: f64| LEFT + pw * xa.unit(x);
    let py = |y: f64| TOP + ph * (1.0 - ya.unit(y).clamp(-0.05, 1.05));
    let floor = if ya.log { 10f64.powf(ya.lo) } else { f64::NEG_INFINITY };

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#, LEFT + pw / 2.0, escape(spec.title));
    let _ = writeln!(svg, r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##);
    for (v, label) in xa.ticks() {
        let x = px(v);
        let _ = writeln!(svg, r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#333"/>"##, TOP + ph, TOP + ph + 5.0);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, TOP + ph + 19.0);
    }
    for (v, label) in ya.ticks() {
        let y = py(v);
        let _ = writeln!(svg, r##"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="#333"/>"##, LEFT - 5.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, LEFT - 8.0, y + 4.0);
    }
    let x_label = format!("{}{}", spec.x, if spec.log_x { " (log)" } else { "" });
    let y_label = format!("{}{}", spec.ys.join(", "), if spec.log_y { " (log)" } else { "" });
    let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, H - 14.0, escape(&x_label));
    let _ = writeln!(svg, r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#, TOP + ph / 2.0, TOP + ph / 2.0, escape(&y_label));

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if s.points.iter().any(|p| p.2 > 0.0) {
            let upper: Vec<String> = s.points.iter().map(|&(x, m, sd)| format!("{:.2},{:.2}", px(x), py(m + sd))).collect();
            let lower: Vec<String> = s.points.iter().rev().map(|&(x, m, sd)| format!("{:.2},{:.2}", px(x), py((m - sd).max(floor)))).collect();
            let _ = writeln!(svg, r#"<polygon points="{} {}" fill="{color}" fill-opacity="0.18" stroke="none"/>"#, upper.join(" "), lower.join(" "));
        }
        let line: Vec<String> = s.points.iter().map(|&(x, m, _)| format!("{:.2},{:.2}", px(x), py(m))).collect();
        let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#, line.join(" "));
        for &(x, m, _) in &s.points {
            let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="2.6" fill="{color}"/>"#, px(x), py(m));
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = W - RIGHT + 14.0;
        let _ = writeln!(svg, r#"<line x1="{lx}" y1="{ly}" x2="{:.1}" y2="{ly}" stroke="{color}" stroke-width="2.5"/>"#, lx + 22.0);
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, lx + 28.0, ly + 4.0, escape(&s.label));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Writes every plot of the table's experiment into `dir`.
pub fn write_plots(table: &Table, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    specs(table.experiment)
        .iter()
        .map(|spec| {
            let path = dir.join(spec.file);
            std::fs::write(&path, render_svg(spec, &aggregate(table, spec))).map_err(io_err(&path))?;
            Ok(path)
        })
        .collect()
}
