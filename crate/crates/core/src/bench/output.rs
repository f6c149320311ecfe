//! CSV tables and SVG figures.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Obstacle, PosedShape, StateVec};
use crate::planner::PlanResult;
use crate::scenarios::Scenario;

use super::{AggregateStats, BenchReport};

/// 17 significant digits; `inf` for unsolved.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn parse_num(field: &str, path: &Path) -> Result<f64> {
    field
        .parse()
        .map_err(|_| Error::parse(path, format!("not a number: {field:?}")))
}

fn parse_opt_num(field: &str, path: &Path) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_num(field, path).map(Some)
    }
}

fn create_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(|e| Error::io(dir, e)),
        _ => Ok(()),
    }
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    create_parent(path)?;
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

/// One row per (variant, checkpoint).
#[derive(Debug, Clone, PartialEq)]
pub struct CostRow {
    pub variant: String,
    pub checkpoint: usize,
    pub median: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
}

/// One row per (variant, trial).
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub variant: String,
    pub trial: usize,
    pub seed: u64,
    pub final_cost: f64,
    pub iterations_to_3sigma: Option<usize>,
}

pub fn write_costs_csv(stats: &[AggregateStats], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["variant", "checkpoint", "median", "ci_low", "ci_high"])?;
    for s in stats {
        for (k, cp) in s.checkpoints.iter().enumerate() {
            w.write_record([
                s.variant.name().to_string(),
                cp.to_string(),
                num(s.median_cost[k]),
                opt_num(s.ci_low[k]),
                opt_num(s.ci_high[k]),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_costs_csv(path: &Path) -> Result<Vec<CostRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != 5 {
            return Err(Error::parse(path, format!("expected 5 fields, found {}", rec.len())));
        }
        rows.push(CostRow {
            variant: rec[0].to_string(),
            checkpoint: rec[1]
                .parse()
                .map_err(|_| Error::parse(path, format!("bad checkpoint {:?}", &rec[1])))?,
            median: parse_num(&rec[2], path)?,
            ci_low: parse_opt_num(&rec[3], path)?,
            ci_high: parse_opt_num(&rec[4], path)?,
        });
    }
    Ok(rows)
}

/// Deterministic per-trial table: final cost and iterations to threshold.
pub fn write_trials_csv(stats: &[AggregateStats], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["variant", "trial", "seed", "final_cost", "iterations_to_3sigma"])?;
    for s in stats {
        for (i, seed) in s.seeds.iter().enumerate() {
            w.write_record([
                s.variant.name().to_string(),
                i.to_string(),
                seed.to_string(),
                num(s.final_costs[i]),
                s.iterations_to_3sigma[i].map(|v| v.to_string()).unwrap_or_default(),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_trials_csv(path: &Path) -> Result<Vec<TrialRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    let int = |s: &str| -> Result<u64> {
        s.parse()
            .map_err(|_| Error::parse(path, format!("not an integer: {s:?}")))
    };
    for rec in r.records() {
        let rec = rec?;
        rows.push(TrialRow {
            variant: rec[0].to_string(),
            trial: int(&rec[1])? as usize,
            seed: int(&rec[2])?,
            final_cost: parse_num(&rec[3], path)?,
            iterations_to_3sigma: if rec[4].is_empty() {
                None
            } else {
                Some(int(&rec[4])? as usize)
            },
        });
    }
    Ok(rows)
}

/// Wall-clock seconds to threshold per trial. Empty when never reached.
pub fn write_times_csv(stats: &[AggregateStats], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["variant", "trial", "seed", "time_to_3sigma"])?;
    for s in stats {
        for (i, seed) in s.seeds.iter().enumerate() {
            w.write_record([
                s.variant.name().to_string(),
                i.to_string(),
                seed.to_string(),
                opt_num(s.time_to_3sigma[i]),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn points_attr(pts: impl IntoIterator<Item = (f64, f64)>) -> String {
    pts.into_iter()
        .map(|(x, y)| format!("{x:.3},{y:.3}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn xy(states: &[StateVec]) -> impl Iterator<Item = (f64, f64)> + '_ {
    states.iter().map(|s| (s[0], s[1]))
}

/// Top-down map of a 2-D scenario: obstacles, nominal, the best path of
/// `result` and the outlines of its informed-union rebuilds, later
/// snapshots drawn darker. At most `max_snapshots` rebuilds are shown,
/// spread evenly over the run.
pub fn render_map_svg(scenario: &Scenario, result: Option<&PlanResult>, max_snapshots: usize) -> String {
    let b = &scenario.bounds;
    let (x0, y0) = (b.min[0], b.min[1]);
    let (w, h) = (b.max[0] - x0, b.max[1] - y0);
    let px = 800.0;
    let py = px * h / w;
    let stroke = w / 400.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{px:.0}" height="{py:.0}" viewBox="{x0} {y0} {w} {h}">"#
    );
    let _ = writeln!(s, r#"<g transform="matrix(1 0 0 -1 0 {})">"#, y0 * 2.0 + h);
    let _ = writeln!(s, r##"<rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="#eef6fb" stroke="#333" stroke-width="{stroke}"/>"##);

    for o in &scenario.static_obstacles {
        match o.pose_at(0.0) {
            PosedShape::Polygon(v) => {
                let _ = writeln!(s, r##"<polygon points="{}" fill="#c9b68c" stroke="#7a6a45" stroke-width="{stroke}"/>"##, points_attr(xy(v)));
            }
            PosedShape::Circle { center, radius } => {
                let _ = writeln!(s, r##"<circle cx="{}" cy="{}" r="{radius}" fill="#c9b68c" stroke="#7a6a45" stroke-width="{stroke}"/>"##, center[0], center[1]);
            }
            PosedShape::Box { min, max } => {
                let _ = writeln!(s, r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#c9b68c" stroke="#7a6a45" stroke-width="{stroke}"/>"##, min[0], min[1], max[0] - min[0], max[1] - min[1]);
            }
            PosedShape::Ellipse { .. } => {}
        }
    }
    for o in &scenario.moving_obstacles {
        if let Obstacle::MovingEllipse { waypoints, .. } = o {
            let _ = writeln!(s, r##"<polyline points="{}" fill="none" stroke="#e377c2" stroke-dasharray="{} {}" stroke-width="{stroke}"/>"##, points_attr(xy(waypoints)), stroke * 4.0, stroke * 3.0);
        }
        if let PosedShape::Ellipse { center, heading, semi_major, semi_minor } = o.pose_at(0.0) {
            let _ = writeln!(s, r##"<ellipse cx="{}" cy="{}" rx="{semi_major}" ry="{semi_minor}" transform="rotate({} {} {})" fill="#e377c2" fill-opacity="0.6"/>"##, center[0], center[1], heading.to_degrees(), center[0], center[1]);
        }
    }

    if let Some(r) = result {
        let snaps = &r.union_snapshots;
        let shown: Vec<usize> = if snaps.len() <= max_snapshots {
            (0..snaps.len()).collect()
        } else if max_snapshots == 0 {
            Vec::new()
        } else if max_snapshots == 1 {
            vec![snaps.len() - 1]
        } else {
            (0..max_snapshots)
                .map(|k| k * (snaps.len() - 1) / (max_snapshots - 1))
                .collect()
        };
        for (rank, &i) in shown.iter().enumerate() {
            let opacity = 0.25 + 0.75 * (rank + 1) as f64 / shown.len() as f64;
            for phs in &snaps[i].spheroids {
                let c = phs.center();
                let d = [phs.focus_b()[0] - phs.focus_a()[0], phs.focus_b()[1] - phs.focus_a()[1]];
                let angle = d[1].atan2(d[0]).to_degrees();
                let _ = writeln!(s, r##"<ellipse cx="{}" cy="{}" rx="{}" ry="{}" transform="rotate({angle} {} {})" fill="none" stroke="#1f77b4" stroke-opacity="{opacity:.3}" stroke-width="{stroke}"/>"##, c[0], c[1], phs.transverse_radius(), phs.conjugate_radius(), c[0], c[1]);
            }
        }
    }

    let _ = writeln!(s, r##"<polyline points="{}" fill="none" stroke="#000" stroke-dasharray="{} {}" stroke-width="{stroke}"/>"##, points_attr(xy(scenario.nominal.states())), stroke * 6.0, stroke * 3.0);
    if let Some(r) = result.filter(|r| !r.best_path.is_empty()) {
        let _ = writeln!(s, r##"<polyline points="{}" fill="none" stroke="#d62728" stroke-width="{}"/>"##, points_attr(xy(&r.best_path)), stroke * 2.0);
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// Median cost against iteration per variant, with shaded intervals.
pub fn render_convergence_svg(stats: &[AggregateStats]) -> String {
    let (pw, ph, m) = (720.0, 420.0, 60.0);
    let finite = |v: f64| v.is_finite().then_some(v);
    let x_max = stats
        .iter()
        .flat_map(|s| s.checkpoints.iter().copied())
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    let y_max = stats
        .iter()
        .flat_map(|s| s.median_cost.iter().copied().chain(s.ci_high.iter().flatten().copied()))
        .filter_map(finite)
        .fold(0.0, f64::max);
    let y_max = if y_max > 0.0 { y_max * 1.05 } else { 1.0 };
    let sx = |x: f64| m + x / x_max * pw;
    let sy = |y: f64| m + ph - y / y_max * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="12">"#,
        pw + 2.0 * m,
        ph + 2.0 * m
    );
    let _ = writeln!(s, r##"<rect x="{m}" y="{m}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##);
    for k in 0..=4 {
        let xv = x_max * k as f64 / 4.0;
        let yv = y_max * k as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{xv:.0}</text>"#, sx(xv), m + ph + 18.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{yv:.0}</text>"#, m - 6.0, sy(yv) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">iteration</text>"#, m + pw / 2.0, m + ph + 40.0);
    let _ = writeln!(s, r#"<text x="16" y="{:.1}" transform="rotate(-90 16 {:.1})" text-anchor="middle">median cost</text>"#, m + ph / 2.0, m + ph / 2.0);

    for (k, st) in stats.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let band: Vec<(f64, f64, f64)> = st
            .checkpoints
            .iter()
            .enumerate()
            .filter_map(|(i, &cp)| match (st.ci_low[i], st.ci_high[i]) {
                (Some(lo), Some(hi)) if hi.is_finite() => Some((cp as f64, lo, hi)),
                _ => None,
            })
            .collect();
        if band.len() >= 2 {
            let upper = band.iter().map(|&(x, _, hi)| (sx(x), sy(hi)));
            let lower = band.iter().rev().map(|&(x, lo, _)| (sx(x), sy(lo)));
            let _ = writeln!(s, r#"<polygon points="{}" fill="{color}" fill-opacity="0.18" stroke="none"/>"#, points_attr(upper.chain(lower)));
        }
        let line: Vec<(f64, f64)> = st
            .checkpoints
            .iter()
            .zip(&st.median_cost)
            .filter(|(_, c)| c.is_finite())
            .map(|(&cp, &c)| (sx(cp as f64), sy(c)))
            .collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, points_attr(line));
        let ly = m + 16.0 + 16.0 * k as f64;
        let _ = writeln!(s, r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#, m + pw - 170.0, m + pw - 150.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, m + pw - 145.0, ly + 4.0, st.variant.name());
    }
    s.push_str("</svg>\n");
    s
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    create_parent(path)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `costs.csv`, `trials.csv`, `times.csv`, `convergence.svg` and,
/// for planar scenarios, `map.svg` showing the first trial of the first
/// batch.
pub fn write_bench_report(report: &BenchReport, scenario: &Scenario, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_costs_csv(&report.stats, &dir.join("costs.csv"))?;
    write_trials_csv(&report.stats, &dir.join("trials.csv"))?;
    write_times_csv(&report.stats, &dir.join("times.csv"))?;
    write_text(&dir.join("convergence.svg"), &render_convergence_svg(&report.stats))?;
    if scenario.dim() == 2 {
        let first = report.batches.first().and_then(|b| b.trials.first());
        write_text(&dir.join("map.svg"), &render_map_svg(scenario, first, 6))?;
    }
    Ok(())
}

pub(crate) fn write_plan_outputs(scenario: &Scenario, result: &PlanResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join("path.csv");
    let mut w = writer(&path)?;
    let header: Vec<String> = (0..scenario.dim()).map(|k| format!("x{k}")).collect();
    w.write_record(&header)?;
    for s in &result.best_path {
        w.write_record(s.iter().map(|&v| num(v)))?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let path = dir.join("trace.csv");
    let mut w = writer(&path)?;
    w.write_record(["iteration", "cost"])?;
    for (it, c) in &result.cost_trace {
        w.write_record([it.to_string(), num(*c)])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let path = dir.join("times.csv");
    let mut w = writer(&path)?;
    w.write_record(["iteration", "seconds"])?;
    for (it, t) in &result.wall_time_trace {
        w.write_record([it.to_string(), num(*t)])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    if scenario.dim() == 2 {
        write_text(&dir.join("map.svg"), &render_map_svg(scenario, Some(result), 6))?;
    }
    Ok(())
}
