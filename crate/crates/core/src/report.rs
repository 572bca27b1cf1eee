//! Convergence and score plots of an experiment directory.
//!
//! Every plotted number is also written to CSV under `plots/`:
//!
//! * `convergence.csv`: per generation, the mean best objective of every
//!   solver on each task,
//! * `score.csv`: per generation, the performance score of every solver
//!   computed from the best values reached so far.
//!
//! Plots are plain SVG line charts, one series per solver.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiment::{load_experiment, scores_of, ExperimentData};

pub const PLOT_DIR: &str = "plots";

/// One labelled polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Writes the convergence and score plots of `dir`; returns the files written.
pub fn emit_reports(dir: &Path) -> Result<Vec<PathBuf>> {
    let data = load_experiment(dir)?;
    let out = dir.join(PLOT_DIR);
    fs::create_dir_all(&out)?;
    let solvers: Vec<String> = data.manifest.config.solvers.iter().map(|s| s.name().to_string()).collect();
    let len = data
        .traces
        .iter()
        .flatten()
        .map(Vec::len)
        .min()
        .ok_or_else(|| Error::Report("no traces".into()))?;
    // generations align across solvers; x is the evaluation count of the first solver
    let evals: Vec<f64> = data.traces[0][0][..len].iter().map(|r| r.evaluations as f64).collect();

    let mut written = Vec::new();
    let conv = convergence(&data, len);
    let mut csv = String::from("generation,evaluations");
    for m in 0..2 {
        for s in &solvers {
            write!(csv, ",{s}_T{}", m + 1).unwrap();
        }
    }
    csv.push('\n');
    for g in 0..len {
        write!(csv, "{g},{}", evals[g]).unwrap();
        for task in &conv {
            for series in task {
                write!(csv, ",{}", series[g]).unwrap();
            }
        }
        csv.push('\n');
    }
    written.push(write(&out.join("convergence.csv"), &csv)?);

    for (m, task) in conv.iter().enumerate() {
        let series: Vec<Series> = solvers
            .iter()
            .zip(task)
            .map(|(s, v)| Series {
                label: s.clone(),
                points: evals.iter().copied().zip(v.iter().copied()).collect(),
            })
            .collect();
        let id = &data.manifest.tasks[m].id;
        let svg = line_chart(&format!("{id}: mean best objective"), "evaluations", "objective", &series);
        written.push(write(&out.join(format!("convergence_T{}.svg", m + 1)), &svg)?);
    }

    let scores = score_curve(&data, len)?;
    let mut csv = String::from("generation,evaluations");
    for s in &solvers {
        write!(csv, ",{s}").unwrap();
    }
    csv.push('\n');
    for g in 0..len {
        write!(csv, "{g},{}", evals[g]).unwrap();
        for v in &scores[g] {
            write!(csv, ",{v}").unwrap();
        }
        csv.push('\n');
    }
    written.push(write(&out.join("score.csv"), &csv)?);
    let series: Vec<Series> = solvers
        .iter()
        .enumerate()
        .map(|(k, s)| Series {
            label: s.clone(),
            points: evals.iter().zip(&scores).map(|(&x, row)| (x, row[k])).collect(),
        })
        .collect();
    let svg = line_chart(
        &format!("{}: performance score", data.manifest.config.name),
        "evaluations",
        "score",
        &series,
    );
    written.push(write(&out.join("score.svg"), &svg)?);
    Ok(written)
}

fn write(path: &Path, text: &str) -> Result<PathBuf> {
    fs::write(path, text)?;
    Ok(path.to_path_buf())
}

/// `[task][solver][generation]` mean best objective over repetitions.
fn convergence(data: &ExperimentData, len: usize) -> Vec<Vec<Vec<f64>>> {
    (0..2)
        .map(|m| {
            data.traces
                .iter()
                .map(|per| {
                    (0..len)
                        .map(|g| per.iter().map(|t| t[g].best[m]).sum::<f64>() / per.len() as f64)
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// `[generation][solver]` performance score of the best-so-far values.
fn score_curve(data: &ExperimentData, len: usize) -> Result<Vec<Vec<f64>>> {
    let directions: Vec<_> = data.manifest.tasks.iter().map(|t| t.direction).collect();
    (0..len)
        .map(|g| {
            let finals: Vec<Vec<Vec<f64>>> = data
                .traces
                .iter()
                .map(|per| per.iter().map(|t| t[g].best.clone()).collect())
                .collect();
            scores_of(&finals, &directions)
        })
        .collect()
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];
const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 40.0, 50.0); // left, right, top, bottom

/// SVG line chart. The y axis is logarithmic when all values are positive and
/// span more than two decades.
pub fn line_chart(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let pts = || series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let log = y0 > 0.0 && y1 / y0 > 100.0;
    let ty = |y: f64| if log { y.log10() } else { y };
    let (mut ly0, mut ly1) = (ty(y0), ty(y1));
    if ly1 - ly0 < 1e-12 {
        ly0 -= 0.5;
        ly1 += 0.5;
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    let (ml, mr, mt, mb) = MARGIN;
    let px = |x: f64| ml + (x - x0) / (x1 - x0) * (W - ml - mr);
    let py = |y: f64| H - mb - (ty(y) - ly0) / (ly1 - ly0) * (H - mt - mb);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, esc(title)).unwrap();
    writeln!(
        s,
        r#"<path d="M{ml} {mt} V{} H{}" fill="none" stroke="black"/>"#,
        H - mb,
        W - mr
    )
    .unwrap();
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = ly0 + (ly1 - ly0) * i as f64 / 4.0;
        let yv = if log { 10f64.powf(fy) } else { fy };
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            px(fx),
            H - mb + 16.0,
            tick(fx)
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            ml - 6.0,
            py(yv) + 4.0,
            tick(yv)
        )
        .unwrap();
    }
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (ml + W - mr) / 2.0, H - 10.0, esc(xlabel)).unwrap();
    let ylab = if log { format!("{ylabel} (log)") } else { ylabel.to_string() };
    writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        esc(&ylab)
    )
    .unwrap();
    for (k, ser) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let d: Vec<String> = ser
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite() && (!log || p.1 > 0.0))
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        if !d.is_empty() {
            writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, d.join(" ")).unwrap();
        }
        let ly = mt + 14.0 + 16.0 * k as f64;
        writeln!(
            s,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            W - mr - 110.0,
            W - mr - 90.0,
            W - mr - 84.0,
            ly + 4.0,
            esc(&ser.label)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-2..1e5).contains(&a) {
        format!("{v:.1e}")
    } else if a >= 100.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_has_one_polyline_per_series() {
        let series = vec![
            Series {
                label: "a<b".into(),
                points: vec![(0.0, 1.0), (1.0, 0.5)],
            },
            Series {
                label: "c".into(),
                points: vec![(0.0, 2.0), (1.0, f64::NAN)],
            },
        ];
        let svg = line_chart("t", "x", "y", &series);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("a&lt;b"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn log_axis_for_wide_positive_range() {
        let series = vec![Series {
            label: "a".into(),
            points: vec![(0.0, 1e3), (1.0, 1e-3)],
        }];
        assert!(line_chart("t", "x", "y", &series).contains("(log)"));
        let flat = vec![Series {
            label: "a".into(),
            points: vec![(0.0, 3.0), (1.0, 3.0)],
        }];
        assert!(!line_chart("t", "x", "y", &flat).contains("(log)"));
    }

    #[test]
    fn empty_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(emit_reports(dir.path()), Err(Error::Report(_))));
    }
}
