//! Deterministic CSV, SVG, and JSON emission. Floats are written with
//! Rust's shortest round-trip formatting, so identical inputs produce
//! byte-identical files and CSV output parses back losslessly.

use std::f64::consts::PI;

use anyhow::{bail, Context, Result};
use circle_dda::generator::Trajectory;

pub const CSV_HEADER: &str = "n,x,y,radius_error,angle";

/// Unwrapped polar angle per point, tolerating points at the origin (which
/// keep the previous angle).
pub fn angle_column(points: &[(f64, f64)]) -> Vec<f64> {
    let mut out = Vec::with_capacity(points.len());
    let mut prev_raw: Option<f64> = None;
    let mut acc = 0.0;
    for &(x, y) in points {
        if x == 0.0 && y == 0.0 {
            out.push(acc);
            continue;
        }
        let raw = y.atan2(x);
        acc = match prev_raw {
            None => raw,
            Some(p) => {
                let delta = (raw - p + PI).rem_euclid(2.0 * PI) - PI;
                acc + delta
            }
        };
        prev_raw = Some(raw);
        out.push(acc);
    }
    out
}

/// CSV with header `n,x,y,radius_error,angle`, LF line endings, no
/// trailing separator.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let angles = angle_column(&traj.points);
    let mut out = String::with_capacity(32 * (traj.points.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (n, (&(x, y), angle)) in traj.points.iter().zip(angles.iter()).enumerate() {
        let radius_error = x.hypot(y) - traj.r;
        out.push_str(&format!("{n},{x},{y},{radius_error},{angle}\n"));
    }
    out
}

/// Points and nominal radius recovered from a `generate --format csv` file.
#[derive(Debug)]
pub struct PlotData {
    pub points: Vec<(f64, f64)>,
    pub r: f64,
}

/// Parse a trajectory CSV, reporting 1-based line numbers on malformed
/// input. The nominal radius is recovered from the first data row as
/// `hypot(x, y) - radius_error`.
pub fn parse_trajectory_csv(text: &str) -> Result<PlotData> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().context("line 1: empty input")?;
    if header.trim_end() != CSV_HEADER {
        bail!("line 1: expected header `{CSV_HEADER}`, got `{header}`");
    }
    let mut points = Vec::new();
    let mut r = None;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            bail!("line {lineno}: expected 5 fields, got {}", fields.len());
        }
        let parse = |name: &str, s: &str| -> Result<f64> {
            s.parse::<f64>()
                .with_context(|| format!("line {lineno}: invalid {name} value `{s}`"))
        };
        let x = parse("x", fields[1])?;
        let y = parse("y", fields[2])?;
        let radius_error = parse("radius_error", fields[3])?;
        if r.is_none() {
            r = Some(x.hypot(y) - radius_error);
        }
        points.push((x, y));
    }
    Ok(PlotData { points, r: r.unwrap_or(1.0) })
}

/// SVG 1.1 document with one reference circle of radius `r` and, when the
/// trajectory is nonempty, one polyline through its points. The viewBox
/// spans 1.2 times the radius on each side; the y axis is flipped so the
/// orbit runs counterclockwise on screen.
pub fn trajectory_svg(points: &[(f64, f64)], r: f64, size: u32) -> String {
    let span = 1.2 * r;
    let width = 2.0 * span;
    let stroke = 0.006 * r;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"{} {} {width} {width}\">\n",
        -span, -span
    ));
    out.push_str("<g transform=\"scale(1,-1)\">\n");
    out.push_str(&format!(
        "<circle cx=\"0\" cy=\"0\" r=\"{r}\" fill=\"none\" stroke=\"#888888\" stroke-width=\"{stroke}\"/>\n"
    ));
    if !points.is_empty() {
        let coords: Vec<String> = points.iter().map(|(x, y)| format!("{x},{y}")).collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#cc2222\" stroke-width=\"{stroke}\"/>\n",
            coords.join(" ")
        ));
    }
    out.push_str("</g>\n</svg>\n");
    out
}
