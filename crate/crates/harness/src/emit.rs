use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde::Serialize;

use crate::config::SweepConfig;
use crate::error::{HarnessError, Result};
use crate::fit::Fit;
use crate::sweep::{NamedFit, Rows, SweepResult, Failure};

pub const SPHERE_HEADER: [&str; 9] =
    ["epsilon", "T", "mu", "M0", "alpha", "zonal_defect", "Lh_integral_norm", "energy_final", "wall_ms"];
pub const MHD_HEADER: [&str; 10] = [
    "epsilon",
    "T",
    "k",
    "s",
    "wave_defect_Hk1",
    "dzu_Hk1",
    "u_int_Winf",
    "b_int_Wks",
    "kernel_component_L2",
    "wall_ms",
];

/// Shortest representation that parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn csv_records(rows: &Rows) -> (Vec<&'static str>, Vec<Vec<String>>) {
    match rows {
        Rows::Sphere(r) => (
            SPHERE_HEADER.to_vec(),
            r.iter()
                .map(|x| {
                    [x.epsilon, x.t_final, x.mu, x.m0, x.alpha, x.zonal_defect, x.lh_integral_norm, x.energy_final, x.wall_ms]
                        .map(num)
                        .to_vec()
                })
                .collect(),
        ),
        Rows::Mhd(r) => (
            MHD_HEADER.to_vec(),
            r.iter()
                .map(|x| {
                    let mut v = vec![num(x.epsilon), num(x.t_final), x.k.to_string(), num(x.s)];
                    v.extend([x.wave_defect, x.dz_u, x.u_int_winf, x.b_int_ws, x.kernel_l2, x.wall_ms].map(num));
                    v
                })
                .collect(),
        ),
    }
}

pub fn write_csv(rows: &Rows, path: &Path) -> Result<()> {
    let (header, records) = csv_records(rows);
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(&header).map_err(|e| csv_err(path, e))?;
    for r in records {
        w.write_record(&r).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

fn csv_err(path: &Path, e: csv::Error) -> HarnessError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => HarnessError::io(path, io),
        other => HarnessError::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

pub fn git_describe() -> String {
    Command::new("git")
        .args(["describe", "--always", "--dirty"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".to_string())
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    git_describe: String,
    config: &'a SweepConfig,
    partial: bool,
    primary: &'static str,
    fit: Option<&'a Fit>,
    secondary: &'a [NamedFit],
    failures: &'a [Failure],
    #[serde(flatten)]
    rows: &'a Rows,
}

/// Log–log scatter of the primary defect against `ε` with the fitted line.
pub fn render_svg(res: &SweepResult) -> Option<String> {
    let pts: Vec<(f64, f64)> = res.rows.primary().into_iter().filter(|p| p.0 > 0.0 && p.1 > 0.0).collect();
    if pts.is_empty() {
        return None;
    }
    let (w, h, m) = (640.0, 440.0, 70.0);
    let lx: Vec<f64> = pts.iter().map(|p| p.0.log10()).collect();
    let ly: Vec<f64> = pts.iter().map(|p| p.1.log10()).collect();
    let span = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min).floor();
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil();
        if hi > lo { (lo, hi) } else { (lo, lo + 1.0) }
    };
    let (x0, x1) = span(&lx);
    let (y0, y1) = span(&ly);
    let sx = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let sy = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{m}" y="{m}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * m,
        h - 2.0 * m
    );
    for d in (x0 as i32)..=(x1 as i32) {
        let x = sx(d as f64);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/>"#, h - m, h - m + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">1e{d}</text>"#, h - m + 20.0);
    }
    for d in (y0 as i32)..=(y1 as i32) {
        let y = sy(d as f64);
        let _ = writeln!(s, r#"<line x1="{}" y1="{y:.2}" x2="{m}" y2="{y:.2}" stroke="black"/>"#, m - 5.0);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">1e{d}</text>"#, m - 8.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">epsilon</text>"#, w / 2.0, h - 20.0);
    let _ = writeln!(
        s,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">{}</text>"#,
        h / 2.0,
        h / 2.0,
        res.rows.primary_name()
    );
    if let Some(f) = &res.fit {
        let ln10 = std::f64::consts::LN_10;
        let fy = |x: f64| (f.intercept + f.slope * x * ln10) / ln10;
        let (a, b) = (lx.iter().copied().fold(f64::INFINITY, f64::min), lx.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="steelblue" stroke-width="2"/>"#,
            sx(a),
            sy(fy(a)),
            sx(b),
            sy(fy(b))
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">slope {:.3}, r² {:.4}</text>"#,
            m + 10.0,
            m + 20.0,
            f.slope,
            f.r_squared
        );
    }
    for (x, y) in lx.iter().zip(&ly) {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="firebrick"/>"#, sx(*x), sy(*y));
    }
    s.push_str("</svg>\n");
    Some(s)
}

/// Write `sweep.csv`, `sweep.json` and, when there are rows, `sweep.svg`.
pub fn emit_outputs(res: &SweepResult, cfg: &SweepConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut written = Vec::new();

    let csv_path = dir.join("sweep.csv");
    write_csv(&res.rows, &csv_path)?;
    written.push(csv_path);

    let json_path = dir.join("sweep.json");
    let rec = JsonRecord {
        git_describe: git_describe(),
        config: cfg,
        partial: res.partial(),
        primary: res.rows.primary_name(),
        fit: res.fit.as_ref(),
        secondary: &res.secondary,
        failures: &res.failures,
        rows: &res.rows,
    };
    let text = serde_json::to_string_pretty(&rec).map_err(|e| HarnessError::io(&json_path, e.into()))?;
    std::fs::write(&json_path, text + "\n").map_err(|e| HarnessError::io(&json_path, e))?;
    written.push(json_path);

    let svg_path = dir.join("sweep.svg");
    match render_svg(res) {
        Some(svg) => {
            std::fs::write(&svg_path, svg).map_err(|e| HarnessError::io(&svg_path, e))?;
            written.push(svg_path);
        }
        None => {
            if svg_path.exists() {
                std::fs::remove_file(&svg_path).map_err(|e| HarnessError::io(&svg_path, e))?;
            }
        }
    }
    Ok(written)
}
