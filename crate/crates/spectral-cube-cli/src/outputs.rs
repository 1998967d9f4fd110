//! File emission: CSV tables, JSON reports and static SVG plots.
//!
//! Floats are written with Rust's shortest round-trip formatting, and every
//! file opens with a comment line carrying the config hash, so reruns with
//! the same config and seed are byte-identical and traceable.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

pub struct OutDir {
    dir: PathBuf,
    hash: String,
}

impl OutDir {
    pub fn new(dir: &Path, hash: &str) -> Result<Self> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(OutDir { dir: dir.to_path_buf(), hash: hash.to_string() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write_csv(&self, name: &str, header: &str, rows: &[String]) -> Result<PathBuf> {
        let mut text = String::new();
        writeln!(text, "# config-hash: {}", self.hash).unwrap();
        writeln!(text, "{header}").unwrap();
        for row in rows {
            writeln!(text, "{row}").unwrap();
        }
        let path = self.path(name);
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    pub fn write_json(&self, name: &str, value: &serde_json::Value) -> Result<PathBuf> {
        let mut wrapped = serde_json::Map::new();
        wrapped.insert("config_hash".into(), self.hash.clone().into());
        wrapped.insert(
            "artifact_version".into(),
            env!("CARGO_PKG_VERSION").to_string().into(),
        );
        wrapped.insert("report".into(), value.clone());
        let text = serde_json::to_string_pretty(&serde_json::Value::Object(wrapped))?;
        let path = self.path(name);
        std::fs::write(&path, text + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    pub fn write_svg(&self, name: &str, svg: &str) -> Result<PathBuf> {
        let path = self.path(name);
        std::fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }
}

/// One plotted series: a label and the polyline points.
pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
    pub color: &'a str,
    /// Draw markers instead of a connected line.
    pub scatter: bool,
}

/// Minimal static line/scatter chart; no display server involved.
pub fn svg_chart(title: &str, hash: &str, series: &[Series<'_>]) -> String {
    let (w, h) = (720.0, 440.0);
    let margin = 56.0;
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
    }
    if !min_x.is_finite() {
        min_x = 0.0;
        max_x = 1.0;
        min_y = 0.0;
        max_y = 1.0;
    }
    if max_x - min_x < 1e-12 {
        max_x = min_x + 1.0;
    }
    if max_y - min_y < 1e-12 {
        max_y = min_y + 1.0;
    }
    let sx = |x: f64| margin + (x - min_x) / (max_x - min_x) * (w - 2.0 * margin);
    let sy = |y: f64| h - margin - (y - min_y) / (max_y - min_y) * (h - 2.0 * margin);

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\" font-family=\"monospace\" font-size=\"12\">"
    )
    .unwrap();
    writeln!(out, "<!-- config-hash: {hash} -->").unwrap();
    writeln!(out, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>").unwrap();
    writeln!(out, "<text x=\"{margin}\" y=\"24\" font-size=\"14\">{title}</text>").unwrap();
    // frame and corner labels
    writeln!(
        out,
        "<rect x=\"{margin}\" y=\"{margin}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999\"/>",
        w - 2.0 * margin,
        h - 2.0 * margin
    )
    .unwrap();
    writeln!(
        out,
        "<text x=\"{margin}\" y=\"{}\">x: {min_x:.4} .. {max_x:.4}</text>",
        h - 18.0
    )
    .unwrap();
    writeln!(
        out,
        "<text x=\"8\" y=\"{}\" transform=\"rotate(-90 8 {})\">y: {min_y:.4} .. {max_y:.4}</text>",
        h - margin,
        h - margin
    )
    .unwrap();
    let mut legend_y = margin + 14.0;
    for s in series {
        if s.scatter {
            for &(x, y) in &s.points {
                writeln!(
                    out,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{}\"/>",
                    sx(x),
                    sy(y),
                    s.color
                )
                .unwrap();
            }
        } else {
            let mut d = String::new();
            for (i, &(x, y)) in s.points.iter().enumerate() {
                let cmd = if i == 0 { 'M' } else { 'L' };
                write!(d, "{cmd}{:.2} {:.2} ", sx(x), sy(y)).unwrap();
            }
            writeln!(
                out,
                "<path d=\"{d}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
                s.color
            )
            .unwrap();
        }
        writeln!(
            out,
            "<text x=\"{}\" y=\"{legend_y}\" fill=\"{}\">{}</text>",
            w - margin - 180.0,
            s.color,
            s.label
        )
        .unwrap();
        legend_y += 16.0;
    }
    writeln!(out, "</svg>").unwrap();
    out
}

/// Shortest round-trip decimal for a float (Rust's default `Display`).
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}
