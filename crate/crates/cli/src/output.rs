//! Curve export: CSV and JSON writers (17-significant-digit floats, LF
//! line endings) and a minimal SVG line plot.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;

use crate::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// 17 significant digits; round-trips any f64 exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CurveColumns<'a> {
    pub headers: Vec<&'a str>,
    pub columns: Vec<&'a [f64]>,
}

impl<'a> CurveColumns<'a> {
    pub fn new(headers: Vec<&'a str>, columns: Vec<&'a [f64]>) -> Self {
        debug_assert_eq!(headers.len(), columns.len());
        Self { headers, columns }
    }

    /// Rows mirrored to negative delay (first column is τ); the delay
    /// axis becomes symmetric around 0, dropping the duplicate τ = 0 row.
    pub fn symmetric(&self) -> (Vec<Vec<f64>>, Vec<&'a str>) {
        let n = self.columns[0].len();
        let mut rows = Vec::with_capacity(2 * n);
        for i in (0..n).rev() {
            if self.columns[0][i] == 0.0 {
                continue;
            }
            let mut row: Vec<f64> = self.columns.iter().map(|c| c[i]).collect();
            row[0] = -row[0];
            rows.push(row);
        }
        for i in 0..n {
            rows.push(self.columns.iter().map(|c| c[i]).collect());
        }
        (rows, self.headers.clone())
    }

    fn rows(&self, symmetric: bool) -> (Vec<Vec<f64>>, Vec<&'a str>) {
        if symmetric {
            self.symmetric()
        } else {
            let n = self.columns[0].len();
            (
                (0..n)
                    .map(|i| self.columns.iter().map(|c| c[i]).collect())
                    .collect(),
                self.headers.clone(),
            )
        }
    }

    pub fn to_csv(&self, symmetric: bool) -> String {
        let (rows, headers) = self.rows(symmetric);
        let mut out = headers.join(",");
        out.push('\n');
        for row in rows {
            let cells: Vec<String> = row.iter().map(|&x| fmt_float(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, symmetric: bool) -> String {
        let (rows, headers) = self.rows(symmetric);
        let mut out = String::from("{\n");
        for (j, header) in headers.iter().enumerate() {
            let cells: Vec<String> = rows.iter().map(|r| fmt_float(r[j])).collect();
            let _ = write!(out, "  \"{header}\": [{}]", cells.join(", "));
            out.push_str(if j + 1 < headers.len() { ",\n" } else { "\n" });
        }
        out.push_str("}\n");
        out
    }

    pub fn write(&self, path: &Path, format: Format, symmetric: bool) -> Result<(), AppError> {
        let body = match format {
            Format::Csv => self.to_csv(symmetric),
            Format::Json => self.to_json(symmetric),
        };
        std::fs::write(path, body)?;
        Ok(())
    }

    /// Minimal vector plot of column 1 against column 0, written next to
    /// the data file.
    pub fn write_plot(&self, data_path: &Path, symmetric: bool) -> Result<PathBuf, AppError> {
        let (rows, headers) = self.rows(symmetric);
        let path = data_path.with_extension("svg");
        std::fs::write(&path, render_svg(&rows, &headers))?;
        Ok(path)
    }
}

fn render_svg(rows: &[Vec<f64>], headers: &[&str]) -> String {
    const W: f64 = 800.0;
    const H: f64 = 500.0;
    const M: f64 = 60.0;
    let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let (x_min, x_max) = bounds(&xs);
    let (mut y_min, mut y_max) = bounds(&ys);
    if y_max - y_min < 1e-12 {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let sx = |x: f64| M + (x - x_min) / (x_max - x_min) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y_min) / (y_max - y_min) * (H - 2.0 * M);
    let points: Vec<String> = rows
        .iter()
        .map(|r| format!("{:.2},{:.2}", sx(r[0]), sy(r[1])))
        .collect();
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "<line x1=\"{m}\" y1=\"{ybase}\" x2=\"{xend}\" y2=\"{ybase}\" stroke=\"black\"/>\n",
            "<line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{ybase}\" stroke=\"black\"/>\n",
            "<text x=\"{m}\" y=\"{h}\" font-size=\"12\">{xmin}</text>\n",
            "<text x=\"{xend}\" y=\"{h}\" font-size=\"12\" text-anchor=\"end\">{xmax}</text>\n",
            "<text x=\"2\" y=\"{ybase}\" font-size=\"12\">{ymin}</text>\n",
            "<text x=\"2\" y=\"{m}\" font-size=\"12\">{ymax}</text>\n",
            "<text x=\"{xmid}\" y=\"{h}\" font-size=\"12\" text-anchor=\"middle\">{xlabel}</text>\n",
            "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"{pts}\"/>\n",
            "</svg>\n"
        ),
        w = W,
        h = H - 2.0,
        m = M,
        ybase = H - M,
        xend = W - M,
        xmid = W / 2.0,
        xmin = format!("{x_min:.3}"),
        xmax = format!("{x_max:.3}"),
        ymin = format!("{y_min:.3}"),
        ymax = format!("{y_max:.3}"),
        xlabel = headers[0],
        pts = points.join(" ")
    )
}

fn bounds(xs: &[f64]) -> (f64, f64) {
    xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    })
}

/// Uniform τ grid from 0 to `tau_max` inclusive.
pub fn tau_grid(tau_max: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| tau_max * i as f64 / (points - 1) as f64)
        .collect()
}
