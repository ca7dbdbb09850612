//! Discrepancy sums `ξ(n) = S_n(x0)` along an orbit, with CSV and SVG export.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::{Error, Result};
use crate::exactnum::QuadSurd;
use crate::heavyset::partial_sums;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiSeries {
    pub alpha: QuadSurd,
    pub x0: QuadSurd,
    /// `ξ(0), …, ξ(N)`
    pub values: Vec<i64>,
    pub min_value: i64,
    pub argmin: usize,
}

impl XiSeries {
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }
}

/// Exact `ξ(n) = S_n(x0)` for `n = 0..=N`.
pub fn xi_sums(alpha: &QuadSurd, n: u64, x0: &QuadSurd) -> Result<XiSeries> {
    let mut values = Vec::with_capacity(n as usize + 1);
    values.push(0);
    values.extend(partial_sums(x0, alpha, n)?);
    let (argmin, &min_value) = values
        .iter()
        .enumerate()
        .min_by_key(|&(i, v)| (*v, i))
        .expect("series has ξ(0)");
    Ok(XiSeries {
        alpha: alpha.clone(),
        x0: x0.clone(),
        values,
        min_value,
        argmin,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Svg,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "svg" => Ok(ExportFormat::Svg),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

pub const SVG_WIDTH: f64 = 1000.0;
pub const SVG_HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

/// Render as CSV (`n,xi`) or as an SVG polyline. Unless `reproducible`, the
/// SVG carries a generation-time comment.
pub fn xi_export(series: &XiSeries, format: ExportFormat, reproducible: bool) -> Result<String> {
    if series.values.is_empty() {
        return Err(Error::InvalidArgument("empty series".into()));
    }
    Ok(match format {
        ExportFormat::Csv => {
            let mut out = String::from("n,xi\n");
            for (n, v) in series.values.iter().enumerate() {
                let _ = writeln!(out, "{n},{v}");
            }
            out
        }
        ExportFormat::Svg => svg(series, reproducible),
    })
}

fn svg(series: &XiSeries, reproducible: bool) -> String {
    let n = series.n().max(1) as f64;
    let lo = series.min_value.min(0) as f64;
    let hi = (*series.values.iter().max().unwrap()).max(1) as f64;
    let w = SVG_WIDTH - 2.0 * MARGIN;
    let h = SVG_HEIGHT - 2.0 * MARGIN;
    let px = |i: f64| MARGIN + w * i / n;
    let py = |v: f64| SVG_HEIGHT - MARGIN - h * (v - lo) / (hi - lo);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}" width="{SVG_WIDTH}" height="{SVG_HEIGHT}">"#
    );
    if !reproducible {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let _ = writeln!(out, "<!-- generated at unix time {secs} -->");
    }
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, x1) = (px(0.0), px(n));
    let (y0, ytop, ybot) = (py(0.0), py(hi), py(lo));
    let _ = writeln!(
        out,
        r#"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y0:.3}" stroke="gray" stroke-width="1"/>"#
    );
    let _ = writeln!(
        out,
        r#"<line x1="{x0:.3}" y1="{ytop:.3}" x2="{x0:.3}" y2="{ybot:.3}" stroke="gray" stroke-width="1"/>"#
    );
    let points: Vec<String> = series
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| format!("{:.3},{:.3}", px(i as f64), py(v as f64)))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="black" stroke-width="1" points="{}"/>"#,
        points.join(" ")
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="{:.3}" font-size="14" text-anchor="end">N = {}</text>"#,
        x1,
        MARGIN - 15.0,
        series.n()
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="{:.3}" font-size="14">α = {}, min ξ = {}</text>"#,
        x0,
        MARGIN - 15.0,
        series.alpha,
        series.min_value
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_surd;

    fn silver() -> QuadSurd {
        parse_surd("sqrt(2) - 1").unwrap()
    }

    #[test]
    fn first_step_is_a_hit() {
        let s = xi_sums(&QuadSurd::ratio(2, 7), 1, &QuadSurd::zero()).unwrap();
        assert_eq!(s.values, vec![0, 1]);
    }

    #[test]
    fn silver_ratio_stays_nonnegative() {
        let s = xi_sums(&silver(), 168, &QuadSurd::zero()).unwrap();
        assert!(s.min_value >= 0);
        assert!(s.values.windows(2).all(|w| (w[1] - w[0]).abs() == 1));
    }

    #[test]
    fn csv_rows() {
        let s = xi_sums(&silver(), 4, &QuadSurd::zero()).unwrap();
        let csv = xi_export(&s, ExportFormat::Csv, true).unwrap();
        assert_eq!(csv.lines().count(), 6);
        assert_eq!(csv.lines().next(), Some("n,xi"));
    }

    #[test]
    fn svg_root_and_reproducibility() {
        let s = xi_sums(&silver(), 28, &QuadSurd::zero()).unwrap();
        let a = xi_export(&s, ExportFormat::Svg, true).unwrap();
        assert!(a.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 400\""));
        assert!(a.contains("N = 28"));
        assert_eq!(a, xi_export(&s, ExportFormat::Svg, true).unwrap());
        assert!(xi_export(&s, ExportFormat::Svg, false)
            .unwrap()
            .contains("<!-- generated"));
        assert!("png".parse::<ExportFormat>().is_err());
    }
}
