//! Plot of `H_{p/q}` for every reduced `p/q` with `q ≤ qmax`: one horizontal
//! strip per fraction at height `p/q`.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::heavyset::{rational_heavy_set, IntervalSet};

const SIZE: f64 = 1000.0;
const MARGIN: f64 = 40.0;

/// All reduced `p/q` in `(0, 1)` with `q ≤ qmax`, by denominator then numerator.
pub fn fractions(qmax: u64) -> Vec<(u64, u64)> {
    (2..=qmax)
        .flat_map(|q| (1..q).filter(move |p| p.gcd(&q) == 1).map(move |p| (p, q)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct Strip {
    pub p: u64,
    pub q: u64,
    pub set: IntervalSet,
}

#[derive(Clone, Debug)]
pub struct FigureBatch {
    pub strips: Vec<Strip>,
    pub svg: String,
}

impl FigureBatch {
    pub fn empty_strips(&self) -> Vec<(u64, u64)> {
        self.strips
            .iter()
            .filter(|s| s.set.is_empty())
            .map(|s| (s.p, s.q))
            .collect()
    }
}

/// Heavy sets of all fractions with `q ≤ qmax`, computed in parallel and
/// drawn in a fixed order.
pub fn figure_batch(qmax: u64, reproducible: bool) -> Result<FigureBatch> {
    if !(2..=1000).contains(&qmax) {
        return Err(Error::InvalidArgument(format!(
            "qmax = {qmax} must lie in 2..=1000"
        )));
    }
    let strips: Vec<Strip> = fractions(qmax)
        .into_par_iter()
        .map(|(p, q)| rational_heavy_set(p, q).map(|set| Strip { p, q, set }))
        .collect::<Result<_>>()?;

    let plot = SIZE - 2.0 * MARGIN;
    // x ∈ [0, 1/2] spans the plot width
    let px = |x: f64| MARGIN + plot * 2.0 * x;
    let py = |y: f64| SIZE - MARGIN - plot * y;
    let thickness = (plot / (qmax * qmax) as f64).clamp(0.25, 4.0);
    let min_width = 0.5;

    let bodies: Vec<String> = strips
        .par_iter()
        .map(|s| {
            let y = py(s.p as f64 / s.q as f64) - thickness / 2.0;
            let mut g = format!(r#"<g data-alpha="{}/{}">"#, s.p, s.q);
            for i in s.set.intervals() {
                let (a, b) = (px(i.lo.to_f64()), px(i.hi.to_f64()));
                let w = (b - a).max(min_width);
                let _ = write!(
                    g,
                    r#"<rect x="{:.3}" y="{y:.3}" width="{w:.3}" height="{thickness:.3}"/>"#,
                    a - (w - (b - a)) / 2.0
                );
            }
            g.push_str("</g>\n");
            g
        })
        .collect();

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">"#
    );
    if !reproducible {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let _ = writeln!(svg, "<!-- generated at unix time {secs} -->");
    }
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN}" y1="{b}" x2="{r}" y2="{b}" stroke="gray" stroke-width="1"/><line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{b}" stroke="gray" stroke-width="1"/>"#,
        b = SIZE - MARGIN,
        r = SIZE - MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.3}" y="{:.3}" font-size="14" text-anchor="end">x = 1/2</text><text x="{MARGIN}" y="{:.3}" font-size="14">q ≤ {qmax}, {} fractions</text>"#,
        SIZE - MARGIN,
        SIZE - MARGIN / 4.0,
        MARGIN - 12.0,
        strips.len()
    );
    svg.push_str(r#"<g fill="black">"#);
    svg.push('\n');
    for b in bodies {
        svg.push_str(&b);
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(FigureBatch { strips, svg })
}
