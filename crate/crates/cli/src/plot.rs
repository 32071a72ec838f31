//! Samples of `P(t)` and `Q(R(t))` over an interval, as SVG and CSV.

use std::fmt::Write as _;
use std::io::Write;

use numreparam::errorbound::IntervalSpec;
use numreparam::{PlaneParametrization, RationalFunction};

use crate::CliError;

pub const DEFAULT_SAMPLES: usize = 400;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 32.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplePoint {
    pub t: f64,
    pub p: (f64, f64),
    pub qr: (f64, f64),
}

/// `n` equispaced parameters strictly inside the interval.
pub fn sample(p: &PlaneParametrization, q: &PlaneParametrization, r: &RationalFunction, interval: &IntervalSpec, n: usize) -> Vec<SamplePoint> {
    let (d1, d2) = (interval.d1, interval.d2);
    (1..=n)
        .map(|k| {
            let t = d1 + (d2 - d1) * k as f64 / (n + 1) as f64;
            let (qx, qy) = q.eval(r.eval_real(t));
            SamplePoint { t, p: p.eval_real(t), qr: (qx.re, qy.re) }
        })
        .collect()
}

pub fn write_csv(points: &[SamplePoint], out: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "p_x", "p_y", "qr_x", "qr_y"])?;
    for s in points {
        w.write_record([s.t, s.p.0, s.p.1, s.qr.0, s.qr.1].map(|v| v.to_string()))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Polylines of `P` (solid) and `Q∘R` (dashed), broken wherever a sample is
/// not finite.
pub fn render_svg(points: &[SamplePoint]) -> String {
    let finite = |(x, y): (f64, f64)| x.is_finite() && y.is_finite();
    let all: Vec<(f64, f64)> = points.iter().flat_map(|s| [s.p, s.qr]).filter(|&v| finite(v)).collect();
    let (mut x0, mut x1, mut y0, mut y1) = all.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    if all.is_empty() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = ((WIDTH - 2.0 * MARGIN) / span).min((HEIGHT - 2.0 * MARGIN) / span);
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let map = |(x, y): (f64, f64)| (WIDTH / 2.0 + (x - cx) * scale, HEIGHT / 2.0 - (y - cy) * scale);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (label, dash, color, pick) in [
        ("P", "", "#1f4e9c", (|s: &SamplePoint| s.p) as fn(&SamplePoint) -> (f64, f64)),
        ("Q(R)", r#" stroke-dasharray="6 4""#, "#c0392b", |s: &SamplePoint| s.qr),
    ] {
        let _ = writeln!(svg, r#"<g id="{label}" fill="none" stroke="{color}" stroke-width="1.5"{dash}>"#);
        for run in points.split(|s| !finite(pick(s))).filter(|run| run.len() > 1) {
            let coords: Vec<String> = run
                .iter()
                .map(|s| {
                    let (u, v) = map(pick(s));
                    format!("{u:.2},{v:.2}")
                })
                .collect();
            let _ = writeln!(svg, r#"<polyline points="{}"/>"#, coords.join(" "));
        }
        let _ = writeln!(svg, "</g>");
    }
    let _ = writeln!(svg, r#"<text x="{MARGIN}" y="20" font-family="sans-serif" font-size="12">P solid, Q(R) dashed</text>"#);
    svg.push_str("</svg>\n");
    svg
}
