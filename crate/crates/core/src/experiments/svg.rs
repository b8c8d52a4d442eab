use std::fmt::Write as _;
use std::path::Path;

use super::RateReport;
use crate::error::{Error, Result};

const PANEL_W: f64 = 360.0;
const PANEL_H: f64 = 280.0;
const MARGIN: f64 = 48.0;

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = 0.05 * (hi - lo).max(1e-3);
    (lo - pad, hi + pad)
}

/// One log–log panel per `z`: measured norms as dots, the fitted line dashed.
pub fn emit_svg(report: &RateReport, path: &Path) -> Result<()> {
    let panels = report.rates.len().max(1);
    let width = PANEL_W * panels as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL_H}" font-family="sans-serif" font-size="11">"#
    );
    for (k, rate) in report.rates.iter().enumerate() {
        let pts: Vec<(f64, f64)> = report
            .cells_for(rate.z)
            .filter(|c| c.norm_estimate > 0.0 && c.norm_estimate.is_finite())
            .map(|c| (c.h.log10(), c.norm_estimate.log10()))
            .collect();
        let (x0, x1) = bounds(pts.iter().map(|p| p.0));
        let (y0, y1) = bounds(pts.iter().map(|p| p.1));
        let ox = k as f64 * PANEL_W;
        let px = |x: f64| ox + MARGIN + (x - x0) / (x1 - x0) * (PANEL_W - 1.5 * MARGIN);
        let py = |y: f64| PANEL_H - MARGIN - (y - y0) / (y1 - y0) * (PANEL_H - 1.5 * MARGIN);
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            ox + MARGIN,
            MARGIN / 2.0,
            PANEL_W - 1.5 * MARGIN,
            PANEL_H - 1.5 * MARGIN
        );
        let title = match rate.fit {
            Some(f) => format!("z = {} : slope {:.3} (expected {:.3})", rate.z, f.slope, report.expected),
            None => format!("z = {} : no fit", rate.z),
        };
        let _ = writeln!(s, r#"<text x="{}" y="16">{title}</text>"#, ox + MARGIN);
        let _ = writeln!(s, r#"<text x="{}" y="{}">log10 h</text>"#, ox + PANEL_W / 2.0, PANEL_H - 10.0);
        let _ = writeln!(
            s,
            r#"<text x="12" y="{}" transform="rotate(-90 12 {})">log10 ‖E‖</text>"#,
            PANEL_H / 2.0,
            PANEL_H / 2.0
        );
        for (x, y) in &pts {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#, px(*x), py(*y));
        }
        if let Some(f) = rate.fit {
            // the fit is in natural logs; the slope carries over to log10 unchanged
            let b = f.intercept / std::f64::consts::LN_10;
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="firebrick" stroke-dasharray="4 3"/>"#,
                px(x0),
                py(b + f.slope * x0),
                px(x1),
                py(b + f.slope * x1)
            );
        }
    }
    s.push_str("</svg>\n");
    std::fs::write(path, s).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
