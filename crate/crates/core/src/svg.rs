//! Raster heatmap of a planar density field.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::extremal::DensityField;

const STOPS: [(f64, [u8; 3]); 5] = [
    (0.0, [68, 1, 84]),
    (0.25, [59, 82, 139]),
    (0.5, [33, 145, 140]),
    (0.75, [94, 201, 98]),
    (1.0, [253, 231, 37]),
];

fn color(t: f64) -> [u8; 3] {
    let t = t.clamp(0.0, 1.0);
    for w in STOPS.windows(2) {
        let ((t0, c0), (t1, c1)) = (w[0], w[1]);
        if t <= t1 {
            let s = (t - t0) / (t1 - t0);
            return [0, 1, 2].map(|i| (c0[i] as f64 + s * (c1[i] as f64 - c0[i] as f64)).round() as u8);
        }
    }
    STOPS[4].1
}

/// Value at the given quantile (nearest rank) of `values`.
fn quantile(values: &[f64], q: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let idx = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len()) - 1;
    sorted[idx]
}

/// One square per sample of a Cartesian field, colored linearly between the
/// minimum and the `clip` quantile of λ. Values above the quantile saturate.
pub fn heatmap(field: &DensityField, clip: f64) -> Result<String> {
    if field.dim != 2 {
        return Err(Error::InvalidArgument(format!("heatmaps need a planar body, got dimension {}", field.dim)));
    }
    if field.values.is_empty() {
        return Err(Error::InvalidArgument("density field has no samples".into()));
    }
    let lo = field.values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = quantile(&field.values, clip).max(lo + f64::EPSILON);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in &field.points {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    let h = field.spacing;
    let scale = 600.0 / (x1 - x0 + h).max(y1 - y0 + h);
    let (width, height) = ((x1 - x0 + h) * scale, (y1 - y0 + h) * scale);
    let cell = h * scale;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.3} {height:.3}" shape-rendering="crispEdges">"#
    );
    let _ = writeln!(out, "<title>{} density, clipped at the {:.0}% quantile ({hi:.4})</title>", field.body, clip * 100.0);
    for (p, v) in field.points.iter().zip(&field.values) {
        let [r, g, b] = color((v - lo) / (hi - lo));
        let px = (p[0] - x0) * scale;
        let py = (y1 - p[1]) * scale;
        let _ = writeln!(
            out,
            r##"<rect x="{px:.3}" y="{py:.3}" width="{:.3}" height="{:.3}" fill="#{r:02x}{g:02x}{b:02x}"/>"##,
            cell + 0.05,
            cell + 0.05
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
