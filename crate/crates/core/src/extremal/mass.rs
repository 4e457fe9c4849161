//! Sampling λ over a body and integrating it to the total mass `(2π)ⁿ`.
//!
//! λ blows up like `1/sqrt(dist)` at the boundary. [`total_mass`] therefore
//! integrates in gauge-polar coordinates `z = x0 + t ρ_K(u) u` around the
//! interior point, with `t = 1 - s²`: the substitution cancels the
//! singularity, so the integrand is bounded in `s`. The layer
//! `gauge > 1 - margin` is left out and restored by extrapolating in
//! `sqrt(margin)` across two margins.

use std::f64::consts::PI;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::density;
use crate::body::ConvexBody;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::sphere;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationRule {
    /// Uniform grid over the bounding box, each node weighted `hⁿ`.
    CartesianMidpoint,
    /// Midpoint rule in `(s, u)` with `z = x0 + (1 - s²) ρ_K(u) u`.
    GaugePolar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityField {
    pub body: String,
    pub dim: usize,
    pub rule: IntegrationRule,
    /// Grid spacing: in space for the Cartesian rule, in `s` for gauge-polar.
    pub spacing: f64,
    pub margin: f64,
    pub points: Vec<DVector<f64>>,
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
    /// Weighted sum of the samples: the mass of `{gauge <= 1 - margin}`.
    pub mass: f64,
}

impl DensityField {
    fn assemble(
        k: &ConvexBody,
        rule: IntegrationRule,
        spacing: f64,
        margin: f64,
        points: Vec<DVector<f64>>,
        weights: Vec<f64>,
        cfg: &Config,
    ) -> Result<Self> {
        let values: Vec<f64> = points.par_iter().map(|x| density(k, x, cfg)).collect::<Result<_>>()?;
        let mass = values.iter().zip(&weights).map(|(v, w)| v * w).sum();
        Ok(Self {
            body: k.name().unwrap_or("body").to_string(),
            dim: k.dim(),
            rule,
            spacing,
            margin,
            points,
            values,
            weights,
            mass,
        })
    }

    /// CSV with header `x1,...,xn,lambda`, one row per sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (1..=self.dim).map(|j| format!("x{j}")).collect();
        out.push_str(&header.join(","));
        out.push_str(",lambda\n");
        for (p, v) in self.points.iter().zip(&self.values) {
            for c in p.iter() {
                out.push_str(&format!("{c},"));
            }
            out.push_str(&format!("{v}\n"));
        }
        out
    }
}

/// λ on a `grid`-per-axis lattice spanning the bounding box, keeping nodes
/// with `gauge <= 1 - margin`.
pub fn density_grid(k: &ConvexBody, grid: usize, margin: f64, cfg: &Config) -> Result<DensityField> {
    if grid < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 nodes per axis".into()));
    }
    let n = k.dim();
    let bbox = k.bounding_box();
    let steps: Vec<f64> = bbox.iter().map(|(lo, hi)| (hi - lo) / (grid - 1) as f64).collect();
    let cell: f64 = steps.iter().product();
    let total = grid.pow(n as u32);
    let mut points = Vec::new();
    for flat in 0..total {
        let mut rem = flat;
        let mut p = DVector::zeros(n);
        for j in (0..n).rev() {
            let i = rem % grid;
            rem /= grid;
            p[j] = bbox[j].0 + i as f64 * steps[j];
        }
        if k.gauge_unchecked(&p) <= 1.0 - margin {
            points.push(p);
        }
    }
    let weights = vec![cell; points.len()];
    let spacing = steps.iter().copied().fold(0.0, f64::max);
    DensityField::assemble(k, IntegrationRule::CartesianMidpoint, spacing, margin, points, weights, cfg)
}

/// λ on the gauge-polar rule with `nodes` points in `s ∈ [sqrt(margin), 1]`
/// and `nodes` angles (`nodes²` Fibonacci directions in space).
pub fn gauge_polar_field(k: &ConvexBody, nodes: usize, margin: f64, cfg: &Config) -> Result<DensityField> {
    if nodes < 2 {
        return Err(Error::InvalidArgument("need at least 2 integration nodes".into()));
    }
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::InvalidArgument(format!("margin must lie in (0, 1), got {margin}")));
    }
    let n = k.dim();
    let x0 = k.interior_point();
    let (dirs, dir_weight) = match n {
        1 => (sphere::directions(1, 2), 1.0),
        2 => (sphere::circle(nodes, 0.5), 2.0 * PI / nodes as f64),
        _ => {
            let m = nodes * nodes;
            (sphere::fibonacci(m), 4.0 * PI / m as f64)
        }
    };
    let s0 = margin.sqrt();
    let ds = (1.0 - s0) / nodes as f64;
    let mut points = Vec::with_capacity(dirs.len() * nodes);
    let mut weights = Vec::with_capacity(dirs.len() * nodes);
    for u in &dirs {
        let rho = 1.0 / k.gauge_unchecked(&(x0 + u));
        for i in 0..nodes {
            let s = s0 + (i as f64 + 0.5) * ds;
            let t = 1.0 - s * s;
            points.push(x0 + u * (t * rho));
            // dz = t^{n-1} ρⁿ dt dσ and dt = 2s ds.
            weights.push(t.powi(n as i32 - 1) * rho.powi(n as i32) * 2.0 * s * ds * dir_weight);
        }
    }
    DensityField::assemble(k, IntegrationRule::GaugePolar, ds, margin, points, weights, cfg)
}

/// Mass estimate with its provenance. Serialized as a single JSON line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassReport {
    pub body: String,
    pub n: usize,
    pub resolution: usize,
    /// Margins used for the extrapolation, largest first.
    pub margin: Vec<f64>,
    /// Clipped mass at each margin.
    pub clipped: Vec<f64>,
    pub mass: f64,
    /// `|mass - mass at half resolution|`.
    pub error_bar: f64,
    pub target: f64,
    pub rel_error: f64,
    pub rule: IntegrationRule,
}

impl MassReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Extrapolates `M(m) = M0 - c sqrt(m)` from the two smallest margins.
fn extrapolate(margins: &[f64], masses: &[f64]) -> f64 {
    if margins.len() < 2 {
        return masses[0];
    }
    let mut idx: Vec<usize> = (0..margins.len()).collect();
    idx.sort_by(|&i, &j| margins[i].total_cmp(&margins[j]));
    let (i2, i1) = (idx[0], idx[1]);
    let (r1, r2) = (margins[i1].sqrt(), margins[i2].sqrt());
    (r1 * masses[i2] - r2 * masses[i1]) / (r1 - r2)
}

fn mass_at(k: &ConvexBody, nodes: usize, margins: &[f64], cfg: &Config) -> Result<(Vec<f64>, f64)> {
    let clipped: Vec<f64> =
        margins.iter().map(|&m| gauge_polar_field(k, nodes, m, cfg).map(|f| f.mass)).collect::<Result<_>>()?;
    let m0 = extrapolate(margins, &clipped);
    Ok((clipped, m0))
}

/// Total Monge-Ampère mass of `k`, expected to be `(2π)ⁿ`.
pub fn total_mass(k: &ConvexBody, resolution: usize, cfg: &Config) -> Result<MassReport> {
    cfg.validate()?;
    let mut margins = cfg.margins.clone();
    margins.sort_by(|a, b| b.total_cmp(a));
    let (clipped, mass) = mass_at(k, resolution, &margins, cfg)?;
    let (_, coarse) = mass_at(k, (resolution / 2).max(2), &margins, cfg)?;
    let n = k.dim();
    let target = (2.0 * PI).powi(n as i32);
    Ok(MassReport {
        body: k.name().unwrap_or("body").to_string(),
        n,
        resolution,
        margin: margins,
        clipped,
        mass,
        error_bar: (mass - coarse).abs(),
        target,
        rel_error: (mass - target).abs() / target,
        rule: IntegrationRule::GaugePolar,
    })
}
