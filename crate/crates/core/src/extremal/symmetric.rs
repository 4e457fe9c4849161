//! Extremal function of an origin-symmetric body,
//! `V_K(z) = sup {log |h(z · Z)| : Z ∈ K*}` with `h` the Joukowski map, and
//! Lundin's closed form for the unit ball.
//!
//! `Z ↦ log |h(z · Z)|` is quasi-convex: its sublevel sets are preimages of
//! filled ellipses under a real-linear map. The supremum over a polytope is
//! therefore attained at a vertex. Edges are still scanned as a cross-check.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::body::{ConvexBody, Polytope, Shape};
use crate::config::Config;
use crate::ellipse::minimize_on_sphere;
use crate::error::{Error, Result};

/// `h(w) = w + sqrt(w² - 1)` on the branch with `|h| >= 1`.
pub fn joukowski(w: Complex64) -> Complex64 {
    if w.im == 0.0 && w.re.abs() <= 1.0 {
        // On the slit: the limit from the upper half-plane.
        return Complex64::new(w.re, (1.0 - w.re * w.re).sqrt());
    }
    let r = (w * w - 1.0).sqrt();
    let (p, m) = (w + r, w - r);
    if p.norm_sqr() >= m.norm_sqr() {
        p
    } else {
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JoukowskiValue {
    pub w: Complex64,
    pub h: Complex64,
}

impl JoukowskiValue {
    pub fn new(w: Complex64) -> Self {
        Self { w, h: joukowski(w) }
    }
}

fn log_h(w: Complex64) -> f64 {
    joukowski(w).norm().ln().max(0.0)
}

fn pair(z: &[Complex64], zz: &DVector<f64>) -> Complex64 {
    z.iter().zip(zz.iter()).map(|(a, b)| a * b).sum()
}

/// Vertex pairs of `p` sharing at least `n - 1` tight facets.
fn edges(p: &Polytope, n: usize) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    let tight: Vec<Vec<usize>> = p
        .vertices
        .iter()
        .map(|v| {
            (0..p.facets.len())
                .filter(|&i| (p.facets[i].normal.dot(v) - p.facets[i].offset).abs() < 1e-9 * (1.0 + p.facets[i].offset.abs()))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..p.vertices.len() {
        for j in i + 1..p.vertices.len() {
            let common = tight[i].iter().filter(|f| tight[j].contains(f)).count();
            if common >= n - 1 {
                out.push((i, j));
            }
        }
    }
    out
}

/// `V_K(z)` for origin-symmetric `k`.
pub fn v_k_symmetric(k: &ConvexBody, z: &[Complex64], cfg: &Config) -> Result<f64> {
    let n = k.dim();
    if z.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: z.len() });
    }
    let polar = k.polar()?;
    let f = |zz: &DVector<f64>| log_h(pair(z, zz));
    match polar.shape() {
        Shape::HPolytope(p) | Shape::VPolytope(p) => {
            let mut best = p.vertices.iter().map(&f).fold(0.0, f64::max);
            const SAMPLES: usize = 16;
            for (i, j) in edges(p, n) {
                let (a, b) = (&p.vertices[i], &p.vertices[j]);
                for s in 1..SAMPLES {
                    let t = s as f64 / SAMPLES as f64;
                    best = best.max(f(&(a * (1.0 - t) + b * t)));
                }
            }
            Ok(best)
        }
        Shape::Ball { .. } | Shape::Ellipsoid { .. } => {
            // ∂K* = {L ω : |ω| = 1} with L L ᵀ the inverse of the polar's matrix.
            let l = match k.shape() {
                Shape::Ball { radius, .. } => nalgebra::DMatrix::identity(n, n) / *radius,
                Shape::Ellipsoid { matrix, .. } => matrix.clone().cholesky().expect("validated at construction").l(),
                _ => unreachable!(),
            };
            let neg = |omega: &DVector<f64>| -f(&(&l * omega));
            let m = minimize_on_sphere(n, &neg, cfg.symmetric_grid_2d, cfg.symmetric_grid_3d, cfg.theta_refine_tol);
            Ok((-m).max(0.0))
        }
    }
}

/// Lundin's formula for the real unit ball:
/// `½ log h(|z|² + |z · z - 1|)` with the real Joukowski inverse `h`.
pub fn v_k_ball(z: &[Complex64]) -> f64 {
    let norm2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    let zz: Complex64 = z.iter().map(|c| c * c).sum();
    let s = norm2 + (zz - 1.0).norm();
    if s <= 1.0 {
        0.0
    } else {
        0.5 * (s + (s * s - 1.0).sqrt()).ln()
    }
}

/// `lim V_K(x + i t y) / t` by linear extrapolation through the two smallest
/// steps of `t_sequence`.
pub fn delta_b_fd(k: &ConvexBody, x: &DVector<f64>, y: &DVector<f64>, t_sequence: &[f64], cfg: &Config) -> Result<f64> {
    let n = k.dim();
    for v in [x, y] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    if y.norm() == 0.0 {
        return Err(Error::ZeroDirection);
    }
    k.require_origin_symmetric(cfg.symmetry_directions, cfg.symmetry_tol)?;
    let g = k.gauge_unchecked(x);
    if !(g < 1.0 - cfg.interior_tol) {
        return Err(Error::XNotInterior { gauge: g });
    }
    let mut ts: Vec<f64> = t_sequence.iter().copied().filter(|t| *t > 0.0).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    if ts.len() < 2 {
        return Err(Error::InvalidArgument("need two distinct positive steps".into()));
    }
    let q = |t: f64| -> Result<f64> {
        let z: Vec<Complex64> = x.iter().zip(y.iter()).map(|(a, b)| Complex64::new(*a, t * b)).collect();
        Ok(v_k_symmetric(k, &z, cfg)? / t)
    };
    let (t1, t2) = (ts[0], ts[1]);
    let (q1, q2) = (q(t1)?, q(t2)?);
    Ok((t2 * q1 - t1 * q2) / (t2 - t1))
}
