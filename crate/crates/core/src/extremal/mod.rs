//! The Bernstein-Markov metric `δ_B(x, y) = 1 / b*(x, y)`, its unit ball, and
//! the Monge-Ampère density `λ(x) = n! vol({y : δ_B(x, y) <= 1}*)`.

mod mass;
mod symmetric;

pub use mass::{density_grid, gauge_polar_field, total_mass, DensityField, IntegrationRule, MassReport};
pub use symmetric::{delta_b_fd, joukowski, v_k_ball, v_k_symmetric, JoukowskiValue};

use nalgebra::DVector;
use rayon::prelude::*;

use crate::body::ConvexBody;
use crate::config::Config;
use crate::ellipse::{bstar, bstar_symmetric};
use crate::error::{Error, Result};
use crate::nelder_mead::NelderMead;
use crate::sphere;

use std::f64::consts::PI;

/// `1 / b*(x, y)`. Origin-symmetric bodies go through the polar-dual formula.
pub fn delta_b(k: &ConvexBody, x: &DVector<f64>, y: &DVector<f64>, cfg: &Config) -> Result<f64> {
    let b = if k.require_origin_symmetric(cfg.symmetry_directions, cfg.symmetry_tol).is_ok() {
        bstar_symmetric(k, x, y, cfg)?
    } else {
        bstar(k, x, y, cfg)?.bstar
    };
    Ok(1.0 / b)
}

/// Radial function `u ↦ b*(x, u)` of the δ_B unit ball at `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionalProfile {
    pub anchor: DVector<f64>,
    pub directions: Vec<DVector<f64>>,
    pub radii: Vec<f64>,
}

pub fn directional_profile(k: &ConvexBody, x: &DVector<f64>, cfg: &Config) -> Result<DirectionalProfile> {
    let n = k.dim();
    let count = cfg.profile_directions(n);
    if n == 2 {
        return planar_profile(k, x, count, cfg);
    }
    let directions = sphere::directions(n, count);
    let radii = directions.par_iter().map(|u| bstar(k, x, u, cfg).map(|r| r.bstar)).collect::<Result<_>>()?;
    Ok(DirectionalProfile { anchor: x.clone(), directions, radii })
}

const MAX_REFINE_DEPTH: usize = 16;

/// Uniform circle grid, subdivided where the unit ball's boundary leaves the
/// chord between neighboring samples. Corners of the unit ball (polytopes
/// produce them) would otherwise be clipped by the sampled hull.
///
/// Only the upper half circle is solved: a norm is even, so the lower half
/// is the mirror image.
fn planar_profile(k: &ConvexBody, x: &DVector<f64>, count: usize, cfg: &Config) -> Result<DirectionalProfile> {
    let half = count.div_ceil(2);
    let step = 2.0 * PI / (2 * half) as f64;
    let solve = |angle: f64| -> Result<f64> {
        Ok(bstar(k, x, &DVector::from_vec(vec![angle.cos(), angle.sin()]), cfg)?.bstar)
    };
    let base: Vec<f64> = (0..=half).into_par_iter().map(|i| solve(step * i as f64)).collect::<Result<_>>()?;
    let pieces: Vec<Vec<(f64, f64)>> = (0..half)
        .into_par_iter()
        .map(|i| {
            let mut out = vec![(step * i as f64, base[i])];
            refine_chord(&solve, (step * i as f64, base[i]), (step * (i + 1) as f64, base[i + 1]), cfg.profile_refine_tol, 0, &mut out)?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let upper: Vec<(f64, f64)> = pieces.into_iter().flatten().collect();
    let mut directions = Vec::with_capacity(2 * upper.len());
    let mut radii = Vec::with_capacity(2 * upper.len());
    for offset in [0.0, PI] {
        for &(angle, r) in &upper {
            let a = angle + offset;
            directions.push(DVector::from_vec(vec![a.cos(), a.sin()]));
            radii.push(r);
        }
    }
    Ok(DirectionalProfile { anchor: x.clone(), directions, radii })
}

fn refine_chord(
    solve: &impl Fn(f64) -> Result<f64>,
    (a0, r0): (f64, f64),
    (a1, r1): (f64, f64),
    tol: f64,
    depth: usize,
    out: &mut Vec<(f64, f64)>,
) -> Result<()> {
    if depth >= MAX_REFINE_DEPTH {
        return Ok(());
    }
    let am = 0.5 * (a0 + a1);
    let rm = solve(am)?;
    let p = [r0 * a0.cos(), r0 * a0.sin()];
    let q = [r1 * a1.cos(), r1 * a1.sin()];
    let m = [am.cos(), am.sin()];
    let d = [q[0] - p[0], q[1] - p[1]];
    // Ray t·m meets the chord p→q at t = (p × d) / (m × d).
    let chord = (p[0] * d[1] - p[1] * d[0]) / (m[0] * d[1] - m[1] * d[0]);
    if (rm - chord) / rm > tol {
        refine_chord(solve, (a0, r0), (am, rm), tol, depth + 1, out)?;
        out.push((am, rm));
        refine_chord(solve, (am, rm), (a1, r1), tol, depth + 1, out)?;
    }
    Ok(())
}

/// `vol(E*)` for the star body `E` with the profile's radial function.
///
/// `E` is replaced by the convex hull `P` of its sampled boundary points,
/// whose support function is `h(u) = max_j (u · v_j) ρ_j`. In the plane the
/// polar `P*` is a polygon and its area is exact; in space
/// `vol = (1/3) ∫ h(u)⁻³ dσ` is summed over the profile directions with equal
/// weights. `density` refines the spatial support function further.
pub fn polar_volume(profile: &DirectionalProfile) -> Result<f64> {
    let radii = &profile.radii;
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::DegenerateProfile);
    }
    let n = profile.anchor.len();
    let points: Vec<DVector<f64>> = profile.directions.iter().zip(radii).map(|(u, r)| u * *r).collect();
    match n {
        1 => {
            let plus = points.iter().map(|p| p[0]).fold(0.0, f64::max);
            let minus = points.iter().map(|p| -p[0]).fold(0.0, f64::max);
            if plus <= 0.0 || minus <= 0.0 {
                return Err(Error::DegenerateProfile);
            }
            Ok(1.0 / plus + 1.0 / minus)
        }
        2 => polar_polygon_area(&points),
        _ => {
            let m = profile.directions.len() as f64;
            let sum: f64 = profile
                .directions
                .par_iter()
                .map(|u| {
                    let h = points.iter().map(|p| u.dot(p)).fold(f64::NEG_INFINITY, f64::max);
                    h.powi(-3)
                })
                .collect::<Vec<_>>()
                .iter()
                .sum();
            Ok(sum * 4.0 * std::f64::consts::PI / m / 3.0)
        }
    }
}

fn cross(o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Area of `{w : w · p <= 1 for all p}` for planar points surrounding 0.
fn polar_polygon_area(points: &[DVector<f64>]) -> Result<f64> {
    let mut pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    // Andrew's monotone chain, counter-clockwise.
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(pts.len() + 1);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return Err(Error::DegenerateProfile);
    }
    // Each hull edge p→q is the facet of P* dual to the polar vertex w with
    // w · p = w · q = 1.
    let m = hull.len();
    let mut verts = Vec::with_capacity(m);
    for i in 0..m {
        let (p, q) = (hull[i], hull[(i + 1) % m]);
        let det = p[0] * q[1] - p[1] * q[0];
        if !(det > 0.0) {
            return Err(Error::DegenerateProfile);
        }
        verts.push([(q[1] - p[1]) / det, (p[0] - q[0]) / det]);
    }
    let area: f64 = (0..m)
        .map(|i| {
            let (a, b) = (verts[i], verts[(i + 1) % m]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        / 2.0;
    Ok(area.abs())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `λ(x) = n! vol(E*)`.
pub fn density(k: &ConvexBody, x: &DVector<f64>, cfg: &Config) -> Result<f64> {
    let profile = directional_profile(k, x, cfg)?;
    let vol = if k.dim() == 3 { spatial_polar_volume(k, &profile, cfg)? } else { polar_volume(&profile)? };
    Ok(factorial(k.dim()) * vol)
}

/// `vol(E*)` in space with the sampled support function polished per
/// direction: `h(u) = max_v (u · v) b*(x, v)` is climbed by Nelder-Mead from
/// the best sample. Sampling alone misses the corners of `E` and overstates
/// the polar volume by several percent on polytopes.
fn spatial_polar_volume(k: &ConvexBody, profile: &DirectionalProfile, cfg: &Config) -> Result<f64> {
    let radii = &profile.radii;
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::DegenerateProfile);
    }
    let x = &profile.anchor;
    let points: Vec<DVector<f64>> = profile.directions.iter().zip(radii).map(|(u, r)| u * *r).collect();
    let m = profile.directions.len() as f64;
    let step = 0.5 * (4.0 * PI / m).sqrt();
    let solver = NelderMead { max_iter: 200, diameter_tol: 1e-7, target: None, restarts: 1 };
    let terms: Vec<f64> = profile
        .directions
        .par_iter()
        .map(|u| {
            let (j, h0) = points
                .iter()
                .map(|p| u.dot(p))
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (j, h)| if h > best.1 { (j, h) } else { best });
            let v0 = &profile.directions[j];
            let (e1, e2) = tangent_basis(v0);
            let f = |q: &[f64]| {
                let v = v0 + &e1 * q[0] + &e2 * q[1];
                let v = &v / v.norm();
                let uv = u.dot(&v);
                if uv <= 0.0 {
                    return 0.0;
                }
                match bstar(k, x, &v, cfg) {
                    Ok(r) => -uv * r.bstar,
                    Err(_) => f64::INFINITY,
                }
            };
            let h = h0.max(-solver.minimize(f, &[0.0, 0.0], step).value);
            h.powi(-3)
        })
        .collect();
    Ok(terms.iter().sum::<f64>() * 4.0 * PI / m / 3.0)
}

fn tangent_basis(v: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
    let axis = if v[0].abs() < 0.9 { DVector::from_vec(vec![1.0, 0.0, 0.0]) } else { DVector::from_vec(vec![0.0, 1.0, 0.0]) };
    let e1 = &axis - v * v.dot(&axis);
    let e1 = &e1 / e1.norm();
    let e2 = DVector::from_vec(vec![v[1] * e1[2] - v[2] * e1[1], v[2] * e1[0] - v[0] * e1[2], v[0] * e1[1] - v[1] * e1[0]]);
    (e1, e2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(c)
    }

    fn constant_profile(n: usize, count: usize, r: f64) -> DirectionalProfile {
        let directions = sphere::directions(n, count);
        let radii = vec![r; directions.len()];
        DirectionalProfile { anchor: DVector::zeros(n), directions, radii }
    }

    #[test]
    fn delta_b_examples() {
        let cfg = Config::default();
        let disk = ConvexBody::ball(v(&[0.0, 0.0]), 1.0).unwrap();
        assert!((delta_b(&disk, &v(&[0.0, 0.0]), &v(&[0.0, 1.0]), &cfg).unwrap() - 1.0).abs() < 1e-9);
        let d = delta_b(&disk, &v(&[0.5, 0.0]), &v(&[1.0, 0.0]), &cfg).unwrap();
        assert!((d - 2.0 / 3f64.sqrt()).abs() < 1e-9);
        let seg = ConvexBody::interval(-1.0, 1.0).unwrap();
        for x in [0.0, 0.4, -0.8] {
            let d = delta_b(&seg, &v(&[x]), &v(&[1.0]), &cfg).unwrap();
            assert!((d - 1.0 / (1.0 - x * x).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn profile_examples() {
        let cfg = Config::default();
        let disk = ConvexBody::ball(v(&[0.0, 0.0]), 1.0).unwrap();
        let p = directional_profile(&disk, &v(&[0.0, 0.0]), &cfg).unwrap();
        assert_eq!(p.radii.len(), 720);
        assert!(p.radii.iter().all(|r| (r - 1.0).abs() < 1e-12));

        let square = ConvexBody::cube(2, 1.0).unwrap();
        let p = directional_profile(&square, &v(&[0.0, 0.0]), &cfg).unwrap();
        assert!((p.radii[0] - 1.0).abs() < 1e-12);
        let diag = p.directions.iter().position(|u| (u[0] - u[1]).abs() < 1e-12 && u[0] > 0.0).unwrap();
        assert!((p.radii[diag] - 2f64.sqrt()).abs() < 1e-12);
        let m = p.radii.len() / 2;
        for i in 0..m {
            assert!((&p.directions[i] + &p.directions[i + m]).norm() < 1e-12);
            assert!((p.radii[i] - p.radii[i + m]).abs() < 1e-9);
        }
    }

    #[test]
    fn polar_volume_examples() {
        assert!((polar_volume(&constant_profile(2, 720, 1.0)).unwrap() - PI).abs() < 1e-4);
        assert!((polar_volume(&constant_profile(2, 720, 2.0)).unwrap() - PI / 4.0).abs() < 1e-4);
        assert!((polar_volume(&constant_profile(1, 2, 0.5)).unwrap() - 4.0).abs() < 1e-15);
        let ball3 = polar_volume(&constant_profile(3, 2562, 1.0)).unwrap();
        assert!((ball3 - 4.0 * PI / 3.0).abs() / (4.0 * PI / 3.0) < 1e-2);
        let mut bad = constant_profile(2, 16, 1.0);
        bad.radii[3] = 0.0;
        assert!(matches!(polar_volume(&bad), Err(Error::DegenerateProfile)));
    }

    #[test]
    fn square_center_polar_volume_matches_membership_count() {
        let cfg = Config::default();
        let square = ConvexBody::cube(2, 1.0).unwrap();
        let p = directional_profile(&square, &v(&[0.0, 0.0]), &cfg).unwrap();
        let vol = polar_volume(&p).unwrap();
        // E* = {w : w · y <= 1 for y on the sampled boundary of E}, counted on
        // a 2000 × 2000 grid over a box containing it.
        let points: Vec<[f64; 2]> = p.directions.iter().zip(&p.radii).map(|(u, r)| [u[0] * r, u[1] * r]).collect();
        let (m, half) = (2000, 1.05);
        let h = 2.0 * half / m as f64;
        let mut inside = 0usize;
        for i in 0..m {
            let w0 = -half + (i as f64 + 0.5) * h;
            for j in 0..m {
                let w1 = -half + (j as f64 + 0.5) * h;
                if points.iter().all(|q| w0 * q[0] + w1 * q[1] <= 1.0) {
                    inside += 1;
                }
            }
        }
        let count = inside as f64 * h * h;
        assert!((vol - count).abs() / count < 2e-3, "{vol} vs {count}");
    }

    #[test]
    fn density_examples() {
        let cfg = Config::default();
        let disk = ConvexBody::ball(v(&[0.0, 0.0]), 1.0).unwrap();
        assert!((density(&disk, &v(&[0.0, 0.0]), &cfg).unwrap() - 2.0 * PI).abs() < 1e-3);
        let d = density(&disk, &v(&[0.5, 0.0]), &cfg).unwrap();
        assert!((d - 2.0 * PI / 0.75f64.sqrt()).abs() / d < 1e-4);
        let seg = ConvexBody::interval(-1.0, 1.0).unwrap();
        for x in [0.0, 0.5, -0.9] {
            let d = density(&seg, &v(&[x]), &cfg).unwrap();
            assert!((d - 2.0 / (1.0 - x * x).sqrt()).abs() < 1e-12);
        }
        let ball3 = ConvexBody::ball(v(&[0.0, 0.0, 0.0]), 1.0).unwrap();
        let d = density(&ball3, &v(&[0.3, 0.0, 0.2]), &cfg).unwrap();
        let want = 8.0 * PI / (1.0 - 0.13f64).sqrt();
        assert!((d - want).abs() / want < 1e-2, "{d} vs {want}");
    }

    #[test]
    fn square_density_closed_form() {
        // Product structure of the square gives λ = 4 / sqrt((1 - x₁²)(1 - x₂²)).
        let cfg = Config::default();
        let square = ConvexBody::cube(2, 1.0).unwrap();
        for x in [[0.0, 0.0], [0.5, -0.3], [0.8, 0.7]] {
            let d = density(&square, &v(&x), &cfg).unwrap();
            let want = 4.0 / ((1.0 - x[0] * x[0]) * (1.0 - x[1] * x[1])).sqrt();
            assert!((d - want).abs() / want < 1e-4, "{x:?}: {d} vs {want}");
        }
    }
}
