//! Inscribed ellipses through a point with a prescribed tangent, and the
//! largest tangent scale `b*(x, y)` such an ellipse can have inside a body.
//!
//! An ellipse is `r(θ) = a cos θ + b y sin θ + (x - a)`: it passes through `x`
//! at `θ = 0` with velocity `b y`, and is centered at `x - a`.
//!
//! Two solvers compute `b*`:
//!
//! * [`Solver::Exact`]. The ellipse lies in the half-space `n · z <= h` iff
//!   `n · (x - a) + sqrt((n · a)² + b² (n · y)²) <= h`. With `s = h - n · x`
//!   and `β = b²` this squares to the linear constraint
//!   `β (n · y)² - 2 s (n · a) <= s²`. A polytope therefore gives a linear
//!   program in `(a, β)`. For an ellipsoid the same family of constraints
//!   over all normals collapses to a closed form.
//! * [`Solver::Bisection`]. Bisection on `b`. Each step asks whether some
//!   center offset keeps the ellipse inside, by minimizing the convex
//!   function `φ(a) = max_θ gauge(r(θ)) - 1` with Nelder-Mead. Needs nothing
//!   but the gauge.

use nalgebra::DVector;

use crate::body::{ConvexBody, Shape};
use crate::config::{Config, Solver};
use crate::error::{Error, Result};
use crate::lp;
use crate::nelder_mead::NelderMead;
use crate::sphere;

use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub struct EllipseParam {
    pub x: DVector<f64>,
    /// Unit tangent direction at `x`.
    pub y: DVector<f64>,
    pub a: DVector<f64>,
    pub b: f64,
}

impl EllipseParam {
    /// Builds the ellipse, rescaling `y` to unit length and `b` accordingly so
    /// the curve itself is unchanged.
    pub fn new(x: DVector<f64>, y: DVector<f64>, a: DVector<f64>, b: f64) -> Result<Self> {
        let n = x.len();
        for v in [&y, &a] {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
        }
        let len = y.norm();
        if len == 0.0 {
            return Err(Error::ZeroDirection);
        }
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Error::InvalidArgument(format!("ellipse scale must be non-negative, got {b}")));
        }
        Ok(Self { x, y: y / len, a, b: b * len })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn point(&self, theta: f64) -> DVector<f64> {
        let (s, c) = theta.sin_cos();
        &self.x - &self.a + &self.a * c + &self.y * (self.b * s)
    }

    fn point_into(&self, cos: f64, sin: f64, out: &mut [f64; 3]) {
        for j in 0..self.dim() {
            out[j] = self.x[j] - self.a[j] + self.a[j] * cos + self.y[j] * (self.b * sin);
        }
    }

    pub fn center(&self) -> DVector<f64> {
        &self.x - &self.a
    }

    /// True when the curve is a segment: `a` vanishes or is parallel to `y`.
    pub fn is_degenerate(&self) -> bool {
        let an = self.a.norm();
        if an < 1e-12 || self.b == 0.0 {
            return true;
        }
        let cos = self.a.dot(&self.y) / an;
        1.0 - cos.abs() < 1e-12
    }

    pub fn translated(&self, v: &DVector<f64>) -> Self {
        Self { x: &self.x + v, ..self.clone() }
    }
}

pub fn ellipse_point(e: &EllipseParam, theta: f64) -> DVector<f64> {
    e.point(theta)
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Result of scanning an ellipse against a body.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Containment {
    pub contained: bool,
    /// `max_θ gauge(r(θ)) - 1`.
    pub worst_violation: f64,
    pub worst_theta: f64,
}

/// Grid scan of `gauge(r(θ))` with golden-section refinement of the largest
/// local maxima.
struct Scan {
    cos: Vec<f64>,
    sin: Vec<f64>,
    refine_tol: f64,
    refine_count: usize,
}

impl Scan {
    fn new(grid: usize, refine_tol: f64, refine_count: usize) -> Self {
        let (sin, cos) = (0..grid).map(|k| (2.0 * PI * k as f64 / grid as f64).sin_cos()).unzip();
        Self { cos, sin, refine_tol, refine_count }
    }

    fn gauge_at(e: &EllipseParam, k: &ConvexBody, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let mut buf = [0.0; 3];
        e.point_into(c, s, &mut buf);
        k.gauge_slice(&buf)
    }

    /// Returns `(max gauge, argmax θ)`.
    fn max_gauge(&self, e: &EllipseParam, k: &ConvexBody) -> (f64, f64) {
        let n = self.cos.len();
        let mut buf = [0.0; 3];
        let values: Vec<f64> = (0..n)
            .map(|i| {
                e.point_into(self.cos[i], self.sin[i], &mut buf);
                k.gauge_slice(&buf)
            })
            .collect();
        let mut peaks: Vec<usize> = (0..n)
            .filter(|&i| values[i] >= values[(i + n - 1) % n] && values[i] >= values[(i + 1) % n])
            .collect();
        peaks.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
        peaks.truncate(self.refine_count.max(1));

        let h = 2.0 * PI / n as f64;
        let mut best = (values[peaks[0]], h * peaks[0] as f64);
        for &i in &peaks {
            let t = h * i as f64;
            let (theta, g) = golden_max(|th| Self::gauge_at(e, k, th), t - h, t + h, self.refine_tol);
            if g > best.0 {
                best = (g, theta.rem_euclid(2.0 * PI));
            }
        }
        best
    }
}

/// Tests `r(θ) ∈ K` for all θ, up to `cfg.containment_tol` in gauge.
pub fn ellipse_contained(e: &EllipseParam, k: &ConvexBody, cfg: &Config) -> Result<Containment> {
    k.check_point(&e.x)?;
    let scan = Scan::new(cfg.theta_grid, cfg.theta_refine_tol, 3);
    let (g, theta) = scan.max_gauge(e, k);
    let violation = g - 1.0;
    Ok(Containment { contained: violation <= cfg.containment_tol, worst_violation: violation, worst_theta: theta })
}

fn unit_direction(k: &ConvexBody, y: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    k.check_point(y)?;
    let len = y.norm();
    if len == 0.0 || !len.is_finite() {
        return Err(Error::ZeroDirection);
    }
    Ok((y / len, len))
}

fn require_interior(k: &ConvexBody, x: &DVector<f64>, cfg: &Config) -> Result<()> {
    k.check_point(x)?;
    let g = k.gauge_unchecked(x);
    if !(g < 1.0 - cfg.interior_tol) {
        return Err(Error::XNotInterior { gauge: g });
    }
    Ok(())
}

/// Minimizes `φ(a)` from several starts; stops as soon as `φ <= tol`.
fn center_search(
    k: &ConvexBody,
    x: &DVector<f64>,
    y: &DVector<f64>,
    b: f64,
    cfg: &Config,
    warm: Option<&DVector<f64>>,
) -> (DVector<f64>, f64) {
    let n = k.dim();
    let scan = Scan::new(cfg.theta_grid, cfg.theta_refine_tol, 1);
    let phi = |a: &[f64]| {
        let e = EllipseParam { x: x.clone(), y: y.clone(), a: DVector::from_column_slice(a), b };
        scan.max_gauge(&e, k).0 - 1.0
    };

    let mut starts: Vec<DVector<f64>> = Vec::new();
    if let Some(w) = warm {
        starts.push(w.clone());
    }
    let to_center = x - k.interior_point();
    starts.push(to_center.clone());
    starts.push(DVector::zeros(n));
    starts.push(&to_center * 0.5);

    let mut best: Option<(DVector<f64>, f64)> = None;
    for s in &starts {
        let v = phi(s.as_slice());
        if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            best = Some((s.clone(), v));
        }
    }
    let (start, start_value) = best.expect("at least one start");
    if start_value <= cfg.containment_tol {
        return (start, start_value);
    }

    let solver = NelderMead {
        max_iter: cfg.nm_max_iter,
        diameter_tol: cfg.nm_diameter_tol,
        target: Some(cfg.containment_tol),
        restarts: cfg.nm_restarts,
    };
    let step = 0.25 * k.diameter().max(b);
    let m = solver.minimize(phi, start.as_slice(), step);
    (DVector::from_vec(m.point), m.value)
}

/// A center offset `a` with the ellipse of scale `b` inside `k`, if one exists.
pub fn feasible_center(
    k: &ConvexBody,
    x: &DVector<f64>,
    y: &DVector<f64>,
    b: f64,
    cfg: &Config,
) -> Result<Option<DVector<f64>>> {
    require_interior(k, x, cfg)?;
    let (y, len) = unit_direction(k, y)?;
    let (a, value) = center_search(k, x, &y, b * len, cfg, None);
    Ok((value <= cfg.containment_tol).then_some(a))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BStarResult {
    /// `b*(x, y)` for the direction as given, so `b*(x, t y) = b*(x, y) / t`.
    pub bstar: f64,
    /// Maximal ellipse, with unit tangent direction.
    pub witness: EllipseParam,
    pub iterations: usize,
    /// Largest constraint violation of the witness (gauge excess for
    /// bisection, scaled LP residual for the exact solver).
    pub feasibility_residual: f64,
}

/// Supremum of `b` over ellipses through `x` with tangent `b y` inside `k`.
pub fn bstar(k: &ConvexBody, x: &DVector<f64>, y: &DVector<f64>, cfg: &Config) -> Result<BStarResult> {
    let (unit, len) = unit_direction(k, y)?;
    require_interior(k, x, cfg)?;
    let mut res = match cfg.solver {
        Solver::Exact => bstar_exact(k, x, &unit)?,
        Solver::Bisection => bstar_bisection(k, x, &unit, cfg)?,
    };
    res.bstar /= len;
    Ok(res)
}

fn bstar_exact(k: &ConvexBody, x: &DVector<f64>, y: &DVector<f64>) -> Result<BStarResult> {
    let n = k.dim();
    match k.shape() {
        Shape::Ball { center, radius } => {
            let r2 = radius * radius;
            Ok(ellipsoid_bstar(x, y, center, |u, v| u.dot(v) / r2))
        }
        Shape::Ellipsoid { center, matrix, .. } => Ok(ellipsoid_bstar(x, y, center, |u, v| u.dot(&(matrix * v)))),
        Shape::HPolytope(p) | Shape::VPolytope(p) => {
            let mut rows = Vec::with_capacity(p.facets.len());
            let mut rhs = Vec::with_capacity(p.facets.len());
            for h in &p.facets {
                let s = h.offset - h.normal.dot(x);
                let ny = h.normal.dot(y);
                // Row scaled by 1/s: -2 n·a + β (n·y)²/s <= s.
                let mut row: Vec<f64> = h.normal.iter().map(|c| -2.0 * c).collect();
                row.push(ny * ny / s);
                rows.push(row);
                rhs.push(s);
            }
            let mut objective = vec![0.0; n + 1];
            objective[n] = 1.0;
            let sol = lp::maximize(&objective, &rows, &rhs)?
                .map_err(|_| Error::Solver("inscribed-ellipse program is unbounded".into()))?;
            let beta = sol.z[n];
            if !(beta > 0.0) {
                return Err(Error::Solver(format!("non-positive optimal b² = {beta}")));
            }
            let a = DVector::from_column_slice(&sol.z[..n]);
            let residual = rows
                .iter()
                .zip(&rhs)
                .map(|(row, s)| (row.iter().zip(&sol.z).map(|(r, z)| r * z).sum::<f64>() - s) / s)
                .fold(f64::NEG_INFINITY, f64::max)
                .max(0.0);
            let b = beta.sqrt();
            Ok(BStarResult {
                bstar: b,
                witness: EllipseParam { x: x.clone(), y: y.clone(), a, b },
                iterations: 1,
                feasibility_residual: residual,
            })
        }
    }
}

/// Closed form for `{z : (z - c)ᵀ A (z - c) <= 1}`, with `form(u, v) = uᵀ A v`.
///
/// The maximal ellipse is centered at `c`; with `p = x - c` the largest
/// admissible `b²` is `(1 - pᵀAp) / (yᵀAy (1 - pᵀAp) + (pᵀAy)²)`.
fn ellipsoid_bstar(
    x: &DVector<f64>,
    y: &DVector<f64>,
    center: &DVector<f64>,
    form: impl Fn(&DVector<f64>, &DVector<f64>) -> f64,
) -> BStarResult {
    let p = x - center;
    let pp = form(&p, &p);
    let yy = form(y, y);
    let py = form(&p, y);
    let beta = (1.0 - pp) / (yy * (1.0 - pp) + py * py);
    let b = beta.sqrt();
    BStarResult {
        bstar: b,
        witness: EllipseParam { x: x.clone(), y: y.clone(), a: p, b },
        iterations: 1,
        feasibility_residual: 0.0,
    }
}

fn bstar_bisection(k: &ConvexBody, x: &DVector<f64>, y: &DVector<f64>, cfg: &Config) -> Result<BStarResult> {
    let mut iterations = 0;
    let mut probe = |b: f64, warm: Option<&DVector<f64>>| {
        iterations += 1;
        let (a, v) = center_search(k, x, y, b, cfg, warm);
        (v <= cfg.containment_tol, a, v)
    };

    let mut b = 0.1 * k.diameter();
    let (ok, a, v) = probe(b, None);
    let (mut lo, mut hi, mut witness_a, mut witness_v);
    if ok {
        (lo, witness_a, witness_v) = (b, a, v);
        loop {
            b *= 2.0;
            let (ok, a, v) = probe(b, Some(&witness_a));
            if !ok {
                hi = b;
                break;
            }
            (lo, witness_a, witness_v) = (b, a, v);
            if b > 1e6 * k.diameter() {
                return Err(Error::Solver("no infeasible scale found while bracketing".into()));
            }
        }
    } else {
        hi = b;
        loop {
            b *= 0.5;
            let (ok, a, v) = probe(b, None);
            if ok {
                (lo, witness_a, witness_v) = (b, a, v);
                break;
            }
            hi = b;
            if b < 1e-12 * k.diameter() {
                return Err(Error::Solver("no feasible scale found while bracketing".into()));
            }
        }
    }

    while hi - lo > cfg.bisection_tol * lo {
        let mid = 0.5 * (lo + hi);
        let (ok, a, v) = probe(mid, Some(&witness_a));
        if ok {
            (lo, witness_a, witness_v) = (mid, a, v);
        } else {
            hi = mid;
        }
    }

    Ok(BStarResult {
        bstar: lo,
        witness: EllipseParam { x: x.clone(), y: y.clone(), a: witness_a, b: lo },
        iterations,
        feasibility_residual: witness_v,
    })
}

/// `b*(x, y) = inf {sqrt(1 - (x·w)²) / |y·w| : w ∈ K*}` for origin-symmetric `k`.
///
/// Polytopes are evaluated at the vertices of the polar; balls and ellipsoids
/// on a fine grid of the polar's boundary with local refinement.
pub fn bstar_symmetric(k: &ConvexBody, x: &DVector<f64>, y: &DVector<f64>, cfg: &Config) -> Result<f64> {
    k.check_point(y)?;
    if y.norm() == 0.0 {
        return Err(Error::ZeroDirection);
    }
    k.require_origin_symmetric(cfg.symmetry_directions, cfg.symmetry_tol)?;
    require_interior(k, x, cfg)?;

    let ratio = |w: &DVector<f64>| {
        let yw = y.dot(w).abs();
        if yw < 1e-300 {
            f64::INFINITY
        } else {
            (1.0 - x.dot(w).powi(2)).max(0.0).sqrt() / yw
        }
    };

    match k.shape() {
        Shape::HPolytope(_) | Shape::VPolytope(_) => {
            let polar = k.polar()?;
            let verts = &polar.polytope().expect("polar of a polytope is a polytope").vertices;
            Ok(verts.iter().map(ratio).fold(f64::INFINITY, f64::min))
        }
        Shape::Ball { .. } | Shape::Ellipsoid { .. } => {
            // ∂K* = {L ω : |ω| = 1} with L the Cholesky factor of the
            // polar's matrix inverse, i.e. of A itself.
            let n = k.dim();
            let chol = match k.shape() {
                Shape::Ball { radius, .. } => nalgebra::DMatrix::identity(n, n) / *radius,
                Shape::Ellipsoid { matrix, .. } => matrix.clone().cholesky().expect("validated at construction").l(),
                _ => unreachable!(),
            };
            let f = |omega: &DVector<f64>| ratio(&(&chol * omega));
            Ok(minimize_on_sphere(n, &f, cfg.symmetric_grid_2d, cfg.symmetric_grid_3d, cfg.theta_refine_tol))
        }
    }
}

/// Minimum of `f` over the unit sphere: grid scan plus local refinement of
/// the best few grid points.
pub(crate) fn minimize_on_sphere(
    n: usize,
    f: &impl Fn(&DVector<f64>) -> f64,
    grid_2d: usize,
    grid_3d: usize,
    tol: f64,
) -> f64 {
    match n {
        1 => f(&DVector::from_element(1, 1.0)).min(f(&DVector::from_element(1, -1.0))),
        2 => {
            let g = |t: f64| f(&DVector::from_vec(vec![t.cos(), t.sin()]));
            let h = 2.0 * PI / grid_2d as f64;
            let values: Vec<f64> = (0..grid_2d).map(|i| g(h * i as f64)).collect();
            let mut order: Vec<usize> = (0..grid_2d)
                .filter(|&i| values[i] <= values[(i + grid_2d - 1) % grid_2d] && values[i] <= values[(i + 1) % grid_2d])
                .collect();
            order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
            let mut best = values.iter().copied().fold(f64::INFINITY, f64::min);
            for &i in order.iter().take(4) {
                let t = h * i as f64;
                let (_, v) = golden_max(|s| -g(s), t - h, t + h, tol);
                best = best.min(-v);
            }
            best
        }
        _ => {
            let pts = sphere::fibonacci(grid_3d);
            let values: Vec<f64> = pts.iter().map(f).collect();
            let mut order: Vec<usize> = (0..pts.len()).collect();
            order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
            let spacing = (4.0 * PI / grid_3d as f64).sqrt();
            let solver = NelderMead { max_iter: 500, diameter_tol: tol, target: None, restarts: 1 };
            let mut best = values[order[0]];
            for &i in order.iter().take(4) {
                let p = &pts[i];
                let theta0 = p[2].clamp(-1.0, 1.0).acos();
                let phi0 = p[1].atan2(p[0]);
                let g = |q: &[f64]| {
                    let (st, ct) = q[0].sin_cos();
                    let (sp, cp) = q[1].sin_cos();
                    f(&DVector::from_vec(vec![st * cp, st * sp, ct]))
                };
                let m = solver.minimize(g, &[theta0, phi0], spacing);
                best = best.min(m.value);
            }
            best
        }
    }
}

/// Whether no small translate of `e` fits strictly inside `k`, the
/// characterization of a maximal-area ellipse in its orientation class.
pub fn check_a_maximal(e: &EllipseParam, k: &ConvexBody, cfg: &Config) -> Result<bool> {
    let c = ellipse_contained(e, k, cfg)?;
    if c.worst_violation > cfg.containment_tol.max(1e-8) {
        return Err(Error::EllipseNotContained(c.worst_violation));
    }
    let n = k.dim();
    let count = if n == 2 { cfg.a_maximal_directions_2d } else { cfg.a_maximal_directions_3d };
    let scan = Scan::new(cfg.theta_grid, cfg.theta_refine_tol, 3);
    let margin = cfg.containment_tol;
    for v in sphere::directions(n, count) {
        for s in [1e-2, 1e-3, 1e-4] {
            let moved = e.translated(&(&v * s));
            if scan.max_gauge(&moved, k).0 < 1.0 - margin {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
