//! Convex bodies in dimensions 1 to 3 and their geometric queries.
//!
//! Every body carries a certified interior point `x0`; gauges are measured
//! relative to it. Polytopes keep both representations: the facets give exact
//! gauges and the vertices exact supports.

mod hull;
pub mod io;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lp;
use crate::sphere;

pub use hull::{affine_rank, facets_from_points, vertices_from_halfspaces};

/// Closed half-space `normal · x <= offset` with unit `normal`.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub normal: DVector<f64>,
    pub offset: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    pub facets: Vec<Halfspace>,
    pub vertices: Vec<DVector<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    HPolytope(Polytope),
    VPolytope(Polytope),
    Ball { center: DVector<f64>, radius: f64 },
    /// `{x : (x - c)ᵀ A (x - c) <= 1}`; `inverse` caches `A⁻¹`.
    Ellipsoid { center: DVector<f64>, matrix: DMatrix<f64>, inverse: DMatrix<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvexBody {
    shape: Shape,
    dim: usize,
    interior: DVector<f64>,
    name: Option<String>,
}

fn check_dim(n: usize) -> Result<()> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidBody(format!("dimension must be 1, 2 or 3, got {n}")))
    }
}

fn finite(v: &DVector<f64>) -> bool {
    v.iter().all(|x| x.is_finite())
}

fn centroid(points: &[DVector<f64>]) -> DVector<f64> {
    let mut c = DVector::zeros(points[0].len());
    for p in points {
        c += p;
    }
    c / points.len() as f64
}

impl ConvexBody {
    /// `{x : normals[i] · x <= offsets[i]}`. Normals are rescaled to unit length.
    pub fn h_polytope(normals: Vec<DVector<f64>>, offsets: Vec<f64>) -> Result<Self> {
        if normals.is_empty() || normals.len() != offsets.len() {
            return Err(Error::InvalidBody("normals and offsets must be non-empty and of equal length".into()));
        }
        let n = normals[0].len();
        check_dim(n)?;
        let mut facets = Vec::with_capacity(normals.len());
        for (normal, offset) in normals.into_iter().zip(offsets) {
            if normal.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: normal.len() });
            }
            let len = normal.norm();
            if !(len > 1e-12) || !finite(&normal) || !offset.is_finite() {
                return Err(Error::InvalidBody("degenerate or non-finite half-space".into()));
            }
            facets.push(Halfspace { normal: normal / len, offset: offset / len });
        }
        let vertices = hull::vertices_from_halfspaces(&facets, n);
        if vertices.len() < n + 1 {
            return Err(Error::InvalidBody("half-spaces do not bound a full-dimensional polytope".into()));
        }
        let x0 = centroid(&vertices);
        // Bounded iff every coordinate direction has a finite maximum.
        let rows: Vec<Vec<f64>> = facets.iter().map(|h| h.normal.iter().copied().collect()).collect();
        let rhs: Vec<f64> = facets.iter().map(|h| (h.offset - h.normal.dot(&x0)).max(0.0)).collect();
        for j in 0..n {
            for sign in [1.0, -1.0] {
                let mut c = vec![0.0; n];
                c[j] = sign;
                if lp::maximize(&c, &rows, &rhs)?.is_err() {
                    return Err(Error::InvalidBody("half-spaces do not bound the polytope".into()));
                }
            }
        }
        let poly = Polytope { facets, vertices };
        Self::finish(Shape::HPolytope(poly), n, x0)
    }

    /// Convex hull of `vertices`; non-extreme points are dropped.
    pub fn v_polytope(vertices: Vec<DVector<f64>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidBody("no vertices".into()));
        }
        let n = vertices[0].len();
        check_dim(n)?;
        for v in &vertices {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
            if !finite(v) {
                return Err(Error::InvalidBody("non-finite vertex".into()));
            }
        }
        if vertices.len() < n + 1 || hull::affine_rank(&vertices, n) < n {
            return Err(Error::InvalidBody(format!("need at least {} affinely independent vertices", n + 1)));
        }
        let facets = hull::facets_from_points(&vertices, n);
        let extreme = hull::vertices_from_halfspaces(&facets, n);
        let x0 = centroid(&extreme);
        Self::finish(Shape::VPolytope(Polytope { facets, vertices: extreme }), n, x0)
    }

    pub fn ball(center: DVector<f64>, radius: f64) -> Result<Self> {
        let n = center.len();
        check_dim(n)?;
        if !(radius > 0.0 && radius.is_finite()) || !finite(&center) {
            return Err(Error::InvalidBody("ball radius must be positive and finite".into()));
        }
        let x0 = center.clone();
        Self::finish(Shape::Ball { center, radius }, n, x0)
    }

    /// `{x : (x - center)ᵀ matrix (x - center) <= 1}` for symmetric positive
    /// definite `matrix`.
    pub fn ellipsoid(center: DVector<f64>, matrix: DMatrix<f64>) -> Result<Self> {
        let n = center.len();
        check_dim(n)?;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: matrix.nrows() });
        }
        if (&matrix - matrix.transpose()).amax() > 1e-12 * matrix.amax().max(1.0) {
            return Err(Error::InvalidBody("ellipsoid matrix must be symmetric".into()));
        }
        let inverse = matrix
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidBody("ellipsoid matrix must be positive definite".into()))?
            .inverse();
        let x0 = center.clone();
        Self::finish(Shape::Ellipsoid { center, matrix, inverse }, n, x0)
    }

    /// Axis-aligned cube `[-half, half]^n` as an H-polytope.
    pub fn cube(n: usize, half: f64) -> Result<Self> {
        let mut normals = Vec::new();
        for j in 0..n {
            for s in [1.0, -1.0] {
                let mut e = DVector::zeros(n);
                e[j] = s;
                normals.push(e);
            }
        }
        Self::h_polytope(normals, vec![half; 2 * n])
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidBody("interval needs lo < hi".into()));
        }
        Self::h_polytope(vec![DVector::from_element(1, 1.0), DVector::from_element(1, -1.0)], vec![hi, -lo])
    }

    pub fn from_points(points: &[&[f64]]) -> Result<Self> {
        Self::v_polytope(points.iter().map(|p| DVector::from_column_slice(p)).collect())
    }

    fn finish(shape: Shape, dim: usize, interior: DVector<f64>) -> Result<Self> {
        let body = Self { shape, dim, interior, name: None };
        if let Some(poly) = body.polytope() {
            let tight = poly
                .facets
                .iter()
                .any(|h| h.normal.dot(&body.interior) >= h.offset - 1e-12 * (1.0 + h.offset.abs()));
            if tight {
                return Err(Error::InvalidBody("polytope has empty interior".into()));
            }
        }
        Ok(body)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// The reference point for gauges.
    pub fn interior_point(&self) -> &DVector<f64> {
        &self.interior
    }

    pub fn polytope(&self) -> Option<&Polytope> {
        match &self.shape {
            Shape::HPolytope(p) | Shape::VPolytope(p) => Some(p),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.shape {
            Shape::HPolytope(_) => "hpolytope",
            Shape::VPolytope(_) => "vpolytope",
            Shape::Ball { .. } => "ball",
            Shape::Ellipsoid { .. } => "ellipsoid",
        }
    }

    pub(crate) fn check_point(&self, z: &DVector<f64>) -> Result<()> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: z.len() });
        }
        Ok(())
    }

    pub fn contains(&self, z: &DVector<f64>) -> Result<bool> {
        self.check_point(z)?;
        Ok(match &self.shape {
            Shape::HPolytope(p) => p.facets.iter().all(|h| h.normal.dot(z) <= h.offset + 1e-12),
            Shape::VPolytope(_) => self.gauge_unchecked(z) <= 1.0 + 1e-12,
            Shape::Ball { center, radius } => (z - center).norm_squared() <= radius * radius,
            Shape::Ellipsoid { center, matrix, .. } => {
                let d = z - center;
                d.dot(&(matrix * &d)) <= 1.0
            }
        })
    }

    /// `h_K(u) = max_{x in K} u · x`.
    pub fn support(&self, u: &DVector<f64>) -> Result<f64> {
        self.check_point(u)?;
        if u.amax() == 0.0 {
            return Err(Error::ZeroDirection);
        }
        Ok(self.support_unchecked(u))
    }

    pub(crate) fn support_unchecked(&self, u: &DVector<f64>) -> f64 {
        match &self.shape {
            Shape::HPolytope(p) | Shape::VPolytope(p) => {
                p.vertices.iter().map(|v| u.dot(v)).fold(f64::NEG_INFINITY, f64::max)
            }
            Shape::Ball { center, radius } => u.dot(center) + radius * u.norm(),
            Shape::Ellipsoid { center, inverse, .. } => u.dot(center) + u.dot(&(inverse * u)).max(0.0).sqrt(),
        }
    }

    /// Minkowski functional relative to the interior point:
    /// `inf {t > 0 : x0 + (z - x0)/t in K}`.
    pub fn gauge(&self, z: &DVector<f64>) -> Result<f64> {
        self.check_point(z)?;
        Ok(self.gauge_unchecked(z))
    }

    pub(crate) fn gauge_unchecked(&self, z: &DVector<f64>) -> f64 {
        match &self.shape {
            Shape::HPolytope(p) | Shape::VPolytope(p) => {
                let mut g: f64 = 0.0;
                for h in &p.facets {
                    let slack = h.offset - h.normal.dot(&self.interior);
                    g = g.max(h.normal.dot(&(z - &self.interior)) / slack);
                }
                g
            }
            Shape::Ball { center, radius } => (z - center).norm() / radius,
            Shape::Ellipsoid { center, matrix, .. } => {
                let d = z - center;
                d.dot(&(matrix * &d)).max(0.0).sqrt()
            }
        }
    }

    /// Gauge of `x0 + t·dir`-style points without building a DVector; used by
    /// hot loops over ellipse samples. `z` must have length `dim`.
    pub(crate) fn gauge_slice(&self, z: &[f64]) -> f64 {
        let x0 = &self.interior;
        match &self.shape {
            Shape::HPolytope(p) | Shape::VPolytope(p) => {
                let mut g: f64 = 0.0;
                for h in &p.facets {
                    let mut num = 0.0;
                    let mut slack = h.offset;
                    for j in 0..self.dim {
                        num += h.normal[j] * (z[j] - x0[j]);
                        slack -= h.normal[j] * x0[j];
                    }
                    g = g.max(num / slack);
                }
                g
            }
            Shape::Ball { center, radius } => {
                let mut s = 0.0;
                for j in 0..self.dim {
                    s += (z[j] - center[j]).powi(2);
                }
                s.sqrt() / radius
            }
            Shape::Ellipsoid { center, matrix, .. } => {
                let mut s = 0.0;
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        s += (z[i] - center[i]) * matrix[(i, j)] * (z[j] - center[j]);
                    }
                }
                s.max(0.0).sqrt()
            }
        }
    }

    /// Distance from the interior point to the boundary along unit `u`.
    pub fn radial(&self, u: &DVector<f64>) -> Result<f64> {
        self.check_point(u)?;
        let len = u.norm();
        if len == 0.0 {
            return Err(Error::ZeroDirection);
        }
        let g = self.gauge_unchecked(&(&self.interior + u / len));
        Ok(1.0 / g)
    }

    /// Whether `support(u) = support(-u)` on a sample of directions.
    pub fn is_symmetric(&self, directions: usize, tol: f64) -> bool {
        sphere::directions(self.dim, directions.max(8)).iter().all(|u| {
            let a = self.support_unchecked(u);
            let b = self.support_unchecked(&-u);
            (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
        })
    }

    pub(crate) fn require_origin_symmetric(&self, directions: usize, tol: f64) -> Result<()> {
        let origin = DVector::zeros(self.dim);
        if self.gauge_unchecked(&origin) >= 1.0 - 1e-9 {
            return Err(Error::NotOriginCentered);
        }
        if !self.is_symmetric(directions, tol) {
            return Err(Error::NotSymmetric);
        }
        Ok(())
    }

    /// Polar body `K* = {w : x · w <= 1 for all x in K}` of an origin-symmetric body.
    pub fn polar(&self) -> Result<Self> {
        self.require_origin_symmetric(64, 1e-9)?;
        let n = self.dim;
        match &self.shape {
            Shape::HPolytope(p) => {
                Self::v_polytope(p.facets.iter().map(|h| &h.normal / h.offset).collect())
            }
            Shape::VPolytope(p) => {
                let normals = p.vertices.clone();
                let offsets = vec![1.0; normals.len()];
                Self::h_polytope(normals, offsets)
            }
            Shape::Ball { radius, .. } => Self::ball(DVector::zeros(n), 1.0 / radius),
            Shape::Ellipsoid { inverse, .. } => {
                Self::ellipsoid(DVector::zeros(n), (inverse + inverse.transpose()) * 0.5)
            }
        }
    }

    /// Image under `z ↦ center + factor·(z - center)`.
    pub fn dilate(&self, center: &DVector<f64>, factor: f64) -> Result<Self> {
        self.check_point(center)?;
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::NonPositiveFactor(factor));
        }
        let map = |z: &DVector<f64>| center + (z - center) * factor;
        let shape = match &self.shape {
            Shape::HPolytope(p) | Shape::VPolytope(p) => {
                let facets = p
                    .facets
                    .iter()
                    .map(|h| Halfspace {
                        normal: h.normal.clone(),
                        offset: factor * h.offset + (1.0 - factor) * h.normal.dot(center),
                    })
                    .collect();
                let poly = Polytope { facets, vertices: p.vertices.iter().map(map).collect() };
                if matches!(self.shape, Shape::HPolytope(_)) {
                    Shape::HPolytope(poly)
                } else {
                    Shape::VPolytope(poly)
                }
            }
            Shape::Ball { center: c, radius } => Shape::Ball { center: map(c), radius: radius * factor },
            Shape::Ellipsoid { center: c, matrix, inverse } => Shape::Ellipsoid {
                center: map(c),
                matrix: matrix / (factor * factor),
                inverse: inverse * (factor * factor),
            },
        };
        Ok(Self { shape, dim: self.dim, interior: map(&self.interior), name: self.name.clone() })
    }

    /// Sup-metric of support functions over `directions` sample directions,
    /// which is the Hausdorff distance for convex bodies.
    pub fn hausdorff_distance(&self, other: &Self, directions: usize) -> Result<f64> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        Ok(sphere::directions(self.dim, directions)
            .iter()
            .map(|u| (self.support_unchecked(u) - other.support_unchecked(u)).abs())
            .fold(0.0, f64::max))
    }

    /// Default direction count for Hausdorff sweeps.
    pub fn default_hausdorff_directions(&self) -> usize {
        match self.dim {
            1 => 2,
            2 => 720,
            _ => 2562,
        }
    }

    pub fn diameter(&self) -> f64 {
        match &self.shape {
            Shape::HPolytope(p) | Shape::VPolytope(p) => {
                let mut d: f64 = 0.0;
                for (i, a) in p.vertices.iter().enumerate() {
                    for b in &p.vertices[i + 1..] {
                        d = d.max((a - b).norm());
                    }
                }
                d
            }
            Shape::Ball { radius, .. } => 2.0 * radius,
            Shape::Ellipsoid { matrix, .. } => {
                let min_eig = matrix.clone().symmetric_eigenvalues().min();
                2.0 / min_eig.sqrt()
            }
        }
    }

    /// Per-axis `(lo, hi)` extents.
    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        (0..self.dim)
            .map(|j| {
                let mut e = DVector::zeros(self.dim);
                e[j] = 1.0;
                (-self.support_unchecked(&-&e), self.support_unchecked(&e))
            })
            .collect()
    }
}
