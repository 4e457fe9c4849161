//! Complexified leaves through maximal ellipses.
//!
//! A contained ellipse with center `A`, semi-axis vector `x - A` and tangent
//! `b y` at `x` extends to the holomorphic curve
//!
//! ```text
//! f(ζ) = (x - A) ½(ζ + 1/ζ) + b y (i/2)(ζ - 1/ζ) + A = A + c ζ + c̄ / ζ,
//! c = ½(x - A + i b y).
//! ```
//!
//! The unit circle maps back onto the ellipse, traversed so that
//! `f(e^{iθ})` is the witness point at angle `-θ`. When `b = b*(x, y)` the
//! extremal function is harmonic along the leaf: `V_K(f(ζ)) = log |ζ|`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::body::{ConvexBody, Shape};
use crate::config::Config;
use crate::ellipse::EllipseParam;
use crate::error::{Error, Result};
use crate::extremal::{v_k_ball, v_k_symmetric};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Debug, PartialEq)]
pub struct Leaf {
    pub x: DVector<f64>,
    /// Unit direction.
    pub y: DVector<f64>,
    /// Center `A` of the real ellipse.
    pub center: DVector<f64>,
    pub b: f64,
}

impl Leaf {
    pub fn from_witness(e: &EllipseParam) -> Self {
        Self { x: e.x.clone(), y: e.y.clone(), center: e.center(), b: e.b }
    }

    /// `c = ½(x - A + i b y)`.
    pub fn c(&self) -> Vec<Complex64> {
        self.x
            .iter()
            .zip(&self.center)
            .zip(&self.y)
            .map(|((x, a), y)| 0.5 * Complex64::new(x - a, self.b * y))
            .collect()
    }

    /// `f(ζ)`, meant for `|ζ| >= 1`.
    pub fn eval(&self, zeta: Complex64) -> Vec<Complex64> {
        let cosh = 0.5 * (zeta + 1.0 / zeta);
        let sinh = 0.5 * I * (zeta - 1.0 / zeta);
        (0..self.x.len())
            .map(|j| (self.x[j] - self.center[j]) * cosh + self.b * self.y[j] * sinh + self.center[j])
            .collect()
    }

    /// `A + c ζ + c̄ / ζ`.
    pub fn eval_a_form(&self, zeta: Complex64) -> Vec<Complex64> {
        self.c()
            .iter()
            .zip(&self.center)
            .map(|(c, a)| a + c * zeta + c.conj() / zeta)
            .collect()
    }
}

pub fn leaf_eval(leaf: &Leaf, zeta: Complex64) -> Vec<Complex64> {
    leaf.eval(zeta)
}

/// `V_K` for the bodies where it is computable: balls via Lundin's formula,
/// other origin-symmetric bodies via the polar-dual supremum.
pub struct ExtremalFunction<'a> {
    body: &'a ConvexBody,
    cfg: &'a Config,
    ball: Option<(DVector<f64>, f64)>,
}

impl<'a> ExtremalFunction<'a> {
    pub fn new(body: &'a ConvexBody, cfg: &'a Config) -> Result<Self> {
        if let Shape::Ball { center, radius } = body.shape() {
            return Ok(Self { body, cfg, ball: Some((center.clone(), *radius)) });
        }
        body.require_origin_symmetric(cfg.symmetry_directions, cfg.symmetry_tol)
            .map_err(|_| Error::NotSymmetric)?;
        Ok(Self { body, cfg, ball: None })
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<f64> {
        match &self.ball {
            Some((c, r)) => {
                let w: Vec<Complex64> = z.iter().zip(c.iter()).map(|(z, c)| (z - c) / r).collect();
                Ok(v_k_ball(&w))
            }
            None => v_k_symmetric(self.body, z, self.cfg),
        }
    }
}

/// `max |V_K(f(r e^{iφ})) - log r|` over `radii` and `cfg.harmonic_phases`
/// equally spaced phases.
pub fn check_harmonicity(leaf: &Leaf, k: &ConvexBody, radii: &[f64], cfg: &Config) -> Result<f64> {
    let v = ExtremalFunction::new(k, cfg)?;
    let phases = cfg.harmonic_phases.max(1);
    let mut worst: f64 = 0.0;
    for &r in radii {
        for j in 0..phases {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / phases as f64;
            let z = leaf.eval(Complex64::from_polar(r, phi));
            worst = worst.max((v.eval(&z)? - r.ln()).abs());
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangentLimit {
    /// Extrapolated `lim (f(r) - f(1)) / (r - 1)`.
    pub limit: Vec<Complex64>,
    /// Distance of `limit` from `i b y`.
    pub error: f64,
    /// Norm of the real part of the difference quotient at `r - 1 = 1e-3, 1e-4, 1e-5`.
    pub real_parts: [f64; 3],
}

pub fn check_tangent_limit(leaf: &Leaf) -> TangentLimit {
    let steps = [1e-3, 1e-4, 1e-5];
    let f1 = leaf.eval(Complex64::new(1.0, 0.0));
    let quotient = |h: f64| -> Vec<Complex64> {
        let f = leaf.eval(Complex64::new(1.0 + h, 0.0));
        f.iter().zip(&f1).map(|(a, b)| (a - b) / h).collect()
    };
    let q: Vec<Vec<Complex64>> = steps.iter().map(|&h| quotient(h)).collect();
    let real_parts = [0, 1, 2].map(|i| q[i].iter().map(|c| c.re * c.re).sum::<f64>().sqrt());
    // First-order Richardson through the two smallest steps.
    let ratio = steps[1] / steps[2];
    let limit: Vec<Complex64> =
        q[2].iter().zip(&q[1]).map(|(fine, coarse)| (ratio * fine - coarse) / (ratio - 1.0)).collect();
    let error = limit
        .iter()
        .zip(&leaf.y)
        .map(|(l, y)| (l - I * leaf.b * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    TangentLimit { limit, error, real_parts }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvilinearLimit {
    /// Extrapolated `lim V_K(f(r)) / (b (r - 1))`, expected `1 / b`.
    pub limit: f64,
    /// `(r - 1, |V_K(f(r)) - V_K(x + i b y (r - 1))| / (b (r - 1)))`.
    pub straight_line: Vec<(f64, f64)>,
}

pub fn check_curvilinear_limit(leaf: &Leaf, k: &ConvexBody, cfg: &Config) -> Result<CurvilinearLimit> {
    let v = ExtremalFunction::new(k, cfg)?;
    let steps = [1e-2, 3e-3, 1e-3];
    let mut quotients = Vec::new();
    let mut straight_line = Vec::new();
    for &h in &steps {
        let along_leaf = v.eval(&leaf.eval(Complex64::new(1.0 + h, 0.0)))?;
        let line: Vec<Complex64> =
            leaf.x.iter().zip(&leaf.y).map(|(x, y)| Complex64::new(*x, leaf.b * y * h)).collect();
        let along_line = v.eval(&line)?;
        quotients.push(along_leaf / (leaf.b * h));
        straight_line.push((h, (along_leaf - along_line).abs() / (leaf.b * h)));
    }
    let (h1, h2) = (steps[2], steps[1]);
    let limit = (h2 * quotients[2] - h1 * quotients[1]) / (h2 - h1);
    Ok(CurvilinearLimit { limit, straight_line })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ellipse::bstar;

    fn v(c: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(c)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn witness_leaf(k: &ConvexBody, x: &[f64], y: &[f64]) -> (Leaf, EllipseParam) {
        let w = bstar(k, &v(x), &v(y), &Config::default()).unwrap().witness;
        (Leaf::from_witness(&w), w)
    }

    #[test]
    fn leaf_examples() {
        let disk = ConvexBody::ball(v(&[0.0, 0.0]), 1.0).unwrap();
        let (leaf, w) = witness_leaf(&disk, &[0.0, 0.0], &[1.0, 0.0]);
        assert!(leaf.center.norm() < 1e-15 && (leaf.b - 1.0).abs() < 1e-15);
        let f1 = leaf.eval(c(1.0, 0.0));
        assert!(f1.iter().zip(&leaf.x).all(|(f, x)| (f - x).norm() < 1e-15));
        for r in [1.5, 3.0] {
            let f = leaf.eval(c(r, 0.0));
            assert!((f[0] - c(0.0, (r - 1.0 / r) / 2.0)).norm() < 1e-15 && f[1].norm() < 1e-15);
            assert!((v_k_ball(&f) - f64::ln(r)).abs() < 1e-12);
        }
        for theta in [0.3, 2.0, 4.5] {
            let f = leaf.eval(Complex64::from_polar(1.0, theta));
            let p = w.point(-theta);
            for j in 0..2 {
                assert!((f[j] - c(p[j], 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn forms_agree_and_reflect() {
        let square = ConvexBody::cube(2, 1.0).unwrap();
        let (leaf, _) = witness_leaf(&square, &[0.3, 0.1], &[0.0, 1.0]);
        for zeta in [c(1.2, 0.5), c(-3.0, 0.1), c(0.0, 2.0)] {
            let f = leaf.eval(zeta);
            let g = leaf.eval_a_form(zeta);
            let h = leaf.eval(1.0 / zeta.conj());
            for j in 0..2 {
                assert!((f[j] - g[j]).norm() < 1e-12);
                assert!((h[j] - f[j].conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn harmonicity_examples() {
        let cfg = Config::default();
        let disk = ConvexBody::ball(v(&[0.0, 0.0]), 1.0).unwrap();
        let (leaf, _) = witness_leaf(&disk, &[0.0, 0.0], &[1.0, 0.0]);
        assert!(check_harmonicity(&leaf, &disk, &[1.1, 1.5, 2.0, 5.0], &cfg).unwrap() < 1e-6);
        assert!(check_harmonicity(&leaf, &disk, &[1.0], &cfg).unwrap() < 1e-12);

        let square = ConvexBody::cube(2, 1.0).unwrap();
        let (leaf, _) = witness_leaf(&square, &[0.3, 0.1], &[0.0, 1.0]);
        let dev = check_harmonicity(&leaf, &square, &[1.1, 2.0], &cfg).unwrap();
        assert!(dev < 1e-3, "{dev}");

        let tri = ConvexBody::from_points(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let (leaf, _) = witness_leaf(&tri, &[0.2, 0.2], &[1.0, 0.0]);
        assert!(matches!(check_harmonicity(&leaf, &tri, &[2.0], &cfg), Err(Error::NotSymmetric)));
    }

    #[test]
    fn tangent_limit_examples() {
        let disk = ConvexBody::ball(v(&[0.0, 0.0]), 1.0).unwrap();
        let (leaf, _) = witness_leaf(&disk, &[0.5, 0.0], &[0.0, 1.0]);
        let t = check_tangent_limit(&leaf);
        assert!(t.error < 1e-8, "{t:?}");
        assert!((t.limit[1] - c(0.0, 1.0)).norm() < 1e-8);
        let rate = t.real_parts[0] / t.real_parts[1];
        assert!((rate - 10.0).abs() < 0.1, "{rate}");
    }

    #[test]
    fn curvilinear_limit_examples() {
        let cfg = Config::default();
        let disk = ConvexBody::ball(v(&[0.0, 0.0]), 1.0).unwrap();
        let (leaf, _) = witness_leaf(&disk, &[0.5, 0.0], &[1.0, 0.0]);
        assert!((leaf.b - 0.75f64.sqrt()).abs() < 1e-12);
        let cl = check_curvilinear_limit(&leaf, &disk, &cfg).unwrap();
        assert!((cl.limit - 1.0 / leaf.b).abs() < 1e-3, "{cl:?}");
        let d: Vec<f64> = cl.straight_line.iter().map(|p| p.1).collect();
        assert!(d[0] > d[1] && d[1] > d[2] && d[2] < 1e-2, "{d:?}");
    }
}
