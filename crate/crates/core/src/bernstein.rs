//! Empirical check of the pointwise Bernstein-Markov inequality
//! `(1/deg p) |D_y p(x)| / sqrt(1 - p(x)²) <= δ_B(x, y)` for `‖p‖_K <= 1`.

use std::collections::BTreeMap;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::body::ConvexBody;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::extremal::delta_b;
use crate::sphere;

/// Real polynomial in `dim` variables as a list of monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl Polynomial {
    pub fn new(dim: usize, terms: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        for (alpha, c) in &terms {
            if alpha.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: alpha.len() });
            }
            if !c.is_finite() {
                return Err(Error::InvalidArgument("polynomial coefficients must be finite".into()));
            }
        }
        Ok(Self { dim, terms })
    }

    /// `c + Σ a_j z_j`.
    pub fn linear(a: &[f64], c: f64) -> Self {
        let dim = a.len();
        let mut terms = vec![(vec![0; dim], c)];
        for (j, &aj) in a.iter().enumerate() {
            let mut alpha = vec![0; dim];
            alpha[j] = 1;
            terms.push((alpha, aj));
        }
        Self { dim, terms }
    }

    /// Every monomial of total degree at most `degree`, coefficients uniform
    /// on `[-1, 1]`.
    pub fn random(dim: usize, degree: u32, rng: &mut impl Rng) -> Self {
        let terms = multi_indices(dim, degree).into_iter().map(|alpha| (alpha, rng.gen_range(-1.0..=1.0))).collect();
        Self { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Vec<u32>, f64)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(alpha, _)| alpha.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(alpha, c)| c * alpha.iter().zip(z).map(|(&k, x)| x.powi(k as i32)).product::<f64>())
            .sum()
    }

    /// `D_y p(x) = Σ_j y_j ∂p/∂z_j (x)`, term by term.
    pub fn directional_derivative(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut total = 0.0;
        for (alpha, c) in &self.terms {
            for j in 0..self.dim {
                if alpha[j] == 0 || y[j] == 0.0 {
                    continue;
                }
                let mut term = c * alpha[j] as f64 * y[j];
                for (i, (&k, xi)) in alpha.iter().zip(x).enumerate() {
                    let e = if i == j { k - 1 } else { k };
                    term *= xi.powi(e as i32);
                }
                total += term;
            }
        }
        total
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { dim: self.dim, terms: self.terms.iter().map(|(a, c)| (a.clone(), c * factor)).collect() }
    }

    /// `q(z) = p(center + (z - center) / factor)`, so that `q` on
    /// `dilate(K, center, factor)` takes the values of `p` on `K`.
    pub fn dilated(&self, center: &[f64], factor: f64) -> Self {
        let shift: Vec<f64> = center.iter().map(|c| (1.0 - 1.0 / factor) * c).collect();
        let mut acc: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (alpha, c) in &self.terms {
            // Π_j (shift_j + z_j / factor)^{α_j}, expanded binomially.
            let mut partial: Vec<(Vec<u32>, f64)> = vec![(vec![0; self.dim], *c)];
            for j in 0..self.dim {
                let mut next = Vec::new();
                for (beta, coef) in &partial {
                    for k in 0..=alpha[j] {
                        let mut b = beta.clone();
                        b[j] = k;
                        let w = binomial(alpha[j], k)
                            * factor.powi(-(k as i32))
                            * shift[j].powi((alpha[j] - k) as i32);
                        next.push((b, coef * w));
                    }
                }
                partial = next;
            }
            for (beta, coef) in partial {
                *acc.entry(beta).or_insert(0.0) += coef;
            }
        }
        Self { dim: self.dim, terms: acc.into_iter().collect() }
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn multi_indices(dim: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                let used: u32 = prefix.iter().sum();
                (0..=degree - used).map(move |k| {
                    let mut p = prefix.clone();
                    p.push(k);
                    p
                })
            })
            .collect();
    }
    out
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

/// Lower bound for `‖p‖_K = max_K |p|`: a Halton sample of `K` plus the
/// vertices of polytopes, then a compass search from the best ten points.
pub fn sup_norm_estimate(p: &Polynomial, k: &ConvexBody, samples: usize) -> f64 {
    let n = k.dim();
    let bbox = k.bounding_box();
    let mut candidates: Vec<DVector<f64>> = Vec::with_capacity(samples + 8);
    let mut i = 1;
    while candidates.len() < samples && i < 50 * samples {
        let z = DVector::from_fn(n, |j, _| {
            let (lo, hi) = bbox[j];
            lo + (hi - lo) * radical_inverse(i, [2, 3, 5][j])
        });
        if k.gauge_unchecked(&z) <= 1.0 {
            candidates.push(z);
        }
        i += 1;
    }
    if let Some(poly) = k.polytope() {
        candidates.extend(poly.vertices.iter().cloned());
    }
    let value = |z: &DVector<f64>| p.eval(z.as_slice()).abs();
    let mut scored: Vec<(f64, usize)> = candidates.iter().enumerate().map(|(i, z)| (value(z), i)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = scored.first().map_or(0.0, |s| s.0);

    let mut moves: Vec<DVector<f64>> = sphere::directions(n, 2 * n.max(2) * 2);
    for j in 0..n {
        let mut e = DVector::zeros(n);
        e[j] = 1.0;
        moves.push(-&e);
        moves.push(e);
    }
    let x0 = k.interior_point();
    let into_body = |z: DVector<f64>| -> DVector<f64> {
        let g = k.gauge_unchecked(&z);
        if g <= 1.0 {
            z
        } else {
            x0 + (z - x0) / g
        }
    };
    for &(v0, idx) in scored.iter().take(10) {
        let mut z = candidates[idx].clone();
        let mut v = v0;
        let mut step = 0.05 * k.diameter();
        while step > 1e-9 {
            let mut improved = false;
            for m in &moves {
                let trial = into_body(&z + m * step);
                let tv = value(&trial);
                if tv > v {
                    (z, v, improved) = (trial, tv, true);
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.max(v);
    }
    best
}

/// `(1/deg p) |D_y p(x)| / sqrt(1 - p(x)²)`.
pub fn bm_ratio(p: &Polynomial, x: &DVector<f64>, y: &DVector<f64>, k: &ConvexBody) -> Result<f64> {
    let n = k.dim();
    for len in [p.dim(), x.len(), y.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, got: len });
        }
    }
    if y.norm() == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let deg = p.degree();
    if deg == 0 {
        return Err(Error::InvalidArgument("ratio needs a polynomial of degree at least 1".into()));
    }
    let px = p.eval(x.as_slice());
    let room = 1.0 - px * px;
    if room < 1e-12 {
        return Err(Error::PAtUnitValue);
    }
    Ok(p.directional_derivative(x.as_slice(), y.as_slice()).abs() / (deg as f64 * room.sqrt()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BmTrial {
    pub trial: usize,
    pub degree: u32,
    pub x: DVector<f64>,
    pub y: DVector<f64>,
    pub ratio: f64,
    pub delta_b: f64,
    /// `(1 + ε) δ_B - ratio`; negative means a violation.
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BmReport {
    pub epsilon: f64,
    pub trials: Vec<BmTrial>,
}

impl BmReport {
    pub fn violations(&self) -> usize {
        self.trials.iter().filter(|t| t.slack < 0.0).count()
    }

    /// `max ratio / δ_B` over the trials.
    pub fn tightness(&self) -> f64 {
        self.trials.iter().map(|t| t.ratio / t.delta_b).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let n = self.trials.first().map_or(0, |t| t.x.len());
        let mut header = vec!["trial".to_string(), "degree".to_string()];
        header.extend((1..=n).map(|j| format!("x{j}")));
        header.extend((1..=n).map(|j| format!("y{j}")));
        header.extend(["ratio", "delta_b", "slack"].map(String::from));
        let mut out = header.join(",") + "\n";
        for t in &self.trials {
            let mut row = vec![t.trial.to_string(), t.degree.to_string()];
            row.extend(t.x.iter().chain(t.y.iter()).map(|v| v.to_string()));
            row.extend([t.ratio, t.delta_b, t.slack].map(|v| v.to_string()));
            out += &(row.join(",") + "\n");
        }
        out += &format!(
            "# trials={} violations={} tightness={} epsilon={} (sup norms are sampled lower bounds)\n",
            self.trials.len(),
            self.violations(),
            self.tightness(),
            self.epsilon
        );
        out
    }
}

const CLEARANCE: f64 = 0.05;

fn sample_interior(k: &ConvexBody, rng: &mut impl Rng) -> DVector<f64> {
    let bbox = k.bounding_box();
    loop {
        let z = DVector::from_fn(k.dim(), |j, _| rng.gen_range(bbox[j].0..bbox[j].1));
        if k.gauge_unchecked(&z) <= 1.0 - CLEARANCE {
            return z;
        }
    }
}

fn sample_direction(n: usize, rng: &mut impl Rng) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..=1.0));
        let len = v.norm();
        if len > 1e-3 && len <= 1.0 {
            return v / len;
        }
    }
}

fn run_trial(k: &ConvexBody, trial: usize, max_degree: u32, seed: u64, cfg: &Config) -> Result<BmTrial> {
    let n = k.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
    let degree = rng.gen_range(1..=max_degree);
    let raw = Polynomial::random(n, degree, &mut rng);
    let sup = sup_norm_estimate(&raw, k, cfg.sup_samples);
    let p = if sup > 0.0 { raw.scaled(1.0 / sup) } else { raw };
    let y = sample_direction(n, &mut rng);
    for _ in 0..100 {
        let x = sample_interior(k, &mut rng);
        match bm_ratio(&p, &x, &y, k) {
            Ok(ratio) => {
                let d = delta_b(k, &x, &y, cfg)?;
                let slack = (1.0 + cfg.bm_slack) * d - ratio;
                return Ok(BmTrial { trial, degree: p.degree(), x, y, ratio, delta_b: d, slack });
            }
            Err(Error::PAtUnitValue) | Err(Error::InvalidArgument(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Solver(format!("trial {trial}: no admissible point found")))
}

/// Random trials of the inequality. Trial `i` draws from seed `seed + i`, so
/// the report does not depend on scheduling.
pub fn validate_bm_bound(k: &ConvexBody, trials: usize, max_degree: u32, seed: u64, cfg: &Config) -> Result<BmReport> {
    if max_degree == 0 {
        return Err(Error::InvalidArgument("max_degree must be at least 1".into()));
    }
    let rows = (0..trials).into_par_iter().map(|t| run_trial(k, t, max_degree, seed, cfg)).collect::<Result<_>>()?;
    Ok(BmReport { epsilon: cfg.bm_slack, trials: rows })
}

/// `max_w ratio(p_w) / δ_B(x, y)` over the strip polynomials
/// `p_w(z) = (2 w·z - h(w) + h(-w)) / (h(w) + h(-w))`, which map `K` onto
/// `[-1, 1]` exactly. Close to 1 on symmetric bodies.
pub fn linear_tightness(k: &ConvexBody, x: &DVector<f64>, y: &DVector<f64>, cfg: &Config) -> Result<f64> {
    let n = k.dim();
    let d = delta_b(k, x, y, cfg)?;
    let mut best: f64 = 0.0;
    for w in sphere::directions(n, cfg.profile_directions(n)) {
        let (hp, hm) = (k.support_unchecked(&w), k.support_unchecked(&-&w));
        let width = hp + hm;
        let coeffs: Vec<f64> = w.iter().map(|c| 2.0 * c / width).collect();
        let p = Polynomial::linear(&coeffs, -(hp - hm) / width);
        if let Ok(r) = bm_ratio(&p, x, y, k) {
            best = best.max(r);
        }
    }
    Ok(best / d)
}
