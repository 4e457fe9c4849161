//! Named invariant suites, reported as TAP lines by `mabody verify`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bernstein::{linear_tightness, validate_bm_bound};
use crate::body::ConvexBody;
use crate::config::Config;
use crate::ellipse::{bstar, bstar_symmetric, check_a_maximal};
use crate::error::{Error, Result};
use crate::extremal::{delta_b, delta_b_fd, density, joukowski, total_mass, v_k_ball, v_k_symmetric};
use crate::foliation::{check_curvilinear_limit, check_harmonicity, check_tangent_limit, Leaf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Norms,
    Oracles,
    Foliation,
    Bernstein,
    Mass,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "norms" => Suite::Norms,
            "oracles" => Suite::Oracles,
            "foliation" => Suite::Foliation,
            "bernstein" => Suite::Bernstein,
            "mass" => Suite::Mass,
            "all" => Suite::All,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown suite '{other}' (expected norms, oracles, foliation, bernstein, mass or all)"
                )))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.to_string(), passed, detail }
    }

    /// Passes when `worst < limit`.
    fn below(name: &str, worst: f64, limit: f64, cases: usize) -> Self {
        Self::new(name, worst < limit, format!("{cases} cases, worst {worst:.3e}, limit {limit:.1e}"))
    }
}

pub fn to_tap(checks: &[Check]) -> String {
    let mut out = format!("TAP version 13\n1..{}\n", checks.len());
    for (i, c) in checks.iter().enumerate() {
        let status = if c.passed { "ok" } else { "not ok" };
        let _ = writeln!(out, "{status} {} - {} # {}", i + 1, c.name, c.detail);
    }
    out
}

/// The bodies the suites run on.
pub struct Fixtures {
    pub disk: ConvexBody,
    pub square: ConvexBody,
    pub triangle: ConvexBody,
    pub hexagon: ConvexBody,
    pub interval: ConvexBody,
}

impl Fixtures {
    pub fn new() -> Self {
        let hex: Vec<Vec<f64>> =
            (0..6).map(|k| (PI * k as f64 / 3.0).sin_cos()).map(|(s, c)| vec![c, s]).collect();
        let hex_refs: Vec<&[f64]> = hex.iter().map(|v| v.as_slice()).collect();
        Self {
            disk: ConvexBody::ball(DVector::zeros(2), 1.0).unwrap().with_name("disk"),
            square: ConvexBody::cube(2, 1.0).unwrap().with_name("square"),
            triangle: ConvexBody::from_points(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap().with_name("triangle"),
            hexagon: ConvexBody::from_points(&hex_refs).unwrap().with_name("hexagon"),
            interval: ConvexBody::interval(-1.0, 1.0).unwrap().with_name("interval"),
        }
    }
}

impl Default for Fixtures {
    fn default() -> Self {
        Self::new()
    }
}

/// Uniform point of `{gauge <= 1 - clearance}` by rejection from the bounding box.
pub fn random_interior(k: &ConvexBody, clearance: f64, rng: &mut impl Rng) -> DVector<f64> {
    let bbox = k.bounding_box();
    loop {
        let z = DVector::from_fn(k.dim(), |j, _| rng.gen_range(bbox[j].0..bbox[j].1));
        if k.gauge(&z).unwrap() <= 1.0 - clearance {
            return z;
        }
    }
}

pub fn random_direction(n: usize, rng: &mut impl Rng) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..=1.0));
        let len = v.norm();
        if len > 1e-3 && len <= 1.0 {
            return v / len;
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn run_suite(suite: Suite, cfg: &Config, fast: bool) -> Result<Vec<Check>> {
    let f = Fixtures::new();
    match suite {
        Suite::Norms => norms(&f, cfg, fast),
        Suite::Oracles => oracles(&f, cfg, fast),
        Suite::Foliation => foliation(&f, cfg, fast),
        Suite::Bernstein => bernstein(&f, cfg, fast),
        Suite::Mass => mass(&f, cfg, fast),
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::Norms, Suite::Oracles, Suite::Foliation, Suite::Bernstein, Suite::Mass] {
                all.extend(run_suite(s, cfg, fast)?);
            }
            Ok(all)
        }
    }
}

fn norms(f: &Fixtures, cfg: &Config, fast: bool) -> Result<Vec<Check>> {
    let cases = if fast { 20 } else { 50 };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let bodies = [&f.disk, &f.square, &f.triangle, &f.hexagon];
    let mut out = Vec::new();

    let mut worst: f64 = 0.0;
    for i in 0..cases {
        let k = bodies[i % bodies.len()];
        let x = random_interior(k, 0.05, &mut rng);
        let y = random_direction(2, &mut rng);
        let base = bstar(k, &x, &y, cfg)?.bstar;
        for t in [0.5, 2.0, 3.0] {
            worst = worst.max(rel(bstar(k, &x, &(&y * t), cfg)?.bstar, base / t));
        }
    }
    out.push(Check::below("norms/homogeneity", worst, 2.0 * cfg.bisection_tol, cases));

    let mut worst = f64::NEG_INFINITY;
    let mut positive = true;
    for i in 0..cases {
        let k = bodies[i % bodies.len()];
        let x = random_interior(k, 0.05, &mut rng);
        let (y1, y2) = (random_direction(2, &mut rng), random_direction(2, &mut rng) * rng.gen_range(0.1..2.0));
        let sum = &y1 + &y2;
        if sum.norm() < 1e-6 {
            continue;
        }
        let (d1, d2, d12) = (delta_b(k, &x, &y1, cfg)?, delta_b(k, &x, &y2, cfg)?, delta_b(k, &x, &sum, cfg)?);
        positive &= d1 > 0.0 && d2 > 0.0 && d12 > 0.0;
        worst = worst.max(d12 - d1 - d2);
    }
    out.push(Check::new(
        "norms/subadditivity",
        positive && worst <= 1e-3,
        format!("{cases} cases, max δ(y1+y2) - δ(y1) - δ(y2) = {worst:.3e}, positive {positive}"),
    ));

    // Nested pairs K ⊂ κ.
    let small_square = ConvexBody::cube(2, 0.7).unwrap();
    let big_triangle = f.triangle.dilate(&DVector::from_vec(vec![0.25, 0.25]), 1.5)?;
    let pairs = [(&small_square, &f.disk), (&f.disk, &f.square), (&f.triangle, &big_triangle), (&f.hexagon, &f.disk)];
    let mut worst = f64::NEG_INFINITY;
    for i in 0..cases {
        let (inner, outer) = pairs[i % pairs.len()];
        let x = random_interior(inner, 0.05, &mut rng);
        let y = random_direction(2, &mut rng);
        let (bi, bo) = (bstar(inner, &x, &y, cfg)?.bstar, bstar(outer, &x, &y, cfg)?.bstar);
        worst = worst.max((bi - bo) / bo);
    }
    out.push(Check::new(
        "norms/set-monotonicity",
        worst <= 2.0 * cfg.bisection_tol,
        format!("{cases} cases, max relative excess {worst:.3e}"),
    ));

    let mut worst: f64 = 0.0;
    for i in 0..cases {
        let k = bodies[i % bodies.len()];
        let x = random_interior(k, 0.05, &mut rng);
        let y = random_direction(2, &mut rng);
        let s = rng.gen_range(0.5..2.0);
        let scaled = bstar(&k.dilate(&x, s)?, &x, &y, cfg)?.bstar;
        worst = worst.max(rel(scaled, s * bstar(k, &x, &y, cfg)?.bstar));
    }
    out.push(Check::below("norms/dilation-scaling", worst, 1e-3, cases));

    let mut worst: f64 = 0.0;
    for i in 0..cases {
        let k = bodies[i % bodies.len()];
        let x = random_interior(k, 0.05, &mut rng);
        let y = random_direction(2, &mut rng);
        let dx = random_direction(2, &mut rng) * 1e-3;
        let dy = random_direction(2, &mut rng) * 1e-3;
        let b = bstar(k, &x, &y, cfg)?.bstar;
        worst = worst.max((bstar(k, &(&x + dx), &(&y + dy), cfg)?.bstar - b).abs());
    }
    out.push(Check::below("norms/continuity", worst, 1e-1, cases));

    let mut failures = 0;
    let witnesses = if fast { 8 } else { 20 };
    for i in 0..witnesses {
        let k = bodies[i % bodies.len()];
        let x = random_interior(k, 0.05, &mut rng);
        let y = random_direction(2, &mut rng);
        if !check_a_maximal(&bstar(k, &x, &y, cfg)?.witness, k, cfg)? {
            failures += 1;
        }
    }
    out.push(Check::new(
        "norms/b-maximal-is-a-maximal",
        failures == 0,
        format!("{witnesses} witnesses, {failures} with a translate strictly inside"),
    ));
    Ok(out)
}

fn oracles(f: &Fixtures, cfg: &Config, fast: bool) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let mut out = Vec::new();

    let points = if fast { 10 } else { 20 };
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let x = random_interior(&f.disk, 0.1, &mut rng);
        let want = 2.0 * PI / (1.0 - x.norm_squared()).sqrt();
        worst = worst.max(rel(density(&f.disk, &x, cfg)?, want));
    }
    out.push(Check::below("oracles/ball-density", worst, 2e-2, points));

    let mut worst: f64 = 0.0;
    for k in [&f.disk, &f.square, &f.hexagon] {
        for _ in 0..points {
            let x = random_interior(k, 0.05, &mut rng);
            let y = random_direction(2, &mut rng);
            let sym = bstar_symmetric(k, &x, &y, cfg)?;
            worst = worst.max(rel(bstar(k, &x, &y, cfg)?.bstar, sym));
        }
    }
    out.push(Check::below("oracles/symmetric-infimum", worst, 1e-3, 3 * points));

    let fd_points = if fast { 4 } else { 10 };
    let mut worst: f64 = 0.0;
    for k in [&f.disk, &f.square] {
        for _ in 0..fd_points {
            let x = random_interior(k, 0.05, &mut rng);
            let y = random_direction(2, &mut rng);
            let fd = delta_b_fd(k, &x, &y, &cfg.fd_steps, cfg)?;
            worst = worst.max((fd - 1.0 / bstar(k, &x, &y, cfg)?.bstar).abs());
        }
    }
    out.push(Check::below("oracles/finite-difference-limit", worst, 1e-2, 2 * fd_points));

    let mut worst: f64 = 0.0;
    for x in [0.0, 0.3, -0.3, 0.7, -0.7, 0.9, -0.9] {
        let d = delta_b(&f.interval, &DVector::from_element(1, x), &DVector::from_element(1, 1.0), cfg)?;
        worst = worst.max((d - 1.0 / (1.0 - x * x).sqrt()).abs());
    }
    out.push(Check::below("oracles/interval-metric", worst, 1e-6, 7));
    let m = total_mass(&f.interval, cfg.grid, cfg)?;
    out.push(Check::below("oracles/interval-mass", (m.mass - 2.0 * PI).abs(), 1e-3, 1));

    let lundin = if fast { 20 } else { 50 };
    let mut worst: f64 = 0.0;
    for _ in 0..lundin {
        let z = random_complex_point(2, 3.0, &mut rng);
        worst = worst.max((v_k_ball(&z) - v_k_symmetric(&f.disk, &z, cfg)?).abs());
    }
    out.push(Check::below("oracles/lundin", worst, 1e-6, lundin));

    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let w = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let h = joukowski(w);
        worst = worst.max((h + 1.0 / h - 2.0 * w).norm() / (1.0 + w.norm()));
        if h.norm() < 1.0 - 1e-12 {
            worst = f64::INFINITY;
        }
    }
    out.push(Check::below("oracles/joukowski-identity", worst, 1e-12, 200));

    let mut violations = 0;
    for _ in 0..500 {
        let alpha: f64 = rng.gen_range(-0.99..0.99);
        let beta = rng.gen_range(-1.0..=1.0) * (1.0 - alpha.abs()).sqrt();
        let eps: f64 = rng.gen_range(1e-4..=0.5);
        let mid = (1.0 - alpha * alpha).sqrt();
        let v = joukowski(Complex64::new(alpha, eps * beta)).norm().ln() / eps;
        let (lo, hi) = ((1.0 - eps) * beta.abs() / mid, beta.abs() / mid);
        if v < lo - 1e-12 || v > hi + 1e-12 {
            violations += 1;
        }
    }
    out.push(Check::new("oracles/lipschitz-sandwich", violations == 0, format!("500 cases, {violations} outside")));

    let small_square = ConvexBody::cube(2, 0.7).unwrap();
    let pairs = [(&small_square, &f.disk), (&f.disk, &f.square), (&f.hexagon, &f.disk)];
    let mut worst = f64::NEG_INFINITY;
    for i in 0..60 {
        let (inner, outer) = pairs[i % pairs.len()];
        let z = random_complex_point(2, 2.0, &mut rng);
        worst = worst.max(v_k_symmetric(outer, &z, cfg)? - v_k_symmetric(inner, &z, cfg)?);
    }
    out.push(Check::new(
        "oracles/extremal-function-monotonicity",
        worst <= 1e-9,
        format!("60 cases, max V_outer - V_inner = {worst:.3e}"),
    ));

    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let x = random_interior(&f.triangle, 0.05, &mut rng);
        let u = random_direction(2, &mut rng);
        let (p, m) = (bstar(&f.triangle, &x, &u, cfg)?.bstar, bstar(&f.triangle, &x, &-&u, cfg)?.bstar);
        worst = worst.max(rel(p, m));
    }
    out.push(Check::below("oracles/profile-evenness", worst, 1e-6, points));
    Ok(out)
}

fn random_complex_point(n: usize, radius: f64, rng: &mut impl Rng) -> Vec<Complex64> {
    loop {
        let z: Vec<Complex64> =
            (0..n).map(|_| Complex64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius))).collect();
        if z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() <= radius {
            return z;
        }
    }
}

fn foliation(f: &Fixtures, cfg: &Config, fast: bool) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(2));
    let leaves = if fast { 4 } else { 10 };
    let radii = [1.1, 1.5, 2.0, 5.0];
    let mut out = Vec::new();
    let (mut harmonic, mut forms, mut tangent, mut curvilinear) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut rates_ok = true;
    let mut straight_ok = true;
    let mut count = 0;
    for k in [&f.disk, &f.square] {
        for _ in 0..leaves {
            let x = random_interior(k, 0.05, &mut rng);
            let y = random_direction(2, &mut rng);
            let leaf = Leaf::from_witness(&bstar(k, &x, &y, cfg)?.witness);
            harmonic = harmonic.max(check_harmonicity(&leaf, k, &radii, cfg)?);
            for _ in 0..8 {
                let zeta = Complex64::from_polar(rng.gen_range(1.0..5.0), rng.gen_range(0.0..2.0 * PI));
                let (b, a, r) = (leaf.eval(zeta), leaf.eval_a_form(zeta), leaf.eval(1.0 / zeta.conj()));
                for j in 0..2 {
                    forms = forms.max((b[j] - a[j]).norm()).max((r[j] - b[j].conj()).norm());
                }
            }
            let t = check_tangent_limit(&leaf);
            tangent = tangent.max(t.error);
            if t.real_parts[1] > 0.0 {
                rates_ok &= (t.real_parts[0] / t.real_parts[1] - 10.0).abs() < 0.5;
            }
            let c = check_curvilinear_limit(&leaf, k, cfg)?;
            curvilinear = curvilinear.max((c.limit - 1.0 / leaf.b).abs() * leaf.b);
            let s: Vec<f64> = c.straight_line.iter().map(|p| p.1).collect();
            straight_ok &= s[2] <= s[0] + 1e-9;
            count += 1;
        }
    }
    out.push(Check::below("foliation/harmonicity", harmonic, 1e-3, count));
    out.push(Check::below("foliation/reflection-and-a-form", forms, 1e-12, 8 * count));
    out.push(Check::new(
        "foliation/tangent-limit",
        tangent < 1e-8 && rates_ok,
        format!("{count} leaves, worst |limit - i b y| {tangent:.3e}, linear rate {rates_ok}"),
    ));
    out.push(Check::new(
        "foliation/curvilinear-limit",
        curvilinear < 1e-3 && straight_ok,
        format!("{count} leaves, worst relative deviation from 1/b {curvilinear:.3e}, straight-line gap shrinks {straight_ok}"),
    ));
    Ok(out)
}

fn bernstein(f: &Fixtures, cfg: &Config, fast: bool) -> Result<Vec<Check>> {
    let trials = if fast { 100 } else { 500 };
    let mut out = Vec::new();
    for k in [&f.disk, &f.square, &f.triangle] {
        let r = validate_bm_bound(k, trials, 5, cfg.seed, cfg)?;
        out.push(Check::new(
            &format!("bernstein/bound-{}", k.name().unwrap_or("body")),
            r.violations() == 0,
            format!("{trials} polynomials, {} violations, max ratio/δ_B {:.4}", r.violations(), r.tightness()),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(3));
    let mut worst = f64::INFINITY;
    for k in [&f.disk, &f.square] {
        for _ in 0..10 {
            let x = random_interior(k, 0.05, &mut rng);
            let y = random_direction(2, &mut rng);
            worst = worst.min(linear_tightness(k, &x, &y, cfg)?);
        }
    }
    out.push(Check::new("bernstein/linear-tightness", worst >= 0.99, format!("20 points, min tightness {worst:.5}")));
    Ok(out)
}

fn mass(f: &Fixtures, cfg: &Config, fast: bool) -> Result<Vec<Check>> {
    let limit = if fast { 0.10 } else { 0.05 };
    let mut out = Vec::new();
    for k in [&f.disk, &f.square, &f.triangle] {
        let r = total_mass(k, cfg.grid, cfg)?;
        out.push(Check::new(
            &format!("mass/{}", r.body),
            r.rel_error < limit,
            format!("mass {:.4} vs {:.4}, relative error {:.2e}, error bar {:.1e}", r.mass, r.target, r.rel_error, r.error_bar),
        ));
    }
    Ok(out)
}
