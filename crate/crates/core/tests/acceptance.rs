//! Acceptance suite: one PASS/FAIL line per criterion, at full resolution.
//!
//!     cargo test --release --test acceptance
//!
//! Reference values come from closed forms written out here, not from the
//! library.

use std::f64::consts::PI;
use std::time::Instant;

use mabody::bernstein::{linear_tightness, validate_bm_bound};
use mabody::ellipse::{bstar, bstar_symmetric};
use mabody::extremal::{delta_b, delta_b_fd, density, total_mass, v_k_ball, v_k_symmetric};
use mabody::foliation::{check_harmonicity, Leaf};
use mabody::verify::{random_direction, random_interior};
use mabody::{Config, ConvexBody, Solver};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn disk() -> ConvexBody {
    ConvexBody::ball(DVector::zeros(2), 1.0).unwrap().with_name("disk")
}

fn square() -> ConvexBody {
    ConvexBody::cube(2, 1.0).unwrap().with_name("square")
}

fn triangle() -> ConvexBody {
    ConvexBody::from_points(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap().with_name("triangle")
}

fn hexagon() -> ConvexBody {
    let pts: Vec<Vec<f64>> = (0..6).map(|k| (PI * k as f64 / 3.0).sin_cos()).map(|(s, c)| vec![c, s]).collect();
    let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
    ConvexBody::from_points(&refs).unwrap().with_name("hexagon")
}

fn rng(offset: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(42 + offset)
}

fn ball_density(cfg: &Config) -> Outcome {
    let k = disk();
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        // Radii spread over [0, 0.9], both ends included.
        let radius = 0.9 * i as f64 / 19.0;
        let angle = r.gen_range(0.0..2.0 * PI);
        let x = DVector::from_vec(vec![radius * angle.cos(), radius * angle.sin()]);
        let expected = 2.0 * PI / (1.0 - radius * radius).sqrt();
        worst = worst.max(rel(density(&k, &x, cfg).unwrap(), expected));
    }
    outcome(worst < 2e-2, format!("20 points |x| <= 0.9, worst relative error {worst:.2e} (limit 2e-2)"))
}

fn mass_identity(cfg: &Config) -> Outcome {
    let target = 4.0 * PI * PI;
    let mut passed = true;
    let mut parts = Vec::new();
    for k in [disk(), square(), triangle()] {
        let report = total_mass(&k, 101, cfg).unwrap();
        let err = rel(report.mass, target);
        passed &= err < 5e-2;
        parts.push(format!("{} {:.4} ({err:.2e})", report.body, report.mass));
    }
    outcome(passed, format!("grid 101, margins {:?}: {} vs {target:.4} (limit 5e-2)", cfg.margins, parts.join(", ")))
}

fn oracle_equivalence(cfg: &Config) -> Outcome {
    let bisection = cfg.clone().with_solver(Solver::Bisection);
    let mut r = rng(3);
    let (mut worst_exact, mut worst_bisection): (f64, f64) = (0.0, 0.0);
    for k in [disk(), square()] {
        for _ in 0..20 {
            let x = random_interior(&k, 0.05, &mut r);
            let y = random_direction(2, &mut r);
            let sym = bstar_symmetric(&k, &x, &y, cfg).unwrap();
            worst_exact = worst_exact.max(rel(bstar(&k, &x, &y, cfg).unwrap().bstar, sym));
            worst_bisection = worst_bisection.max(rel(bstar(&k, &x, &y, &bisection).unwrap().bstar, sym));
        }
    }
    outcome(
        worst_exact < 1e-3 && worst_bisection < 1e-3,
        format!(
            "20 (x,y) on disk and square, worst relative gap exact {worst_exact:.2e}, bisection {worst_bisection:.2e} (limit 1e-3)"
        ),
    )
}

fn fd_limit(cfg: &Config) -> Outcome {
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for k in [disk(), square()] {
        for _ in 0..10 {
            let x = random_interior(&k, 0.05, &mut r);
            let y = random_direction(2, &mut r);
            let fd = delta_b_fd(&k, &x, &y, &cfg.fd_steps, cfg).unwrap();
            worst = worst.max(rel(fd, 1.0 / bstar(&k, &x, &y, cfg).unwrap().bstar));
        }
    }
    outcome(worst < 1e-2, format!("10 (x,y) on disk and square, worst relative gap {worst:.2e} (limit 1e-2)"))
}

fn interval_closed_form(cfg: &Config) -> Outcome {
    let k = ConvexBody::interval(-1.0, 1.0).unwrap().with_name("interval");
    let one = DVector::from_vec(vec![1.0]);
    let mut worst: f64 = 0.0;
    for x in [0.0, 0.3, -0.3, 0.7, -0.7, 0.9, -0.9] {
        let d = delta_b(&k, &DVector::from_vec(vec![x]), &one, cfg).unwrap();
        worst = worst.max((d - 1.0 / f64::sqrt(1.0 - x * x)).abs());
    }
    let mass = total_mass(&k, cfg.grid, cfg).unwrap().mass;
    let mass_err = (mass - 2.0 * PI).abs();
    outcome(
        worst < 1e-6 && mass_err < 1e-3,
        format!("worst |δ_B - 1/sqrt(1-x²)| {worst:.2e} (limit 1e-6), mass {mass:.6}, |mass - 2π| {mass_err:.2e} (limit 1e-3)"),
    )
}

fn norm_properties(cfg: &Config) -> Outcome {
    const CASES: usize = 200;
    let bodies = [disk(), square(), triangle(), hexagon()];
    let small_square = ConvexBody::cube(2, 0.7).unwrap();
    let big_triangle = triangle().dilate(&DVector::from_vec(vec![0.25, 0.25]), 1.5).unwrap();
    let pairs = [(&small_square, &bodies[0]), (&bodies[0], &bodies[1]), (&bodies[2], &big_triangle), (&bodies[3], &bodies[0])];
    let mut r = rng(0);
    let (mut homogeneity, mut subadditivity, mut monotonicity, mut dilation) = (0, 0, 0, 0);
    for i in 0..CASES {
        let k = &bodies[i % bodies.len()];
        let x = random_interior(k, 0.05, &mut r);
        let y = random_direction(2, &mut r);
        let b = bstar(k, &x, &y, cfg).unwrap().bstar;

        if [0.5, 2.0, 3.0].iter().any(|&t| rel(bstar(k, &x, &(&y * t), cfg).unwrap().bstar, b / t) >= 2.0 * cfg.bisection_tol) {
            homogeneity += 1;
        }

        let y2 = random_direction(2, &mut r) * r.gen_range(0.1..2.0);
        let sum = &y + &y2;
        if sum.norm() > 1e-6 {
            let (d1, d2, d12) = (1.0 / b, delta_b(k, &x, &y2, cfg).unwrap(), delta_b(k, &x, &sum, cfg).unwrap());
            if !(d1 > 0.0 && d2 > 0.0 && d12 > 0.0) || d12 > d1 + d2 + 1e-3 {
                subadditivity += 1;
            }
        }

        let (inner, outer) = pairs[i % pairs.len()];
        let xi = random_interior(inner, 0.05, &mut r);
        let (bi, bo) = (bstar(inner, &xi, &y, cfg).unwrap().bstar, bstar(outer, &xi, &y, cfg).unwrap().bstar);
        if bi > bo * (1.0 + 2.0 * cfg.bisection_tol) {
            monotonicity += 1;
        }

        let s = r.gen_range(0.5..2.0);
        if rel(bstar(&k.dilate(&x, s).unwrap(), &x, &y, cfg).unwrap().bstar, s * b) >= 1e-3 {
            dilation += 1;
        }
    }
    let failures = homogeneity + subadditivity + monotonicity + dilation;
    outcome(
        failures == 0,
        format!(
            "{CASES} cases, seed 42: failures homogeneity {homogeneity}, subadditivity {subadditivity}, set monotonicity {monotonicity}, dilation {dilation}"
        ),
    )
}

fn harmonicity(cfg: &Config) -> Outcome {
    let mut r = rng(5);
    let radii = [1.05, 1.5, 2.0, 3.0, 5.0];
    let mut worst: f64 = 0.0;
    for k in [disk(), square()] {
        for _ in 0..10 {
            let x = random_interior(&k, 0.05, &mut r);
            let y = random_direction(2, &mut r);
            let leaf = Leaf::from_witness(&bstar(&k, &x, &y, cfg).unwrap().witness);
            worst = worst.max(check_harmonicity(&leaf, &k, &radii, cfg).unwrap());
        }
    }
    outcome(worst < 1e-3, format!("10 witnesses each on disk and square, radii up to 5, max deviation {worst:.2e} (limit 1e-3)"))
}

fn bernstein_markov(cfg: &Config) -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for k in [disk(), square(), triangle()] {
        let report = validate_bm_bound(&k, 500, 5, cfg.seed, cfg).unwrap();
        passed &= report.violations() == 0;
        parts.push(format!("{} {} violations", k.name().unwrap(), report.violations()));
    }
    let mut r = rng(6);
    let mut tightness = f64::INFINITY;
    for k in [disk(), square()] {
        for _ in 0..10 {
            let x = random_interior(&k, 0.05, &mut r);
            let y = random_direction(2, &mut r);
            tightness = tightness.min(linear_tightness(&k, &x, &y, cfg).unwrap());
        }
    }
    passed &= tightness >= 0.99;
    outcome(
        passed,
        format!("500 polynomials of degree <= 5, slack {}: {}; min linear tightness {tightness:.5} (limit 0.99)", cfg.bm_slack, parts.join(", ")),
    )
}

fn lundin(cfg: &Config) -> Outcome {
    let k = disk();
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let z: Vec<Complex64> = loop {
            let z: Vec<Complex64> =
                (0..2).map(|_| Complex64::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0))).collect();
            if z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() <= 3.0 {
                break z;
            }
        };
        worst = worst.max((v_k_ball(&z) - v_k_symmetric(&k, &z, cfg).unwrap()).abs());
    }
    outcome(worst < 1e-6, format!("50 points |z| <= 3, max |difference| {worst:.2e} (limit 1e-6)"))
}

fn main() {
    // Let `cargo test -- --list` and filters behave like the default harness.
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }

    let cfg = Config::default();
    type Criterion = (&'static str, fn(&Config) -> Outcome);
    let criteria: [Criterion; 9] = [
        ("ball density", ball_density),
        ("total mass (2π)²", mass_identity),
        ("oracle equivalence", oracle_equivalence),
        ("finite-difference limit", fd_limit),
        ("1-D closed form", interval_closed_form),
        ("norm properties", norm_properties),
        ("foliation harmonicity", harmonicity),
        ("Bernstein-Markov bound", bernstein_markov),
        ("Lundin consistency", lundin),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run(&cfg);
        let status = if result.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!result.passed);
        println!("{status} {} {name}: {} [{:.1}s]", i + 1, result.detail, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
