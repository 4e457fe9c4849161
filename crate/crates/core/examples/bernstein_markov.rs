//! Random polynomials never beat the bound 1/b*(x, y); strip polynomials
//! attain it on symmetric bodies.
//!
//!     cargo run --release --example bernstein_markov

use mabody::bernstein::{linear_tightness, validate_bm_bound};
use mabody::{body::io::read_body, Config};
use nalgebra::DVector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = Config::default();
    for path in ["data/disk.json", "data/square.json", "data/triangle.json"] {
        let k = read_body(path)?;
        let report = validate_bm_bound(&k, 200, 5, cfg.seed, &cfg)?;
        println!(
            "{:<9} 200 polynomials of degree <= 5: {} violations, max ratio/δ_B {:.4}",
            k.name().unwrap_or("?"),
            report.violations(),
            report.tightness()
        );
    }
    let square = read_body("data/square.json")?;
    let (x, y) = (DVector::from_vec(vec![0.5, -0.2]), DVector::from_vec(vec![0.6, 0.8]));
    println!("strip polynomials on the square at {:?}: tightness {:.6}", x.as_slice(), linear_tightness(&square, &x, &y, &cfg)?);
    Ok(())
}
