//! Largest inscribed ellipse through x with tangent direction y, with both
//! solvers, and the polar-dual formula on a symmetric body.
//!
//!     cargo run --release --example bstar

use mabody::ellipse::{bstar, bstar_symmetric, check_a_maximal};
use mabody::{body::io::read_body, Config, Solver};
use nalgebra::DVector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let exact = Config::default();
    let bisection = Config::default().with_solver(Solver::Bisection);
    let cases = [
        ("data/disk.json", [0.5, 0.0], [1.0, 0.0]),
        ("data/disk.json", [0.5, 0.0], [0.0, 1.0]),
        ("data/square.json", [0.5, 0.0], [1.0, 0.0]),
        ("data/triangle.json", [0.2, 0.3], [1.0, 1.0]),
        ("data/hexagon.json", [-0.3, 0.4], [0.2, -1.0]),
    ];
    println!("{:<9} {:>14} {:>14} {:>12} {:>12}", "body", "x", "y", "exact", "bisection");
    for (path, x, y) in cases {
        let k = read_body(path)?;
        let (x, y) = (DVector::from_row_slice(&x), DVector::from_row_slice(&y));
        let e = bstar(&k, &x, &y, &exact)?;
        let b = bstar(&k, &x, &y, &bisection)?;
        println!(
            "{:<9} {:>14} {:>14} {:>12.8} {:>12.8}",
            k.name().unwrap_or("?"),
            format!("{:?}", x.as_slice()),
            format!("{:?}", y.as_slice()),
            e.bstar,
            b.bstar
        );
        if let Ok(s) = bstar_symmetric(&k, &x, &y, &exact) {
            println!("{:<9} polar-dual formula gives {s:.8}", "");
        }
        println!("{:<9} witness center {:?}, a-maximal: {}", "", e.witness.center().as_slice(), check_a_maximal(&e.witness, &k, &exact)?);
    }
    Ok(())
}
