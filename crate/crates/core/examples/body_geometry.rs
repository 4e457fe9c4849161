//! Gauges, supports, polars and dilations of the bundled bodies.
//!
//!     cargo run --example body_geometry

use mabody::body::io::read_body;
use nalgebra::DVector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let square = read_body("data/square.json")?;
    let hexagon = read_body("data/hexagon.json")?;
    let triangle = read_body("data/triangle.json")?;

    let z = DVector::from_vec(vec![0.5, 0.25]);
    let u = DVector::from_vec(vec![0.6, 0.8]);
    for k in [&square, &hexagon, &triangle] {
        println!(
            "{:<9} contains {:?}: {:<5} gauge {:.4}  support(u) {:.4}  diameter {:.4}",
            k.name().unwrap_or("?"),
            z.as_slice(),
            k.contains(&z)?,
            k.gauge(&z)?,
            k.support(&u)?,
            k.diameter(),
        );
    }

    // The polar of the square is the diamond |w1| + |w2| <= 1, and the polar
    // of the polar is the square again.
    let diamond = square.polar()?;
    println!("polar of square: {} vertices", diamond.polytope().unwrap().vertices.len());
    let back = diamond.polar()?;
    println!("Hausdorff(square, square**) = {:.2e}", square.hausdorff_distance(&back, 720)?);

    // Non-symmetric bodies have no polar about the origin.
    match triangle.polar() {
        Ok(_) => println!("unexpected: triangle polar exists"),
        Err(e) => println!("triangle polar: {e}"),
    }

    let x = DVector::from_vec(vec![0.2, 0.2]);
    let grown = triangle.dilate(&x, 1.5)?;
    println!("dilating the triangle by 1.5 about {:?}: support(u) {:.4} -> {:.4}", x.as_slice(), triangle.support(&u)?, grown.support(&u)?);
    Ok(())
}
