//! Direction sets on the unit sphere in dimensions 1 to 3.

use nalgebra::DVector;
use std::f64::consts::PI;

/// `count` equally spaced unit vectors in the plane, first at angle `offset`.
pub fn circle(count: usize, offset: f64) -> Vec<DVector<f64>> {
    (0..count)
        .map(|k| {
            let t = offset + 2.0 * PI * k as f64 / count as f64;
            DVector::from_vec(vec![t.cos(), t.sin()])
        })
        .collect()
}

/// Fibonacci spiral points on S², all cells of (nearly) equal area.
pub fn fibonacci(count: usize) -> Vec<DVector<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            DVector::from_vec(vec![r * phi.cos(), r * phi.sin(), z])
        })
        .collect()
}

/// Default direction sample for dimension `n`: ±1 on the line, a uniform
/// circle grid in the plane, Fibonacci points in space.
pub fn directions(n: usize, count: usize) -> Vec<DVector<f64>> {
    match n {
        1 => vec![DVector::from_element(1, 1.0), DVector::from_element(1, -1.0)],
        2 => circle(count, 0.0),
        _ => fibonacci(count),
    }
}

/// Surface measure of S^{n-1} (counting measure for n = 1).
pub fn sphere_area(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    }
}
