//! The holomorphic leaf through a maximal ellipse and the harmonicity of the
//! extremal function along it.
//!
//!     cargo run --release --example foliation_leaf

use mabody::ellipse::bstar;
use mabody::foliation::{check_curvilinear_limit, check_harmonicity, check_tangent_limit, ExtremalFunction, Leaf};
use mabody::{body::io::read_body, Config};
use nalgebra::DVector;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = Config::default();
    let square = read_body("data/square.json")?;
    let (x, y) = (DVector::from_vec(vec![0.3, 0.1]), DVector::from_vec(vec![0.0, 1.0]));
    let witness = bstar(&square, &x, &y, &cfg)?.witness;
    let leaf = Leaf::from_witness(&witness);
    println!("leaf through {:?}: center {:?}, b = {:.6}", x.as_slice(), leaf.center.as_slice(), leaf.b);

    let v = ExtremalFunction::new(&square, &cfg)?;
    println!("{:>6} {:>8} {:>14} {:>14}", "r", "phase", "V_K(f(ζ))", "log r");
    for r in [1.1, 2.0, 5.0] {
        for phase in [0.0, 1.0, 2.5] {
            let value = v.eval(&leaf.eval(Complex64::from_polar(r, phase)))?;
            println!("{r:>6} {phase:>8} {value:>14.10} {:>14.10}", f64::ln(r));
        }
    }
    println!("max deviation over 16 phases: {:.2e}", check_harmonicity(&leaf, &square, &[1.1, 1.5, 2.0, 5.0], &cfg)?);

    let t = check_tangent_limit(&leaf);
    println!("tangent limit {:?}, error {:.1e}", t.limit, t.error);
    let c = check_curvilinear_limit(&leaf, &square, &cfg)?;
    println!("V_K(f(r)) / (b (r - 1)) -> {:.8}, 1/b = {:.8}", c.limit, 1.0 / leaf.b);
    for (h, gap) in c.straight_line {
        println!("  r - 1 = {h:.0e}: gap to the straight line {gap:.3e}");
    }
    Ok(())
}
