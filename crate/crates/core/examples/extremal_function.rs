//! The extremal function of symmetric bodies: Joukowski map, polar-dual
//! supremum against Lundin's ball formula, and δ_B as the derivative of V_K
//! in imaginary directions.
//!
//!     cargo run --release --example extremal_function

use mabody::ellipse::bstar;
use mabody::extremal::{delta_b_fd, joukowski, v_k_ball, v_k_symmetric};
use mabody::{body::io::read_body, Config};
use nalgebra::DVector;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = Config::default();
    for w in [Complex64::new(1.25, 0.0), Complex64::new(0.3, 0.0), Complex64::new(0.0, 2.0)] {
        let h = joukowski(w);
        println!("h({w}) = {h:.6}   |h| = {:.6}   h + 1/h - 2w = {:.1e}", h.norm(), (h + 1.0 / h - 2.0 * w).norm());
    }

    let disk = read_body("data/disk.json")?;
    let square = read_body("data/square.json")?;
    for z in [[Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.3, 0.5), Complex64::new(-1.0, 0.2)]] {
        println!(
            "z = {z:?}: V_disk {:.12} (Lundin {:.12}), V_square {:.12}",
            v_k_symmetric(&disk, &z, &cfg)?,
            v_k_ball(&z),
            v_k_symmetric(&square, &z, &cfg)?
        );
    }

    let (x, y) = (DVector::from_vec(vec![0.3, 0.2]), DVector::from_vec(vec![1.0, 0.0]));
    for k in [&disk, &square] {
        let fd = delta_b_fd(k, &x, &y, &cfg.fd_steps, &cfg)?;
        let exact = 1.0 / bstar(k, &x, &y, &cfg)?.bstar;
        println!("{:<6} lim V(x + ity)/t = {fd:.8}   1/b* = {exact:.8}", k.name().unwrap_or("?"));
    }
    Ok(())
}
