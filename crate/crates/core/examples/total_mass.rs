//! Total Monge-Ampère mass of a body read from JSON, compared with (2π)ⁿ.
//!
//!     cargo run --release --example total_mass -- data/triangle.json 101

use std::time::Instant;

use mabody::extremal::total_mass;
use mabody::{body::io::read_body, Config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "data/disk.json".into());
    let resolution: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(101);
    let body = read_body(&path)?;
    let start = Instant::now();
    let report = total_mass(&body, resolution, &Config::default())?;
    println!("{}", report.to_json());
    println!(
        "mass {:.5} vs (2π)^{} = {:.5}: relative error {:.2e} (error bar {:.1e}), {:.1?}",
        report.mass,
        report.n,
        report.target,
        report.rel_error,
        report.error_bar,
        start.elapsed()
    );
    Ok(())
}
