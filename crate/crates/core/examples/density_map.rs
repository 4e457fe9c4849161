//! The Monge-Ampère density λ of the square: point values against the
//! product formula 4 / sqrt((1 - x1²)(1 - x2²)), then a CSV grid and an SVG
//! heatmap written to the given directory.
//!
//!     cargo run --release --example density_map -- /tmp/square

use std::path::PathBuf;

use mabody::extremal::{density, density_grid};
use mabody::{body::io::read_body, svg::heatmap, Config};
use nalgebra::DVector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().display().to_string()));
    std::fs::create_dir_all(&dir)?;
    let cfg = Config::default();
    let square = read_body("data/square.json")?;

    for x in [[0.0, 0.0], [0.5, -0.3], [0.9, 0.9]] {
        let lambda = density(&square, &DVector::from_row_slice(&x), &cfg)?;
        let product = 4.0 / ((1.0 - x[0] * x[0]) * (1.0 - x[1] * x[1])).sqrt();
        println!("λ{x:?} = {lambda:.6}   product formula {product:.6}");
    }

    let field = density_grid(&square, 61, 1e-2, &cfg)?;
    let (csv, svg) = (dir.join("square_density.csv"), dir.join("square_density.svg"));
    std::fs::write(&csv, field.to_csv())?;
    std::fs::write(&svg, heatmap(&field, cfg.svg_clip_percentile)?)?;
    println!("{} samples -> {} and {}", field.values.len(), csv.display(), svg.display());
    Ok(())
}
