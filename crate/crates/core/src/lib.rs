//! Maximal inscribed ellipses in convex bodies, the Bernstein-Markov metric
//! `δ_B(x, y) = 1 / b*(x, y)` and the Monge-Ampère density
//! `λ(x) = n! vol({y : δ_B(x, y) <= 1}*)` of the extremal function, in
//! dimensions 1 to 3.

pub mod bernstein;
pub mod body;
pub mod cli;
pub mod config;
pub mod ellipse;
pub mod error;
pub mod extremal;
pub mod foliation;
pub mod lp;
pub mod nelder_mead;
pub mod sphere;
pub mod svg;
pub mod verify;

pub use body::{io::BodyFile, ConvexBody, Halfspace, Shape};
pub use config::{Config, Solver};
pub use error::{Error, Result};
