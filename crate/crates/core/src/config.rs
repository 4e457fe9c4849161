//! Numeric knobs shared by every module.
//!
//! Defaults are the values the library is tuned and tested against. A config
//! file (same JSON syntax as body files) may override any subset of them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How `bstar` solves the inscribed-ellipse problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    /// Closed form for balls and ellipsoids, support-constraint linear program
    /// for polytopes.
    Exact,
    /// Bisection on `b` with a derivative-free search for a feasible center.
    /// Only needs the gauge of the body.
    Bisection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub solver: Solver,
    /// Relative bracket width at which bisection on `b` stops.
    pub bisection_tol: f64,
    /// Allowed excess of the gauge over 1 along a contained ellipse.
    pub containment_tol: f64,
    /// A point is interior when its gauge is below `1 - interior_tol`.
    pub interior_tol: f64,
    pub theta_grid: usize,
    pub theta_refine_tol: f64,
    pub nm_max_iter: usize,
    pub nm_diameter_tol: f64,
    pub nm_restarts: usize,
    pub symmetry_tol: f64,
    pub symmetry_directions: usize,
    pub directions_2d: usize,
    pub directions_3d: usize,
    /// Planar profiles are subdivided where the boundary of the δ_B unit
    /// ball bulges past a chord by more than this relative amount.
    pub profile_refine_tol: f64,
    pub symmetric_grid_2d: usize,
    pub symmetric_grid_3d: usize,
    pub a_maximal_directions_2d: usize,
    pub a_maximal_directions_3d: usize,
    pub harmonic_phases: usize,
    pub fd_steps: Vec<f64>,
    /// Nodes per axis for density grids.
    pub grid: usize,
    /// Gauge clearance kept from the boundary when integrating the density.
    pub margins: Vec<f64>,
    pub sup_samples: usize,
    pub bm_slack: f64,
    pub svg_clip_percentile: f64,
    pub seed: u64,
    pub threads: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            solver: Solver::Exact,
            bisection_tol: 1e-4,
            containment_tol: 1e-9,
            interior_tol: 1e-9,
            theta_grid: 512,
            theta_refine_tol: 1e-10,
            nm_max_iter: 2000,
            nm_diameter_tol: 1e-10,
            nm_restarts: 3,
            symmetry_tol: 1e-9,
            symmetry_directions: 64,
            directions_2d: 720,
            directions_3d: 2562,
            profile_refine_tol: 1e-5,
            symmetric_grid_2d: 4096,
            symmetric_grid_3d: 20480,
            a_maximal_directions_2d: 64,
            a_maximal_directions_3d: 256,
            harmonic_phases: 16,
            fd_steps: vec![1e-1, 3e-2, 1e-2, 3e-3, 1e-3],
            grid: 101,
            margins: vec![1e-2, 5e-3],
            sup_samples: 4000,
            bm_slack: 2e-2,
            svg_clip_percentile: 0.98,
            seed: 42,
            threads: None,
        }
    }
}

impl Config {
    pub fn with_solver(mut self, solver: Solver) -> Self {
        self.solver = solver;
        self
    }

    /// Halved resolutions for quick runs.
    pub fn fast(mut self) -> Self {
        self.directions_2d = (self.directions_2d / 2).max(90);
        self.directions_3d = (self.directions_3d / 2).max(200);
        self.symmetric_grid_2d = (self.symmetric_grid_2d / 2).max(512);
        self.symmetric_grid_3d = (self.symmetric_grid_3d / 2).max(2000);
        self.theta_grid = (self.theta_grid / 2).max(64);
        self.grid = (self.grid / 2).max(11);
        self.sup_samples = (self.sup_samples / 2).max(1000);
        self
    }

    /// Number of sphere directions used for radial profiles in dimension `n`.
    pub fn profile_directions(&self, n: usize) -> usize {
        match n {
            1 => 2,
            2 => self.directions_2d,
            _ => self.directions_3d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("bisection_tol", self.bisection_tol),
            ("containment_tol", self.containment_tol),
            ("interior_tol", self.interior_tol),
            ("theta_refine_tol", self.theta_refine_tol),
            ("nm_diameter_tol", self.nm_diameter_tol),
            ("symmetry_tol", self.symmetry_tol),
            ("profile_refine_tol", self.profile_refine_tol),
            ("bm_slack", self.bm_slack),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive")));
            }
        }
        let minima = [
            ("theta_grid", self.theta_grid, 16),
            ("directions_2d", self.directions_2d, 16),
            ("directions_3d", self.directions_3d, 50),
            ("symmetric_grid_2d", self.symmetric_grid_2d, 64),
            ("symmetric_grid_3d", self.symmetric_grid_3d, 200),
            ("grid", self.grid, 3),
            ("sup_samples", self.sup_samples, 1000),
            ("harmonic_phases", self.harmonic_phases, 1),
        ];
        for (name, v, min) in minima {
            if v < min {
                return Err(Error::InvalidArgument(format!("{name} must be at least {min}")));
            }
        }
        if self.margins.is_empty() || self.margins.iter().any(|&m| !(m > 0.0 && m < 1.0)) {
            return Err(Error::InvalidArgument("margins must lie in (0, 1)".into()));
        }
        if self.fd_steps.len() < 2 || self.fd_steps.iter().any(|&t| t <= 0.0) {
            return Err(Error::InvalidArgument("fd_steps needs at least two positive steps".into()));
        }
        if !(self.svg_clip_percentile > 0.0 && self.svg_clip_percentile <= 1.0) {
            return Err(Error::InvalidArgument("svg_clip_percentile must lie in (0, 1]".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        Config::default().validate().unwrap();
        Config::default().fast().validate().unwrap();
    }

    #[test]
    fn partial_override() {
        let cfg = Config::from_json(r#"{"grid": 51, "solver": "bisection"}"#).unwrap();
        assert_eq!(cfg.grid, 51);
        assert_eq!(cfg.solver, Solver::Bisection);
        assert_eq!(cfg.directions_2d, 720);
    }

    #[test]
    fn rejects_unknown_and_bad_values() {
        assert!(Config::from_json(r#"{"gird": 51}"#).is_err());
        assert!(Config::from_json(r#"{"bisection_tol": -1.0}"#).is_err());
        assert!(Config::from_json(r#"{"margins": []}"#).is_err());
    }
}
