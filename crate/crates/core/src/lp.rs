//! Dense simplex for tiny linear programs `max c·z  s.t.  G z <= h` with free
//! `z` and `h >= 0`, so the origin is a feasible starting vertex.
//!
//! Sizes here are a handful of variables and a few dozen rows; a full tableau
//! with Bland's rule is both simple and fast enough.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub z: Vec<f64>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Unbounded,
}

/// Maximizes `objective · z` over `{z : rows[i] · z <= rhs[i]}`.
///
/// Returns `Ok(Err(Unbounded))` when the objective is unbounded above.
pub fn maximize(
    objective: &[f64],
    rows: &[Vec<f64>],
    rhs: &[f64],
) -> Result<std::result::Result<LpSolution, LpStatus>> {
    let d = objective.len();
    let m = rows.len();
    if rhs.len() != m || rows.iter().any(|r| r.len() != d) {
        return Err(Error::Solver("inconsistent LP dimensions".into()));
    }
    if rhs.iter().any(|&h| h < 0.0 || !h.is_finite()) {
        return Err(Error::Solver("LP right-hand side must be non-negative".into()));
    }

    // Columns: z+ (d), z- (d), slacks (m), rhs (1).
    let cols = 2 * d + m + 1;
    let width = cols;
    let mut t = vec![0.0; (m + 1) * width];
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * d + i).collect();
    for (i, row) in rows.iter().enumerate() {
        let r = &mut t[i * width..(i + 1) * width];
        for j in 0..d {
            r[j] = row[j];
            r[d + j] = -row[j];
        }
        r[2 * d + i] = 1.0;
        r[cols - 1] = rhs[i];
    }
    {
        let obj = &mut t[m * width..(m + 1) * width];
        for j in 0..d {
            obj[j] = -objective[j];
            obj[d + j] = objective[j];
        }
    }

    let max_iter = 50 * (m + d + 1);
    for _ in 0..max_iter {
        // Bland: lowest-index column with negative reduced cost.
        let entering = (0..cols - 1).find(|&j| t[m * width + j] < -PIVOT_EPS);
        let Some(e) = entering else {
            let mut z = vec![0.0; d];
            for (i, &b) in basis.iter().enumerate() {
                let v = t[i * width + cols - 1];
                if b < d {
                    z[b] += v;
                } else if b < 2 * d {
                    z[b - d] -= v;
                }
            }
            let value = objective.iter().zip(&z).map(|(c, z)| c * z).sum();
            return Ok(Ok(LpSolution { z, value }));
        };

        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = t[i * width + e];
            if a > PIVOT_EPS {
                let ratio = t[i * width + cols - 1] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - 1e-15 || (ratio <= lr + 1e-15 && basis[i] < basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
        }
        let Some((p, _)) = leave else {
            return Ok(Err(LpStatus::Unbounded));
        };

        let pivot = t[p * width + e];
        for j in 0..cols {
            t[p * width + j] /= pivot;
        }
        for i in 0..=m {
            if i == p {
                continue;
            }
            let f = t[i * width + e];
            if f != 0.0 {
                for j in 0..cols {
                    t[i * width + j] -= f * t[p * width + j];
                }
            }
        }
        basis[p] = e;
    }
    Err(Error::Solver("simplex iteration limit reached".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_corner() {
        // max x + y on [-1, 1]^2
        let rows = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        let sol = maximize(&[1.0, 1.0], &rows, &[1.0; 4]).unwrap().unwrap();
        assert!((sol.value - 2.0).abs() < 1e-12);
        assert!((sol.z[0] - 1.0).abs() < 1e-12 && (sol.z[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_optimum() {
        // max -x on x >= 0.5 written as -x <= -0.5 is not origin-feasible, so
        // shift: max -x on {x <= 2, -x <= 3} gives x = -3.
        let rows = vec![vec![1.0], vec![-1.0]];
        let sol = maximize(&[-1.0], &rows, &[2.0, 3.0]).unwrap().unwrap();
        assert!((sol.z[0] + 3.0).abs() < 1e-12);
    }

    #[test]
    fn detects_unbounded() {
        let rows = vec![vec![1.0, 0.0]];
        let status = maximize(&[0.0, 1.0], &rows, &[1.0]).unwrap();
        assert_eq!(status.unwrap_err(), LpStatus::Unbounded);
    }

    #[test]
    fn degenerate_rows() {
        // Many constraints through the optimum.
        let rows = vec![vec![1.0, 1.0], vec![1.0, 2.0], vec![2.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let sol = maximize(&[1.0, 1.0], &rows, &[2.0, 3.0, 3.0, 1.0, 1.0]).unwrap().unwrap();
        assert!((sol.value - 2.0).abs() < 1e-12);
    }
}
