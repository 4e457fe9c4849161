//! Nelder-Mead simplex search with restarts.

#[derive(Clone, Debug)]
pub struct NelderMead {
    pub max_iter: usize,
    /// Stop when the simplex diameter falls below this.
    pub diameter_tol: f64,
    /// Stop as soon as a vertex reaches this value.
    pub target: Option<f64>,
    pub restarts: usize,
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

impl NelderMead {
    pub fn minimize(&self, f: impl Fn(&[f64]) -> f64, start: &[f64], step: f64) -> Minimum {
        let mut best = Minimum { point: start.to_vec(), value: f(start), evaluations: 1 };
        let mut step = step;
        for _ in 0..=self.restarts {
            if self.reached(best.value) {
                break;
            }
            let run = self.run(&f, &best.point, step);
            let improved = run.value < best.value - 1e-15 * best.value.abs().max(1.0);
            let evals = best.evaluations + run.evaluations;
            if run.value <= best.value {
                best = run;
            }
            best.evaluations = evals;
            if !improved {
                break;
            }
            step *= 0.5;
        }
        best
    }

    fn reached(&self, v: f64) -> bool {
        self.target.is_some_and(|t| v <= t)
    }

    fn run(&self, f: &impl Fn(&[f64]) -> f64, start: &[f64], step: f64) -> Minimum {
        let d = start.len();
        let mut simplex: Vec<Vec<f64>> = vec![start.to_vec()];
        for i in 0..d {
            let mut p = start.to_vec();
            p[i] += step;
            simplex.push(p);
        }
        let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();
        let mut evals = d + 1;

        for _ in 0..self.max_iter {
            let mut order: Vec<usize> = (0..=d).collect();
            order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            if self.reached(values[0]) {
                break;
            }
            let diameter = simplex[1..]
                .iter()
                .map(|p| p.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                .fold(0.0, f64::max);
            if diameter < self.diameter_tol {
                break;
            }

            let mut centroid = vec![0.0; d];
            for p in &simplex[..d] {
                for (c, x) in centroid.iter_mut().zip(p) {
                    *c += x / d as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid.iter().zip(&simplex[d]).map(|(c, w)| c + t * (c - w)).collect()
            };

            let reflected = along(1.0);
            let fr = f(&reflected);
            evals += 1;
            if fr < values[0] {
                let expanded = along(2.0);
                let fe = f(&expanded);
                evals += 1;
                if fe < fr {
                    simplex[d] = expanded;
                    values[d] = fe;
                } else {
                    simplex[d] = reflected;
                    values[d] = fr;
                }
                continue;
            }
            if fr < values[d - 1] {
                simplex[d] = reflected;
                values[d] = fr;
                continue;
            }
            let (contracted, fc) = if fr < values[d] {
                let c = along(0.5);
                let v = f(&c);
                (c, v)
            } else {
                let c = along(-0.5);
                let v = f(&c);
                (c, v)
            };
            evals += 1;
            if fc < values[d].min(fr) {
                simplex[d] = contracted;
                values[d] = fc;
                continue;
            }
            for i in 1..=d {
                let shrunk: Vec<f64> = simplex[0].iter().zip(&simplex[i]).map(|(b, p)| b + 0.5 * (p - b)).collect();
                values[i] = f(&shrunk);
                simplex[i] = shrunk;
            }
            evals += d;
        }
        let (i, &value) = values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
        Minimum { point: simplex[i].clone(), value, evaluations: evals }
    }
}
