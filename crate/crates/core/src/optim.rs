//! Derivative-free minimisation (Nelder-Mead) on an unconstrained space.

/// Outcome of a Nelder-Mead run.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    /// Stop when the simplex value spread falls below `ftol * (1 + |f_best|)`...
    pub ftol: f64,
    pub max_iter: usize,
    /// ... and the simplex extends less than `xtol` from the best vertex in every coordinate.
    pub xtol: f64,
    /// Edge length of the initial axis-aligned simplex.
    pub step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead { ftol: 1e-8, max_iter: 2000, xtol: 1e-6, step: 0.3 }
    }
}

impl NelderMead {
    pub fn minimize(&self, f: impl Fn(&[f64]) -> f64, x0: &[f64]) -> Minimum {
        let k = x0.len();
        let eval = |x: &[f64]| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        if k == 0 {
            return Minimum { x: Vec::new(), value: eval(x0), iterations: 0, converged: true };
        }
        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
        simplex.push(x0.to_vec());
        for i in 0..k {
            let mut v = x0.to_vec();
            v[i] += self.step;
            simplex.push(v);
        }
        let mut values: Vec<f64> = simplex.iter().map(|x| eval(x)).collect();
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iter {
            let mut order: Vec<usize> = (0..=k).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();
            let (best, worst) = (values[0], values[k]);
            let spread = worst - best;
            let width = simplex[1..]
                .iter()
                .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
                .fold(0.0f64, f64::max);
            if best.is_finite() && spread <= self.ftol * (1.0 + best.abs()) && width <= self.xtol {
                converged = true;
                break;
            }
            iterations += 1;
            let centroid: Vec<f64> = (0..k)
                .map(|j| simplex[..k].iter().map(|v| v[j]).sum::<f64>() / k as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                (0..k).map(|j| centroid[j] + t * (simplex[k][j] - centroid[j])).collect()
            };
            let xr = along(-1.0);
            let fr = eval(&xr);
            if fr < values[0] {
                let xe = along(-2.0);
                let fe = eval(&xe);
                if fe < fr {
                    simplex[k] = xe;
                    values[k] = fe;
                } else {
                    simplex[k] = xr;
                    values[k] = fr;
                }
                continue;
            }
            if fr < values[k - 1] {
                simplex[k] = xr;
                values[k] = fr;
                continue;
            }
            let (xc, fc) = if fr < values[k] {
                let xc = along(-0.5);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = along(0.5);
                let fc = eval(&xc);
                (xc, fc)
            };
            if fc < values[k].min(fr) {
                simplex[k] = xc;
                values[k] = fc;
                continue;
            }
            // Shrink towards the best vertex.
            for i in 1..=k {
                for j in 0..k {
                    simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                }
                values[i] = eval(&simplex[i]);
            }
        }
        let best = (0..=k).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
        Minimum { x: simplex[best].clone(), value: values[best], iterations, converged }
    }
}
