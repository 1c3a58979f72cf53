//! Nelder-Mead simplex minimization in a fixed, small dimension.

#[derive(Debug, Clone, Copy)]
pub(crate) struct Minimum<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    #[allow(dead_code)]
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct NelderMead {
    /// Stop once every vertex is within this distance of the best one.
    pub tol: f64,
    pub max_iters: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

impl NelderMead {
    /// Minimizes `f` from an axis-aligned simplex of edge `step` around `x0`.
    /// The best value never increases from one iteration to the next.
    pub fn minimize<const N: usize, F>(&self, f: F, x0: [f64; N], step: f64) -> Minimum<N>
    where
        F: Fn(&[f64; N]) -> f64,
    {
        let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
        simplex.push((x0, f(&x0)));
        for i in 0..N {
            let mut x = x0;
            x[i] += step;
            simplex.push((x, f(&x)));
        }

        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iters {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if diameter(&simplex) < self.tol {
                converged = true;
                break;
            }
            iterations += 1;

            let mut centroid = [0.0; N];
            for (x, _) in &simplex[..N] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / N as f64;
                }
            }
            let worst = simplex[N];
            let along = |t: f64| -> [f64; N] {
                let mut y = [0.0; N];
                for i in 0..N {
                    y[i] = centroid[i] + t * (worst.0[i] - centroid[i]);
                }
                y
            };

            let xr = along(-REFLECT);
            let fr = f(&xr);
            if fr < simplex[0].1 {
                let xe = along(-EXPAND);
                let fe = f(&xe);
                simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[N - 1].1 {
                simplex[N] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < worst.1 {
                let x = along(-CONTRACT);
                (x, f(&x))
            } else {
                let x = along(CONTRACT);
                (x, f(&x))
            };
            if fc < worst.1.min(fr) {
                simplex[N] = (xc, fc);
                continue;
            }
            let best = simplex[0].0;
            for (x, fx) in simplex.iter_mut().skip(1) {
                for i in 0..N {
                    x[i] = best[i] + SHRINK * (x[i] - best[i]);
                }
                *fx = f(x);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        Minimum {
            x: simplex[0].0,
            value: simplex[0].1,
            iterations,
            converged,
        }
    }
}

fn diameter<const N: usize>(simplex: &[([f64; N], f64)]) -> f64 {
    let best = &simplex[0].0;
    simplex[1..]
        .iter()
        .map(|(x, _)| {
            x.iter()
                .zip(best)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let nm = NelderMead {
            tol: 1e-10,
            max_iters: 5000,
        };
        let m = nm.minimize(
            |x: &[f64; 3]| (x[0] - 1.0).powi(2) + 2.0 * (x[1] + 0.5).powi(2) + (x[2] - 3.0).powi(2),
            [0.0; 3],
            0.5,
        );
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-8);
        assert!((m.x[1] + 0.5).abs() < 1e-8);
        assert!((m.x[2] - 3.0).abs() < 1e-8);
    }

    #[test]
    fn rosenbrock_2d() {
        let nm = NelderMead {
            tol: 1e-12,
            max_iters: 10_000,
        };
        let m = nm.minimize(
            |x: &[f64; 2]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            [-1.2, 1.0],
            0.3,
        );
        assert!(m.value < 1e-12, "{m:?}");
    }

    #[test]
    fn stops_at_iteration_cap() {
        let nm = NelderMead {
            tol: 0.0,
            max_iters: 7,
        };
        let m = nm.minimize(|x: &[f64; 2]| x[0] * x[0] + x[1] * x[1], [1.0, 1.0], 0.1);
        assert!(!m.converged);
        assert_eq!(m.iterations, 7);
    }
}
