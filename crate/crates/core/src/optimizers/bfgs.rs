use serde::{Deserialize, Serialize};

use super::{OptError, OptResult, Tracker};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BfgsOptions {
    pub max_evals: usize,
    /// Converged once the largest gradient component is below this.
    pub gtol: f64,
    pub max_backtracks: usize,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self {
            max_evals: 200,
            gtol: 1e-6,
            max_backtracks: 40,
        }
    }
}

/// How BFGS obtains gradients.
pub enum Gradient<'a> {
    /// Central differences with step `1e-6 max(1, |x_i|)`; each component
    /// costs two objective calls.
    FiniteDifference,
    /// A caller-supplied gradient that is charged `cost` budget units per call.
    Analytic {
        eval: Box<dyn FnMut(&[f64]) -> Vec<f64> + 'a>,
        cost: usize,
    },
}

impl<'a> Gradient<'a> {
    pub fn analytic(eval: impl FnMut(&[f64]) -> Vec<f64> + 'a, cost: usize) -> Self {
        Gradient::Analytic {
            eval: Box::new(eval),
            cost,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn gradient_at<F: FnMut(&[f64]) -> f64>(
    t: &mut Tracker<F>,
    mode: &mut Gradient<'_>,
    x: &[f64],
) -> Result<Option<Vec<f64>>, OptError> {
    match mode {
        Gradient::FiniteDifference => {
            if t.remaining() < 2 * x.len() {
                return Ok(None);
            }
            let mut g = vec![0.0; x.len()];
            let mut probe = x.to_vec();
            for i in 0..x.len() {
                let h = 1e-6 * x[i].abs().max(1.0);
                probe[i] = x[i] + h;
                let up = t.eval(&probe)?.expect("budget checked");
                probe[i] = x[i] - h;
                let down = t.eval(&probe)?.expect("budget checked");
                probe[i] = x[i];
                g[i] = (up - down) / (2.0 * h);
            }
            Ok(Some(g))
        }
        Gradient::Analytic { eval, cost } => {
            if !t.charge(*cost) {
                return Ok(None);
            }
            let g = eval(x);
            if g.len() != x.len() {
                return Err(OptError::Invalid(format!(
                    "gradient has {} components for {} parameters",
                    g.len(),
                    x.len()
                )));
            }
            Ok(Some(g))
        }
    }
}

/// Quasi-Newton minimisation with BFGS inverse-Hessian updates and an Armijo
/// backtracking line search.
///
/// A failed line search first resets the inverse Hessian to the identity; a
/// second consecutive failure returns the best point with `converged = false`.
pub fn minimize_bfgs(
    f: impl FnMut(&[f64]) -> f64,
    mut gradient: Gradient<'_>,
    x0: &[f64],
    opts: &BfgsOptions,
) -> Result<OptResult, OptError> {
    let mut t = Tracker::new(f, opts.max_evals, x0)?;
    let n = x0.len();

    let mut x = x0.to_vec();
    let Some(mut fx) = t.eval(&x)? else {
        return Ok(t.finish(false));
    };
    let Some(mut g) = gradient_at(&mut t, &mut gradient, &x)? else {
        return Ok(t.finish(false));
    };
    let identity = |scale: f64| -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { scale } else { 0.0 }).collect())
            .collect()
    };
    let mut hinv = identity(1.0);
    let mut fresh_hessian = true;
    let mut first_step = true;

    loop {
        if inf_norm(&g) < opts.gtol {
            return Ok(t.finish(true));
        }

        let mut p: Vec<f64> = hinv.iter().map(|row| -dot(row, &g)).collect();
        let mut slope = dot(&g, &p);
        if slope >= 0.0 {
            hinv = identity(1.0);
            fresh_hessian = true;
            p = g.iter().map(|v| -v).collect();
            slope = dot(&g, &p);
        }

        let mut alpha = if first_step { 1.0 / inf_norm(&g).max(1.0) } else { 1.0 };
        let mut accepted = None;
        for _ in 0..opts.max_backtracks {
            let trial: Vec<f64> = x.iter().zip(&p).map(|(xi, pi)| xi + alpha * pi).collect();
            let Some(ft) = t.eval(&trial)? else {
                return Ok(t.finish(false));
            };
            if ft <= fx + 1e-4 * alpha * slope {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }

        let Some((x_new, f_new)) = accepted else {
            if fresh_hessian {
                return Ok(t.finish(false));
            }
            hinv = identity(1.0);
            fresh_hessian = true;
            continue;
        };

        let Some(g_new) = gradient_at(&mut t, &mut gradient, &x_new)? else {
            return Ok(t.finish(false));
        };
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if fresh_hessian {
                hinv = identity(sy / dot(&y, &y));
            }
            // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
            let rho = 1.0 / sy;
            let hy: Vec<f64> = hinv.iter().map(|row| dot(row, &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..n {
                for j in 0..n {
                    hinv[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j])
                        + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
            fresh_hessian = false;
        }
        first_step = false;
        x = x_new;
        fx = f_new;
        g = g_new;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    #[test]
    fn quadratic_bowl() {
        let r = minimize_bfgs(
            |x| x[0] * x[0] + 3.0 * x[1] * x[1],
            Gradient::FiniteDifference,
            &[1.0, 1.0],
            &BfgsOptions {
                max_evals: 50,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(r.converged, "{r:?}");
        assert!(r.evals < 50);
        assert!(r.best_value < 1e-10);
    }

    #[test]
    fn rosenbrock_from_standard_start() {
        let r = minimize_bfgs(
            rosenbrock,
            Gradient::FiniteDifference,
            &[-1.2, 1.0],
            &BfgsOptions {
                max_evals: 500,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(r.best_value < 1e-4, "{}", r.best_value);
        assert!(r.evals <= 500);
    }

    #[test]
    fn analytic_gradient_is_charged() {
        let mut calls = 0;
        let r = minimize_bfgs(
            |x| (x[0] - 1.0).powi(2),
            Gradient::analytic(
                |x| {
                    calls += 1;
                    vec![2.0 * (x[0] - 1.0)]
                },
                3,
            ),
            &[4.0],
            &BfgsOptions::default(),
        )
        .unwrap();
        assert!(r.converged);
        assert_eq!(r.evals, r.history.len() + 3 * calls);
    }

    #[test]
    fn budget_respected_with_gradients() {
        for max in [1, 2, 3, 4, 7, 13] {
            let r = minimize_bfgs(
                rosenbrock,
                Gradient::FiniteDifference,
                &[-1.2, 1.0],
                &BfgsOptions {
                    max_evals: max,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!(r.evals <= max);
            assert!(!r.converged);
        }
    }

    #[test]
    fn wrong_gradient_length() {
        let err = minimize_bfgs(
            |x| x[0] * x[0],
            Gradient::analytic(|_| vec![0.0, 0.0], 1),
            &[1.0],
            &BfgsOptions::default(),
        );
        assert!(matches!(err, Err(OptError::Invalid(_))));
    }
}
