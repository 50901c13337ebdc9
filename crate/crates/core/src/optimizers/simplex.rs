use serde::{Deserialize, Serialize};

use super::{OptError, OptResult, Tracker};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexOptions {
    pub max_evals: usize,
    /// Stop once `f(worst) - f(best)` over the simplex falls below this.
    pub ftol: f64,
    /// ... and every vertex lies within this distance (max norm) of the best.
    pub xtol: f64,
    /// Per-coordinate displacement of the initial simplex.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_evals: 200,
            ftol: 1e-10,
            xtol: 1e-8,
            initial_step: 0.05,
        }
    }
}

/// Nelder-Mead with the standard coefficients (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2).
pub fn minimize_simplex(
    f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    opts: &SimplexOptions,
) -> Result<OptResult, OptError> {
    let mut t = Tracker::new(f, opts.max_evals, x0)?;
    let n = x0.len();

    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut vals: Vec<f64> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut p = x0.to_vec();
        if i > 0 {
            p[i - 1] += opts.initial_step;
        }
        match t.eval(&p)? {
            Some(v) => {
                pts.push(p);
                vals.push(v);
            }
            None => return Ok(t.finish(false)),
        }
    }

    macro_rules! eval_or_stop {
        ($x:expr) => {
            match t.eval(&$x)? {
                Some(v) => v,
                None => return Ok(t.finish(false)),
            }
        };
    }

    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let x_spread = pts[1..]
            .iter()
            .flat_map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if vals[n] - vals[0] < opts.ftol && x_spread < opts.xtol {
            return Ok(t.finish(true));
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| pts[..n].iter().map(|p| p[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&pts[n])
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let xr = along(1.0);
        let fr = eval_or_stop!(xr);
        if fr < vals[0] {
            let xe = along(2.0);
            let fe = eval_or_stop!(xe);
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
            continue;
        }

        let (xc, accept) = if fr < vals[n] {
            let xc = along(0.5);
            let fc = eval_or_stop!(xc);
            (xc, (fc <= fr).then_some(fc))
        } else {
            let xc = along(-0.5);
            let fc = eval_or_stop!(xc);
            (xc, (fc < vals[n]).then_some(fc))
        };
        if let Some(fc) = accept {
            pts[n] = xc;
            vals[n] = fc;
            continue;
        }

        for i in 1..=n {
            let shrunk: Vec<f64> = pts[0]
                .iter()
                .zip(&pts[i])
                .map(|(b, p)| b + 0.5 * (p - b))
                .collect();
            vals[i] = eval_or_stop!(shrunk);
            pts[i] = shrunk;
        }
    }
}
