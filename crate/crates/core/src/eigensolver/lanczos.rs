use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::dense::residual_norm;
use super::EigenResult;
use crate::statevector::{check_qubits, LinearOperator, StateVector};
use crate::{Error, Result};

/// Default memory allowed for stored Krylov vectors.
pub const DEFAULT_BASIS_BYTES: usize = 1 << 30;

const BREAKDOWN: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct LanczosConfig {
    /// Convergence threshold on `||H v - e0 v||`.
    pub tol: f64,
    /// Maximum number of operator applications.
    pub max_iter: usize,
    pub seed: u64,
    /// Krylov vectors kept per restart cycle; derived from
    /// [`DEFAULT_BASIS_BYTES`] when `None`.
    pub max_basis: Option<usize>,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 500,
            seed: 0,
            max_basis: None,
        }
    }
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(y: &mut [C64], alpha: C64, x: &[C64]) {
    y.iter_mut().zip(x).for_each(|(y, x)| *y += alpha * x);
}

fn orthogonalize(w: &mut [C64], basis: &[Vec<C64>]) {
    // two Gram-Schmidt passes keep the basis orthogonal to working precision
    for _ in 0..2 {
        for v in basis {
            let c = dot(v, w);
            axpy(w, -c, v);
        }
    }
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim)
        .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let n = norm(&v);
    v.iter_mut().for_each(|x| *x /= n);
    v
}

/// Lowest two eigenpairs of the tridiagonal matrix `(alpha, beta)`.
fn tridiag_lowest(alpha: &[f64], beta: &[f64]) -> (f64, Option<f64>, Vec<f64>) {
    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let y = eig.eigenvectors.column(order[0]).iter().copied().collect();
    (
        eig.eigenvalues[order[0]],
        order.get(1).map(|&i| eig.eigenvalues[i]),
        y,
    )
}

/// Matrix-free Lanczos for the lowest eigenvalue of a Hermitian operator.
///
/// Each cycle builds a Krylov basis of at most `max_basis` vectors with full
/// reorthogonalisation, then restarts from the current Ritz vector. A
/// breakdown (`beta < 1e-14`) continues the cycle from a fresh random vector
/// orthogonal to the basis. The start vector is a seeded complex Gaussian.
pub fn ground_lanczos(op: &dyn LinearOperator, cfg: &LanczosConfig) -> Result<EigenResult> {
    let n = op.num_qubits();
    check_qubits(n)?;
    if cfg.tol <= 0.0 || cfg.max_iter == 0 {
        return Err(Error::invalid("Lanczos needs tol > 0 and max_iter >= 1"));
    }
    let dim = op.dim();
    let bytes_per_vec = 16 * dim;
    let max_basis = cfg
        .max_basis
        .unwrap_or((DEFAULT_BASIS_BYTES / bytes_per_vec).clamp(8, 200))
        .clamp(2, dim.max(2));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut start = random_unit(dim, &mut rng);
    let mut iterations = 0;
    let mut w = vec![C64::new(0.0, 0.0); dim];

    loop {
        let mut basis: Vec<Vec<C64>> = vec![start];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut ritz;

        loop {
            let j = basis.len() - 1;
            op.apply(&basis[j], &mut w);
            iterations += 1;
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            orthogonalize(&mut w, &basis);
            let b = norm(&w);
            ritz = tridiag_lowest(&alpha, &beta);
            let estimate = b * ritz.2.last().unwrap().abs();
            if estimate < cfg.tol * 0.1
                || basis.len() >= max_basis
                || basis.len() >= dim
                || iterations >= cfg.max_iter
            {
                break;
            }
            if b < BREAKDOWN {
                let mut fresh = random_unit(dim, &mut rng);
                orthogonalize(&mut fresh, &basis);
                let fn_ = norm(&fresh);
                fresh.iter_mut().for_each(|x| *x /= fn_);
                beta.push(0.0);
                basis.push(fresh);
            } else {
                beta.push(b);
                basis.push(w.iter().map(|x| x / b).collect());
            }
        }

        let (e0, next, y) = ritz;
        let mut x = vec![C64::new(0.0, 0.0); dim];
        for (coef, v) in y.iter().zip(&basis) {
            axpy(&mut x, C64::new(*coef, 0.0), v);
        }
        drop(basis);
        let xn = norm(&x);
        x.iter_mut().for_each(|v| *v /= xn);
        let vector = StateVector::from_amplitudes(x)?;
        let residual = residual_norm(op, &vector, e0);
        iterations += 1;

        let converged = residual < cfg.tol;
        let result = EigenResult {
            e0,
            residual,
            iterations,
            near_degenerate: next.is_some_and(|e1| e1 - e0 < 1e-6 * (1.0 + e0.abs())),
            vector: Some(vector),
        };
        if converged {
            return Ok(result);
        }
        if iterations >= cfg.max_iter {
            return Err(Error::NotConverged {
                best: Box::new(result),
            });
        }
        start = result.vector.expect("set above").into_amplitudes();
    }
}
