//! Dense-matrix oracles built from Kronecker products, independent of the
//! simulator's matrix-free kernels.
#![allow(dead_code)]

pub mod oracle_suite;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varqsim::statevector::{Pauli, PauliString, StateVector};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli_2x2(p: Option<Pauli>) -> DMatrix<C64> {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let v = match p {
        None => [l, o, o, l],
        Some(Pauli::X) => [o, l, l, o],
        Some(Pauli::Y) => [o, -i, i, o],
        Some(Pauli::Z) => [l, o, o, -l],
    };
    DMatrix::from_row_slice(2, 2, &v)
}

/// `A_{N-1} (x) ... (x) A_0`, so that qubit `j` is bit `j` of the row index.
pub fn kron_qubits(n: usize, local: impl Fn(usize) -> DMatrix<C64>) -> DMatrix<C64> {
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for j in (0..n).rev() {
        m = m.kronecker(&local(j));
    }
    m
}

pub fn pauli_matrix(p: &PauliString) -> DMatrix<C64> {
    let f = p.factors().to_vec();
    let m = kron_qubits(p.num_qubits(), |j| {
        pauli_2x2(f.iter().find(|(q, _)| *q == j).map(|(_, p)| *p))
    });
    m * c(p.coeff(), 0.0)
}

pub fn sum_matrix(n: usize, terms: &[PauliString]) -> DMatrix<C64> {
    terms
        .iter()
        .fold(DMatrix::zeros(1 << n, 1 << n), |acc, t| acc + pauli_matrix(t))
}

pub fn single_qubit_matrix(n: usize, j: usize, u: [[C64; 2]; 2]) -> DMatrix<C64> {
    kron_qubits(n, |q| {
        if q == j {
            DMatrix::from_row_slice(2, 2, &[u[0][0], u[0][1], u[1][0], u[1][1]])
        } else {
            pauli_2x2(None)
        }
    })
}

/// `exp(-i t H)` for Hermitian `H`, by eigendecomposition.
pub fn expm_hermitian(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let eig = h.clone().symmetric_eigen();
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(
        h.nrows(),
        eig.eigenvalues.iter().map(|&l| C64::from_polar(1.0, -t * l)),
    ));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

pub fn lowest_eigenvalue(h: &DMatrix<C64>) -> f64 {
    h.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn to_dvector(s: &StateVector) -> DVector<C64> {
    DVector::from_column_slice(s.amplitudes())
}

pub fn max_diff(a: &DVector<C64>, s: &StateVector) -> f64 {
    a.iter()
        .zip(s.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn random_state(n: usize, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..1usize << n)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let mut s = StateVector::from_amplitudes(amps).unwrap();
    s.normalize();
    s
}

pub fn random_pauli_string(n: usize, rng: &mut ChaCha8Rng) -> PauliString {
    loop {
        let factors: Vec<(usize, Pauli)> = (0..n)
            .filter_map(|q| match rng.random_range(0..4) {
                0 => None,
                1 => Some((q, Pauli::X)),
                2 => Some((q, Pauli::Y)),
                _ => Some((q, Pauli::Z)),
            })
            .collect();
        if !factors.is_empty() {
            return PauliString::new(n, factors, rng.random_range(-2.0..2.0)).unwrap();
        }
    }
}

/// Central differences at step `h`.
pub fn finite_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut p = x.to_vec();
    (0..x.len())
        .map(|i| {
            p[i] = x[i] + h;
            let up = f(&p);
            p[i] = x[i] - h;
            let down = f(&p);
            p[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// `sum_f (sum_i A_if x_i - 1)^2` straight from the definition.
pub fn cover_cost_oracle(rows: &[Vec<bool>], x: usize) -> u64 {
    let flights = rows[0].len();
    (0..flights)
        .map(|f| {
            let covered = rows
                .iter()
                .enumerate()
                .filter(|(i, r)| r[f] && (x >> i) & 1 == 1)
                .count() as i64;
            ((covered - 1) * (covered - 1)) as u64
        })
        .sum()
}
