//! Oracle checks shared by the `oracles` tests and the acceptance runner.
//! Each check panics on the first violation.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varqsim::partitioned::random_circuit;
use varqsim::problems::{neel_state, CoverGenerator, ExactCoverInstance, HeisenbergModel, IsingModel};
use varqsim::statevector::circuit::Diagonal;
use varqsim::statevector::{Bitstring, Pauli, PauliString, SingleQubitGate, StateVector};
use varqsim::variational::{qaoa_circuit, qaoa_energy, qaoa_state, QaoaAngles};
use varqsim::vqe::{build_ansatz, random_theta, vqe_energy};

use super::*;

const DENSE_TOL: f64 = 1e-10;

fn random_ising(n: usize, rng: &mut ChaCha8Rng) -> IsingModel {
    let h = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    let mut couplings = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(0.6) {
                couplings.push(((i, j), rng.random_range(-2.0..2.0)));
            }
        }
    }
    IsingModel::new(h, couplings, rng.random_range(-1.0..1.0)).unwrap()
}

/// `sum h_i Z_i + sum J_ij Z_i Z_j` assembled from 2x2 blocks.
fn ising_matrix(m: &IsingModel) -> DMatrix<C64> {
    let n = m.num_qubits();
    let z_on = |qs: &[usize]| {
        kron_qubits(n, |q| pauli_2x2(qs.contains(&q).then_some(Pauli::Z)))
    };
    let mut h = DMatrix::zeros(1 << n, 1 << n);
    for (i, &hi) in m.fields().iter().enumerate() {
        h += z_on(&[i]) * c(hi, 0.0);
    }
    for (&(i, j), &jij) in m.couplings() {
        h += z_on(&[i, j]) * c(jij, 0.0);
    }
    h
}

/// Isotropic ring `sum_i X_i X_{i+1} + Y_i Y_{i+1} + Z_i Z_{i+1}`.
fn ring_matrix(n: usize) -> DMatrix<C64> {
    let edges: Vec<(usize, usize)> = if n == 2 {
        vec![(0, 1)]
    } else {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    };
    let mut h = DMatrix::zeros(1 << n, 1 << n);
    for (i, j) in edges {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            h += kron_qubits(n, |q| pauli_2x2((q == i || q == j).then_some(p)));
        }
    }
    h
}

pub fn single_qubit_gates_match_kronecker_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=6 {
        let mut s = random_state(n, n as u64);
        let mut v = to_dvector(&s);
        for _ in 0..30 {
            let j = rng.random_range(0..n);
            let a = rng.random_range(-4.0..4.0);
            let g = match rng.random_range(0..7) {
                0 => SingleQubitGate::hadamard(),
                1 => SingleQubitGate::pauli_x(),
                2 => SingleQubitGate::pauli_y(),
                3 => SingleQubitGate::pauli_z(),
                4 => SingleQubitGate::rx(a),
                5 => SingleQubitGate::ry(a),
                _ => SingleQubitGate::rz(a),
            };
            s.apply_single_qubit(j, &g).unwrap();
            v = single_qubit_matrix(n, j, g.matrix()) * v;
            assert!(max_diff(&v, &s) < 1e-12, "n={n} qubit={j}");
        }
    }
}

pub fn rotation_gates_match_their_matrix_definitions() {
    // R^x(phi) = exp(-i phi X / 2), and likewise for y and z
    for (p, g) in [
        (Pauli::X, SingleQubitGate::rx as fn(f64) -> SingleQubitGate),
        (Pauli::Y, SingleQubitGate::ry),
        (Pauli::Z, SingleQubitGate::rz),
    ] {
        for phi in [-2.3, 0.0, 0.7, 3.0] {
            let u = expm_hermitian(&pauli_2x2(Some(p)), phi / 2.0);
            let m = g(phi).matrix();
            for r in 0..2 {
                for k in 0..2 {
                    assert!((u[(r, k)] - m[r][k]).norm() < 1e-12, "{p:?} {phi}");
                }
            }
        }
    }
}

pub fn pauli_rotations_match_matrix_exponentials() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 1..=6 {
        for trial in 0..20 {
            let p = random_pauli_string(n, &mut rng);
            let theta = rng.random_range(-3.5..3.5);
            let mut s = random_state(n, 100 + trial);
            let expected = expm_hermitian(&pauli_matrix(&p), theta) * to_dvector(&s);
            s.apply_pauli_rotation(&p, theta).unwrap();
            assert!(max_diff(&expected, &s) < 1e-12, "{p:?}");
        }
    }
}

pub fn expectation_values_match_dense_quadratic_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=6 {
        let terms: Vec<PauliString> = (0..6).map(|_| random_pauli_string(n, &mut rng)).collect();
        let h = sum_matrix(n, &terms);
        let s = random_state(n, 7 * n as u64);
        let v = to_dvector(&s);
        let dense = (v.adjoint() * &h * &v)[(0, 0)];
        assert!(dense.im.abs() < 1e-12);
        assert!((s.expectation(&terms).unwrap() - dense.re).abs() < 1e-12);
    }
}

pub fn qaoa_states_match_dense_evolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 1..=6 {
        let m = random_ising(n, &mut rng);
        let hc = ising_matrix(&m);
        // driver -sum_j X_j
        let hd = -(0..n)
            .map(|j| kron_qubits(n, |q| pauli_2x2((q == j).then_some(Pauli::X))))
            .fold(DMatrix::zeros(1 << n, 1 << n), |a, b| a + b);
        for p in 1..=3 {
            let betas: Vec<f64> = (0..p).map(|_| rng.random_range(-1.5..1.5)).collect();
            let gammas: Vec<f64> = (0..p).map(|_| rng.random_range(-1.5..1.5)).collect();
            let angles = QaoaAngles::new(betas.clone(), gammas.clone()).unwrap();

            let mut v = to_dvector(&StateVector::plus(n).unwrap());
            for k in 0..p {
                v = expm_hermitian(&hc, gammas[k]) * v;
                v = expm_hermitian(&hd, betas[k]) * v;
            }
            let s = qaoa_state(&m, &angles).unwrap();
            assert!(max_diff(&v, &s) < DENSE_TOL, "n={n} p={p}");

            let gates = qaoa_circuit(&m, p)
                .unwrap()
                .prepare(&StateVector::plus(n).unwrap(), &angles.to_params())
                .unwrap();
            assert!(max_diff(&v, &gates) < DENSE_TOL, "gate path n={n} p={p}");

            let e = (v.adjoint() * &hc * &v)[(0, 0)].re;
            assert!((qaoa_energy(&m, &angles).unwrap() - e).abs() < DENSE_TOL);
        }
    }
}

/// The ansatz written as a literal left-to-right matrix product of
/// `U_pq = exp(-i theta_pq Y_p X_q [Z_N])` over 1-based labels, the
/// rightmost factor acting first; parameter `j` belongs to the `j`-th factor
/// to act on the state.
fn ansatz_matrix(n: usize, theta: &[f64]) -> DMatrix<C64> {
    let mut written: Vec<(usize, usize)> = Vec::new();
    for swap in [true, false] {
        for l in (1..n).rev() {
            for k in (l + 1..=n).rev() {
                written.push(if swap { (l, k) } else { (k, l) });
            }
        }
    }
    let param: HashMap<(usize, usize), f64> = written
        .iter()
        .rev()
        .enumerate()
        .map(|(j, &pq)| (pq, theta[j]))
        .collect();
    let mut u = kron_qubits(n, |_| pauli_2x2(None));
    for &(p, q) in &written {
        let gen = kron_qubits(n, |site| {
            let label = site + 1;
            pauli_2x2(if label == p {
                Some(Pauli::Y)
            } else if label == q {
                Some(Pauli::X)
            } else if label == n {
                Some(Pauli::Z)
            } else {
                None
            })
        });
        u *= expm_hermitian(&gen, param[&(p, q)]);
    }
    u
}

pub fn ansatz_matches_literal_matrix_product() {
    for n in 2..=6 {
        let ansatz = build_ansatz(n).unwrap();
        assert_eq!(ansatz.num_params(), n * (n - 1));
        let theta = random_theta(ansatz.num_params(), n as u64);
        let u = ansatz_matrix(n, &theta);
        for initial in [
            StateVector::basis(n, neel_state(n).unwrap()).unwrap(),
            random_state(n, 50 + n as u64),
        ] {
            let expected = &u * to_dvector(&initial);
            let got = ansatz.prepare(&initial, &theta).unwrap();
            assert!(max_diff(&expected, &got) < DENSE_TOL, "n={n}");
        }
    }
}

pub fn cover_cost_equals_ising_cost_exhaustively() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0usize;
    for n in 1..=12 {
        for trial in 0..4u64 {
            let flights = rng.random_range(1..=8);
            let inst = if trial % 2 == 0 {
                CoverGenerator::new(n, flights).generate(trial + 10 * n as u64).map(|p| p.instance)
            } else {
                let rows = (0..n)
                    .map(|_| (0..flights).map(|_| rng.random_bool(0.4)).collect())
                    .collect();
                ExactCoverInstance::new(rows)
            };
            let Ok(inst) = inst else { continue };
            let model = inst.to_ising();
            for x in 0..1usize << n {
                let expected = cover_cost_oracle(inst.rows(), x);
                let bits = Bitstring::from_index(n, x).unwrap();
                assert_eq!(inst.cost(&bits).unwrap(), expected);
                assert_eq!(model.cost(&bits).unwrap(), expected as f64, "n={n} x={x}");
                checked += 1;
            }
        }
    }
    assert!(checked > 8000);
}

pub fn variational_energies_never_undercut_the_ground_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 2..=6 {
        let e0 = lowest_eigenvalue(&ring_matrix(n));
        let model = HeisenbergModel::isotropic_ring(n).unwrap();
        let ansatz = build_ansatz(n).unwrap();
        for trial in 0..40u64 {
            let theta = random_theta(ansatz.num_params(), trial);
            let initial = if trial % 2 == 0 {
                StateVector::basis(n, neel_state(n).unwrap()).unwrap()
            } else {
                random_state(n, trial)
            };
            let e = vqe_energy(&model, &ansatz, &theta, &initial).unwrap();
            assert!(e >= e0 - 1e-9, "n={n}: {e} < {e0}");
        }
    }
    for n in 1..=6 {
        let m = random_ising(n, &mut rng);
        let emin = m.ground_states().unwrap().energy;
        for _ in 0..40 {
            let p = rng.random_range(1..=4);
            let a = QaoaAngles::new(
                (0..p).map(|_| rng.random_range(-3.0..3.0)).collect(),
                (0..p).map(|_| rng.random_range(-3.0..3.0)).collect(),
            )
            .unwrap();
            assert!(qaoa_energy(&m, &a).unwrap() >= emin - 1e-9);
        }
    }
}

pub fn circuit_gradients_agree_with_finite_differences() {
    for n in 2..=5 {
        let model = HeisenbergModel::isotropic_ring(n).unwrap();
        let h = model.hamiltonian();
        let ansatz = build_ansatz(n).unwrap();
        let circuit = ansatz.circuit();
        let initial = random_state(n, 70 + n as u64);
        let theta = random_theta(ansatz.num_params(), 80 + n as u64);
        let fd = finite_difference(|x| circuit.energy(&initial, x, &h).unwrap(), &theta, 1e-5);
        let (_, adjoint) = circuit.adjoint_gradient(&initial, &theta, &h).unwrap();
        let shift = circuit.parameter_shift_gradient(&initial, &theta, &h).unwrap();
        for i in 0..theta.len() {
            assert!((adjoint[i] - fd[i]).abs() < 1e-5, "adjoint n={n} i={i}");
            assert!((shift[i] - fd[i]).abs() < 1e-5, "shift n={n} i={i}");
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 2..=5 {
        let m = random_ising(n, &mut rng);
        let obs = Diagonal::new(m.diagonal().unwrap()).unwrap();
        let circuit = qaoa_circuit(&m, 3).unwrap();
        let plus = StateVector::plus(n).unwrap();
        let x: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
        let fd = finite_difference(|x| circuit.energy(&plus, x, &obs).unwrap(), &x, 1e-5);
        let (_, adjoint) = circuit.adjoint_gradient(&plus, &x, &obs).unwrap();
        let shift = circuit.parameter_shift_gradient(&plus, &x, &obs).unwrap();
        for i in 0..x.len() {
            assert!((adjoint[i] - fd[i]).abs() < 1e-5, "qaoa adjoint n={n} i={i}");
            assert!((shift[i] - fd[i]).abs() < 1e-5, "qaoa shift n={n} i={i}");
        }
    }
}

pub fn norm_is_conserved_over_long_circuits() {
    for n in [1, 3, 6, 9, 12] {
        let mut s = random_state(n, n as u64);
        for (k, op) in random_circuit(n, 500, 3, 200 + n as u64).iter().enumerate() {
            op.apply(&mut s).unwrap();
            if k % 50 == 49 {
                assert!((s.norm_sqr() - 1.0).abs() < 1e-10, "n={n} after {k} gates");
            }
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }
}
