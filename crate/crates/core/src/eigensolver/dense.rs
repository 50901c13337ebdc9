use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::EigenResult;
use crate::statevector::{LinearOperator, PauliString, PauliSum, StateVector};
use crate::{Error, Result};

/// Largest qubit count [`ground_dense`] accepts.
pub const DENSE_CAP: usize = 12;

/// Explicit `2^N x 2^N` matrix of a Pauli sum.
pub fn dense_matrix(terms: &[PauliString], num_qubits: usize) -> Result<DMatrix<C64>> {
    if num_qubits == 0 || num_qubits > DENSE_CAP {
        return Err(Error::TooManyQubits {
            requested: num_qubits,
            limit: DENSE_CAP,
            bytes: 16u128 << (2 * num_qubits),
        });
    }
    let dim = 1usize << num_qubits;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for t in terms {
        if t.num_qubits() != num_qubits {
            return Err(Error::invalid("term size does not match the requested qubit count"));
        }
        for col in 0..dim {
            let (row, phase) = t.act_on_basis(col);
            m[(row, col)] += phase * t.coeff();
        }
    }
    Ok(m)
}

/// Lowest eigenpair of the explicitly assembled Hamiltonian.
pub fn ground_dense(terms: &[PauliString], num_qubits: usize) -> Result<EigenResult> {
    let m = dense_matrix(terms, num_qubits)?;
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let e0 = eig.eigenvalues[order[0]];
    let near_degenerate = order
        .get(1)
        .is_some_and(|&k| eig.eigenvalues[k] - e0 < 1e-6 * (1.0 + e0.abs()));
    let amps: Vec<C64> = eig.eigenvectors.column(order[0]).iter().copied().collect();
    let mut vector = StateVector::from_amplitudes(amps)?;
    vector.normalize();

    let op = PauliSum::new(num_qubits, terms.to_vec())?;
    let residual = residual_norm(&op, &vector, e0);
    Ok(EigenResult {
        e0,
        vector: Some(vector),
        iterations: 1,
        residual,
        near_degenerate,
    })
}

pub(crate) fn residual_norm(op: &dyn LinearOperator, v: &StateVector, e: f64) -> f64 {
    let mut hv = vec![C64::new(0.0, 0.0); v.dim()];
    op.apply(v.amplitudes(), &mut hv);
    let r: f64 = hv
        .iter()
        .zip(v.amplitudes())
        .map(|(h, x)| (h - x * e).norm_sqr())
        .sum();
    r.sqrt() / v.norm_sqr().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::HeisenbergModel;
    use crate::statevector::Pauli;

    #[test]
    fn single_z() {
        let r = ground_dense(&[PauliString::single(1, 0, Pauli::Z, 1.0).unwrap()], 1).unwrap();
        assert!((r.e0 + 1.0).abs() < 1e-14);
        let v = r.vector.unwrap();
        assert!((v.amplitudes()[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singlet() {
        let m = HeisenbergModel::isotropic_ring(2).unwrap();
        let r = ground_dense(&m.terms(), 2).unwrap();
        assert!((r.e0 + 3.0).abs() < 1e-12);
        assert!(r.residual < 1e-12);
        assert!(!r.near_degenerate);
        let v = r.vector.unwrap();
        // (|01> - |10>)/sqrt 2 up to phase
        assert!(v.amplitudes()[0].norm() < 1e-12 && v.amplitudes()[3].norm() < 1e-12);
        assert!((v.amplitudes()[1] + v.amplitudes()[2]).norm() < 1e-12);
    }

    #[test]
    fn degeneracy_flag() {
        // Z on one qubit of two leaves the other free
        let r = ground_dense(&[PauliString::single(2, 0, Pauli::Z, 1.0).unwrap()], 2).unwrap();
        assert!(r.near_degenerate);
    }

    #[test]
    fn cap() {
        assert!(matches!(ground_dense(&[], 13), Err(Error::TooManyQubits { .. })));
    }
}
