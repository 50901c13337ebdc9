use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::statevector::{Bitstring, Pauli, PauliString, PauliSum};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub jxx: f64,
    pub jyy: f64,
    pub jzz: f64,
}

/// `H = sum_edges (Jxx X_i X_j + Jyy Y_i Y_j + Jzz Z_i Z_j)` in Pauli units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergModel {
    num_spins: usize,
    edges: Vec<Coupling>,
}

impl HeisenbergModel {
    pub fn new(num_spins: usize, edges: Vec<Coupling>) -> Result<Self> {
        if num_spins < 2 {
            return Err(Error::invalid("Heisenberg model needs at least two spins"));
        }
        let mut seen = BTreeSet::new();
        for e in &edges {
            if e.i == e.j || e.i >= num_spins || e.j >= num_spins {
                return Err(Error::invalid(format!(
                    "bad edge ({}, {}) for {num_spins} spins",
                    e.i, e.j
                )));
            }
            if !seen.insert((e.i.min(e.j), e.i.max(e.j))) {
                return Err(Error::invalid(format!("duplicate edge ({}, {})", e.i, e.j)));
            }
        }
        Ok(Self { num_spins, edges })
    }

    /// Open chain `(i, i+1)` for `i < N-1`.
    pub fn chain(num_spins: usize, jxx: f64, jyy: f64, jzz: f64) -> Result<Self> {
        let edges = (0..num_spins.saturating_sub(1))
            .map(|i| Coupling { i, j: i + 1, jxx, jyy, jzz })
            .collect();
        Self::new(num_spins, edges)
    }

    pub fn isotropic_ring(num_spins: usize) -> Result<Self> {
        heisenberg_ring(num_spins, 1.0, 1.0, 1.0)
    }

    pub fn num_spins(&self) -> usize {
        self.num_spins
    }

    pub fn edges(&self) -> &[Coupling] {
        &self.edges
    }

    /// One Pauli string per nonzero coupling component.
    pub fn terms(&self) -> Vec<PauliString> {
        let n = self.num_spins;
        self.edges
            .iter()
            .flat_map(|e| {
                [(Pauli::X, e.jxx), (Pauli::Y, e.jyy), (Pauli::Z, e.jzz)]
                    .into_iter()
                    .filter(|(_, c)| *c != 0.0)
                    .map(move |(p, c)| {
                        PauliString::new(n, [(e.i, p), (e.j, p)], c).expect("validated edge")
                    })
            })
            .collect()
    }

    pub fn hamiltonian(&self) -> PauliSum {
        PauliSum::new(self.num_spins, self.terms()).expect("terms share the spin count")
    }

    /// `<x|H|x>` for a basis state: only the `Z Z` parts contribute.
    pub fn basis_energy(&self, x: &Bitstring) -> Result<f64> {
        x.expect_len(self.num_spins)?;
        Ok(self
            .edges
            .iter()
            .map(|e| if x.bit(e.i) == x.bit(e.j) { e.jzz } else { -e.jzz })
            .sum())
    }
}

/// Periodic ring with edges `(i, i+1 mod N)`; `N = 2` gives a single edge.
pub fn heisenberg_ring(num_spins: usize, jxx: f64, jyy: f64, jzz: f64) -> Result<HeisenbergModel> {
    if num_spins < 2 {
        return Err(Error::invalid("ring needs at least two spins"));
    }
    let count = if num_spins == 2 { 1 } else { num_spins };
    let edges = (0..count)
        .map(|i| Coupling {
            i,
            j: (i + 1) % num_spins,
            jxx,
            jyy,
            jzz,
        })
        .collect();
    HeisenbergModel::new(num_spins, edges)
}

/// Alternating product state with the even-indexed qubits set to 1.
pub fn neel_state(num_spins: usize) -> Result<Bitstring> {
    let bits: Vec<bool> = (0..num_spins).map(|j| j % 2 == 0).collect();
    Bitstring::from_bits(&bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::StateVector;

    #[test]
    fn ring_edges() {
        let r = HeisenbergModel::isotropic_ring(4).unwrap();
        assert_eq!(r.edges().len(), 4);
        assert!(r
            .edges()
            .iter()
            .all(|e| e.jxx == 1.0 && e.jyy == 1.0 && e.jzz == 1.0));
        let r = HeisenbergModel::isotropic_ring(2).unwrap();
        assert_eq!(r.edges().len(), 1);
        assert_eq!((r.edges()[0].i, r.edges()[0].j), (0, 1));
        assert_eq!(HeisenbergModel::chain(5, 1.0, 1.0, 1.0).unwrap().edges().len(), 4);
    }

    #[test]
    fn terms_skip_zero_couplings() {
        let one = heisenberg_ring(2, 1.0, 1.0, 1.0).unwrap().terms();
        assert_eq!(one.len(), 3);
        assert!(one.iter().all(|t| t.coeff() == 1.0));
        assert_eq!(heisenberg_ring(2, 1.0, 0.0, 1.0).unwrap().terms().len(), 2);
    }

    #[test]
    fn validation() {
        let e = |i, j| Coupling { i, j, jxx: 1.0, jyy: 1.0, jzz: 1.0 };
        assert!(HeisenbergModel::new(3, vec![e(0, 0)]).is_err());
        assert!(HeisenbergModel::new(3, vec![e(0, 3)]).is_err());
        assert!(HeisenbergModel::new(3, vec![e(0, 1), e(1, 0)]).is_err());
    }

    #[test]
    fn neel() {
        let s = neel_state(4).unwrap();
        assert_eq!(s.bits(), vec![true, false, true, false]);
        let s = neel_state(2).unwrap();
        assert!(s.bit(0) && !s.bit(1));
    }

    #[test]
    fn neel_energy() {
        for n in [4, 6, 8, 12] {
            let m = HeisenbergModel::isotropic_ring(n).unwrap();
            let neel = neel_state(n).unwrap();
            assert_eq!(m.basis_energy(&neel).unwrap(), -(n as f64));
            let s = StateVector::basis(n, neel).unwrap();
            assert!((s.expectation(&m.terms()).unwrap() + n as f64).abs() < 1e-12);
        }
        // an odd ring has one frustrated bond
        let m = HeisenbergModel::isotropic_ring(7).unwrap();
        assert_eq!(m.basis_energy(&neel_state(7).unwrap()).unwrap(), -5.0);
    }

    #[test]
    fn singlet_energy() {
        let m = HeisenbergModel::isotropic_ring(2).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let z = num_complex::Complex64::new(0.0, 0.0);
        let singlet = StateVector::from_amplitudes(vec![
            z,
            num_complex::Complex64::new(r, 0.0),
            num_complex::Complex64::new(-r, 0.0),
            z,
        ])
        .unwrap();
        assert!((singlet.expectation(&m.terms()).unwrap() + 3.0).abs() < 1e-12);
    }
}
