use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::statevector::{check_qubits, circuit::Diagonal, Bitstring, Pauli, PauliString};
use crate::{Error, Result};

/// Largest model [`IsingModel::ground_states`] will enumerate.
pub const BRUTE_FORCE_CAP: usize = 24;

/// `H_C = sum_i h_i s_i + sum_{i<j} J_ij s_i s_j + offset` with `s_i = 1 - 2 x_i`,
/// i.e. bit value 0 is spin up (`sigma^z = +1`).
///
/// [`IsingModel::energy`] excludes the offset; [`IsingModel::cost`] includes it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsingModel {
    num_qubits: usize,
    h: Vec<f64>,
    couplings: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundStates {
    /// Minimum of [`IsingModel::energy`] (offset excluded).
    pub energy: f64,
    pub states: Vec<Bitstring>,
}

impl IsingModel {
    pub fn new(
        h: Vec<f64>,
        couplings: impl IntoIterator<Item = ((usize, usize), f64)>,
        offset: f64,
    ) -> Result<Self> {
        let num_qubits = h.len();
        if num_qubits == 0 {
            return Err(Error::invalid("Ising model needs at least one spin"));
        }
        let mut map = BTreeMap::new();
        for ((i, j), v) in couplings {
            if i >= j || j >= num_qubits {
                return Err(Error::invalid(format!(
                    "coupling ({i}, {j}) must satisfy i < j < {num_qubits}"
                )));
            }
            *map.entry((i, j)).or_insert(0.0) += v;
        }
        Ok(Self {
            num_qubits,
            h,
            couplings: map,
            offset,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn fields(&self) -> &[f64] {
        &self.h
    }

    pub fn couplings(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.couplings
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Energy of basis state `q`, offset excluded.
    pub fn energy_index(&self, q: usize) -> f64 {
        let s = |i: usize| if (q >> i) & 1 == 0 { 1.0 } else { -1.0 };
        let field: f64 = self.h.iter().enumerate().map(|(i, h)| h * s(i)).sum();
        let pair: f64 = self
            .couplings
            .iter()
            .map(|(&(i, j), v)| v * s(i) * s(j))
            .sum();
        field + pair
    }

    pub fn energy(&self, x: &Bitstring) -> Result<f64> {
        x.expect_len(self.num_qubits)?;
        Ok(self.energy_index(x.index()))
    }

    /// `energy + offset`.
    pub fn cost(&self, x: &Bitstring) -> Result<f64> {
        Ok(self.energy(x)? + self.offset)
    }

    /// All `2^N` energies (offset excluded).
    pub fn diagonal(&self) -> Result<Vec<f64>> {
        check_qubits(self.num_qubits)?;
        Ok((0..1usize << self.num_qubits)
            .into_par_iter()
            .map(|q| self.energy_index(q))
            .collect())
    }

    pub fn diagonal_observable(&self) -> Result<Diagonal> {
        Diagonal::new(self.diagonal()?)
    }

    /// The `Z` and `ZZ` terms, zero weights omitted.
    pub fn terms(&self) -> Vec<PauliString> {
        let n = self.num_qubits;
        let fields = self
            .h
            .iter()
            .enumerate()
            .filter(|(_, h)| **h != 0.0)
            .map(|(i, &h)| PauliString::single(n, i, Pauli::Z, h).expect("valid index"));
        let pairs = self
            .couplings
            .iter()
            .filter(|(_, v)| **v != 0.0)
            .map(|(&(i, j), &v)| PauliString::zz(n, i, j, v).expect("valid index"));
        fields.chain(pairs).collect()
    }

    /// Exhaustive minimum over all bitstrings, every tie included.
    pub fn ground_states(&self) -> Result<GroundStates> {
        self.ground_states_capped(BRUTE_FORCE_CAP)
    }

    pub fn ground_states_capped(&self, cap: usize) -> Result<GroundStates> {
        if self.num_qubits > cap {
            return Err(Error::TooManyQubits {
                requested: self.num_qubits,
                limit: cap,
                bytes: crate::statevector::memory_estimate(self.num_qubits),
            });
        }
        let n = self.num_qubits;
        let tol = |e: f64| 1e-9 * (1.0 + e.abs());
        let chunk = 1usize << n.min(12);
        let partial: Vec<(f64, Vec<usize>)> = (0..(1usize << n).div_ceil(chunk))
            .into_par_iter()
            .map(|c| {
                let mut best = f64::INFINITY;
                let mut arg = Vec::new();
                for q in c * chunk..((c + 1) * chunk).min(1 << n) {
                    let e = self.energy_index(q);
                    if best.is_infinite() || e < best - tol(best) {
                        best = e;
                        arg.clear();
                        arg.push(q);
                    } else if (e - best).abs() <= tol(best) {
                        arg.push(q);
                    }
                }
                (best, arg)
            })
            .collect();
        let energy = partial.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let states = partial
            .into_iter()
            .filter(|(e, _)| (e - energy).abs() <= tol(energy))
            .flat_map(|(_, qs)| qs)
            .filter(|&q| (self.energy_index(q) - energy).abs() <= tol(energy))
            .map(|q| Bitstring::from_index(n, q).expect("in range"))
            .collect();
        Ok(GroundStates { energy, states })
    }
}
