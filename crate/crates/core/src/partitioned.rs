//! A state vector distributed over `2^(N-M)` in-process ranks.
//!
//! Each rank owns the `2^M` amplitudes whose top `N-M` physical index bits
//! equal its rank number. Physical slots `0..M` are local, `M..N` global. A
//! gate that needs to pair amplitudes across a global slot first exchanges
//! half of every rank's amplitudes with its partner rank, which swaps that
//! global slot with a local one; the new labelling is kept afterwards, so a
//! second gate on the same qubit needs no communication.
//!
//! The logical-to-physical mapping lives in `qubit_map`. The local slot given
//! up in an exchange is the lowest local slot not holding a qubit that the
//! gate flips (an X or Y factor); Z factors work from any slot.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::statevector::{check_qubits, Pauli, PauliString, SingleQubitGate, StateVector};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    pub rank: usize,
    pub amplitudes: Vec<C64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeStats {
    pub gates: usize,
    pub local_applications: usize,
    pub global_applications: usize,
    pub amplitudes_exchanged: usize,
    pub exchange_rounds: usize,
}

#[derive(Clone, Debug)]
pub struct PartitionedState {
    num_qubits: usize,
    local_qubits: usize,
    partitions: Vec<Partition>,
    qubit_map: Vec<usize>,
    stats: ExchangeStats,
}

impl PartitionedState {
    /// Distributes `state` over `2^(N-M)` ranks with the identity labelling.
    pub fn split(state: &StateVector, local_qubits: usize) -> Result<Self> {
        let n = state.num_qubits();
        if local_qubits == 0 || local_qubits > n {
            return Err(Error::invalid(format!(
                "local qubit count {local_qubits} must be in 1..={n}"
            )));
        }
        let size = 1usize << local_qubits;
        let partitions = state
            .amplitudes()
            .chunks(size)
            .enumerate()
            .map(|(rank, chunk)| Partition {
                rank,
                amplitudes: chunk.to_vec(),
            })
            .collect();
        Ok(Self {
            num_qubits: n,
            local_qubits,
            partitions,
            qubit_map: (0..n).collect(),
            stats: ExchangeStats::default(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn local_qubits(&self) -> usize {
        self.local_qubits
    }

    pub fn num_ranks(&self) -> usize {
        self.partitions.len()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    /// Physical slot currently holding each logical qubit.
    pub fn qubit_map(&self) -> &[usize] {
        &self.qubit_map
    }

    pub fn stats(&self) -> ExchangeStats {
        self.stats
    }

    pub fn is_local(&self, logical: usize) -> bool {
        self.qubit_map[logical] < self.local_qubits
    }

    pub fn norm_sqr(&self) -> f64 {
        self.partitions
            .iter()
            .flat_map(|p| &p.amplitudes)
            .map(|a| a.norm_sqr())
            .sum()
    }

    fn check_qubit(&self, j: usize) -> Result<()> {
        if j >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index: j,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Moves logical qubit `j` into a local slot, avoiding the slots of
    /// `busy` logical qubits.
    fn localize(&mut self, j: usize, busy: &[usize]) -> Result<usize> {
        let slot = self.qubit_map[j];
        if slot < self.local_qubits {
            return Ok(slot);
        }
        let busy_slots: Vec<usize> = busy.iter().map(|&q| self.qubit_map[q]).collect();
        let victim = (0..self.local_qubits)
            .find(|s| !busy_slots.contains(s))
            .ok_or_else(|| {
                Error::invalid(format!(
                    "gate needs more than {} local qubits",
                    self.local_qubits
                ))
            })?;
        self.exchange(slot, victim);
        let displaced = self
            .qubit_map
            .iter()
            .position(|&s| s == victim)
            .expect("qubit_map is a permutation");
        self.qubit_map[displaced] = slot;
        self.qubit_map[j] = victim;
        Ok(victim)
    }

    /// Swaps physical slots `global` and `local` by pairwise buffer exchange
    /// between ranks that differ in the global bit.
    fn exchange(&mut self, global: usize, local: usize) {
        let rank_bit = 1usize << (global - self.local_qubits);
        let local_bit = 1usize << local;
        let half = self.partitions[0].amplitudes.len() / 2;
        for lo in 0..self.partitions.len() {
            if lo & rank_bit != 0 {
                continue;
            }
            let hi = lo | rank_bit;
            let (left, right) = self.partitions.split_at_mut(hi);
            let (a, b) = (&mut left[lo].amplitudes, &mut right[0].amplitudes);
            // rank `lo` sends its local-bit-1 half, rank `hi` its local-bit-0 half
            let to_hi: Vec<C64> = (0..a.len()).filter(|o| o & local_bit != 0).map(|o| a[o]).collect();
            let to_lo: Vec<C64> = (0..b.len()).filter(|o| o & local_bit == 0).map(|o| b[o]).collect();
            debug_assert_eq!(to_hi.len(), half);
            let slots_lo = (0..a.len()).filter(|o| o & local_bit != 0);
            for (o, v) in slots_lo.zip(to_lo.iter()) {
                a[o] = *v;
            }
            let slots_hi = (0..b.len()).filter(|o| o & local_bit == 0);
            for (o, v) in slots_hi.zip(to_hi.iter()) {
                b[o] = *v;
            }
            self.stats.amplitudes_exchanged += to_hi.len() + to_lo.len();
        }
        self.stats.exchange_rounds += 1;
    }

    pub fn apply_single_qubit(&mut self, j: usize, gate: &SingleQubitGate) -> Result<()> {
        self.check_qubit(j)?;
        self.stats.gates += 1;
        if self.is_local(j) {
            self.stats.local_applications += 1;
        } else {
            self.stats.global_applications += 1;
        }
        let slot = self.localize(j, &[j])?;
        self.partitions
            .par_iter_mut()
            .for_each(|p| crate::statevector::apply_pairs(&mut p.amplitudes, slot, gate));
        Ok(())
    }

    /// `exp(-i theta c P)`. Qubits carrying X or Y are made local first; Z
    /// factors on global slots only contribute a per-rank sign.
    pub fn apply_pauli_rotation(&mut self, p: &PauliString, theta: f64) -> Result<()> {
        if p.num_qubits() != self.num_qubits {
            return Err(Error::invalid("Pauli string size does not match state"));
        }
        self.stats.gates += 1;
        let flips: Vec<usize> = p
            .factors()
            .iter()
            .filter(|(_, f)| *f != Pauli::Z)
            .map(|&(q, _)| q)
            .collect();
        if flips.iter().all(|&q| self.is_local(q)) {
            self.stats.local_applications += 1;
        } else {
            self.stats.global_applications += 1;
        }
        for &q in &flips {
            self.localize(q, &flips)?;
        }

        let m = self.local_qubits;
        let mut local_factors = Vec::new();
        let mut global_z = 0usize;
        for &(q, f) in p.factors() {
            let slot = self.qubit_map[q];
            if slot < m {
                local_factors.push((slot, f));
            } else {
                global_z |= 1 << (slot - m);
            }
        }
        let angle = theta * p.coeff();
        let local = if local_factors.is_empty() {
            None
        } else {
            Some(PauliString::new(m, local_factors, 1.0)?)
        };
        self.partitions.par_iter_mut().for_each(|part| {
            let sign = crate::statevector::parity_sign(part.rank & global_z);
            match &local {
                Some(s) => crate::statevector::rotate(&mut part.amplitudes, s, sign * angle),
                None => {
                    let ph = C64::from_polar(1.0, -sign * angle);
                    part.amplitudes.iter_mut().for_each(|a| *a *= ph);
                }
            }
        });
        Ok(())
    }

    /// Per-amplitude phase `exp(-i gamma E(q))` with `E` indexed by the
    /// logical basis state; never communicates.
    pub fn apply_diagonal(&mut self, energy: impl Fn(usize) -> f64 + Sync, gamma: f64) {
        let m = self.local_qubits;
        let map = &self.qubit_map;
        self.partitions.par_iter_mut().for_each(|part| {
            for (o, a) in part.amplitudes.iter_mut().enumerate() {
                let logical = logical_index(map, (part.rank << m) | o);
                *a *= C64::from_polar(1.0, -gamma * energy(logical));
            }
        });
    }

    /// Reassembles the monolithic state, undoing the relabelling.
    pub fn gather(&self) -> Result<StateVector> {
        check_qubits(self.num_qubits)?;
        let m = self.local_qubits;
        let mut out = vec![C64::new(0.0, 0.0); 1 << self.num_qubits];
        for part in &self.partitions {
            for (o, a) in part.amplitudes.iter().enumerate() {
                out[logical_index(&self.qubit_map, (part.rank << m) | o)] = *a;
            }
        }
        StateVector::from_amplitudes(out)
    }
}

fn logical_index(qubit_map: &[usize], physical: usize) -> usize {
    qubit_map
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &slot)| acc | (((physical >> slot) & 1) << j))
}

/// One operation of a test or benchmark circuit.
#[derive(Clone, Debug, PartialEq)]
pub enum CircuitOp {
    Single { qubit: usize, gate: SingleQubitGate },
    Rotation { generator: PauliString, theta: f64 },
}

impl CircuitOp {
    pub fn apply(&self, s: &mut StateVector) -> Result<()> {
        match self {
            CircuitOp::Single { qubit, gate } => s.apply_single_qubit(*qubit, gate),
            CircuitOp::Rotation { generator, theta } => s.apply_pauli_rotation(generator, *theta),
        }
    }

    pub fn apply_partitioned(&self, s: &mut PartitionedState) -> Result<()> {
        match self {
            CircuitOp::Single { qubit, gate } => s.apply_single_qubit(*qubit, gate),
            CircuitOp::Rotation { generator, theta } => s.apply_pauli_rotation(generator, *theta),
        }
    }
}

/// Seeded random circuit mixing single-qubit gates with Pauli rotations whose
/// X/Y support is at most `max_flip_qubits`.
pub fn random_circuit(
    num_qubits: usize,
    gates: usize,
    max_flip_qubits: usize,
    seed: u64,
) -> Vec<CircuitOp> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..gates)
        .map(|_| {
            if rng.random_bool(0.5) || num_qubits == 1 {
                let qubit = rng.random_range(0..num_qubits);
                let angle = rng.random_range(-3.2..3.2);
                let gate = match rng.random_range(0..5) {
                    0 => SingleQubitGate::hadamard(),
                    1 => SingleQubitGate::pauli_x(),
                    2 => SingleQubitGate::rx(angle),
                    3 => SingleQubitGate::ry(angle),
                    _ => SingleQubitGate::rz(angle),
                };
                CircuitOp::Single { qubit, gate }
            } else {
                let width = rng.random_range(1..=num_qubits.min(3));
                let mut qubits: Vec<usize> = (0..num_qubits).collect();
                for i in 0..width {
                    let k = rng.random_range(i..num_qubits);
                    qubits.swap(i, k);
                }
                let mut flips = 0;
                let factors: Vec<(usize, Pauli)> = qubits[..width]
                    .iter()
                    .map(|&q| {
                        let mut p = [Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)];
                        if p != Pauli::Z {
                            if flips >= max_flip_qubits {
                                p = Pauli::Z;
                            } else {
                                flips += 1;
                            }
                        }
                        (q, p)
                    })
                    .collect();
                CircuitOp::Rotation {
                    generator: PauliString::new(num_qubits, factors, 1.0).expect("distinct qubits"),
                    theta: rng.random_range(-3.2..3.2),
                }
            }
        })
        .collect()
}
