//! Dense state vectors and matrix-free gate application.
//!
//! Amplitude `q` belongs to the basis state whose bit `j` is the value of
//! qubit `j`, so a gate on qubit `j` couples the pairs `(q, q ^ 1 << j)`.

mod bitstring;
pub mod circuit;
mod gate;
mod pauli;

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use bitstring::Bitstring;
pub use gate::SingleQubitGate;
pub use pauli::{LinearOperator, Pauli, PauliString, PauliSum};
pub(crate) use pauli::parity_sign;

use crate::{Error, Result};

/// Environment variable overriding [`DEFAULT_QUBIT_LIMIT`].
pub const QUBIT_LIMIT_ENV: &str = "VARQSIM_MAX_QUBITS";
pub const DEFAULT_QUBIT_LIMIT: usize = 30;

// Below this size the rayon split costs more than it saves.
const PAR_MIN_DIM: usize = 1 << 14;

/// Bytes needed for `n` double-precision complex amplitudes.
pub fn memory_estimate(num_qubits: usize) -> u128 {
    16u128 << num_qubits
}

pub fn qubit_limit() -> usize {
    std::env::var(QUBIT_LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_QUBIT_LIMIT)
}

/// Pre-flight check run before any `2^n` allocation.
pub fn check_qubits(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(Error::invalid("need at least one qubit"));
    }
    let limit = qubit_limit();
    if num_qubits > limit || num_qubits >= usize::BITS as usize - 5 {
        return Err(Error::TooManyQubits {
            requested: num_qubits,
            limit,
            bytes: memory_estimate(num_qubits),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0>`.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    pub fn basis(num_qubits: usize, bits: Bitstring) -> Result<Self> {
        bits.expect_len(num_qubits)?;
        let mut s = Self::zero(num_qubits)?;
        s.amps[0] = C64::new(0.0, 0.0);
        s.amps[bits.index()] = C64::new(1.0, 0.0);
        Ok(s)
    }

    /// Basis state from its text label, most significant qubit first.
    pub fn from_label(num_qubits: usize, label: &str) -> Result<Self> {
        Self::basis(num_qubits, label.parse()?)
    }

    /// `|+>^{⊗N}`.
    pub fn plus(num_qubits: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let a = C64::new((0.5f64).powf(num_qubits as f64 / 2.0), 0.0);
        Ok(Self {
            num_qubits,
            amps: vec![a; 1 << num_qubits],
        })
    }

    /// Wraps raw amplitudes; the length must be a power of two. The caller is
    /// responsible for normalisation.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        if amps.len() < 2 || !amps.len().is_power_of_two() {
            return Err(Error::invalid(format!(
                "amplitude count {} is not a power of two >= 2",
                amps.len()
            )));
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        check_qubits(num_qubits)?;
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
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

    fn check_string(&self, p: &PauliString) -> Result<()> {
        if p.num_qubits() != self.num_qubits {
            return Err(Error::invalid(format!(
                "Pauli string on {} qubits applied to a {}-qubit state",
                p.num_qubits(),
                self.num_qubits
            )));
        }
        Ok(())
    }

    /// Two-component update of every amplitude pair differing in bit `j`.
    pub fn apply_single_qubit(&mut self, j: usize, gate: &SingleQubitGate) -> Result<()> {
        self.check_qubit(j)?;
        apply_pairs(&mut self.amps, j, gate);
        Ok(())
    }

    pub fn hadamard(&mut self, j: usize) -> Result<()> {
        self.apply_single_qubit(j, &SingleQubitGate::hadamard())
    }

    /// `exp(-i theta c P)` where `c` is the string's coefficient and `P` its
    /// unit Pauli product: `cos(c theta) psi - i sin(c theta) P psi`.
    pub fn apply_pauli_rotation(&mut self, p: &PauliString, theta: f64) -> Result<()> {
        self.check_string(p)?;
        rotate(&mut self.amps, p, theta * p.coeff());
        Ok(())
    }

    /// Multiplies by the unit Pauli product of `p` (coefficient ignored).
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        self.check_string(p)?;
        let x = p.x_mask();
        if x == 0 {
            for (q, a) in self.amps.iter_mut().enumerate() {
                *a *= parity_sign(q & p.z_mask());
            }
            return Ok(());
        }
        let top = 1usize << (usize::BITS - 1 - x.leading_zeros());
        for q in 0..self.amps.len() {
            if q & top != 0 {
                continue;
            }
            let r = q ^ x;
            let (_, ph_q) = p.act_on_basis(q);
            let (_, ph_r) = p.act_on_basis(r);
            let (aq, ar) = (self.amps[q], self.amps[r]);
            self.amps[r] = ph_q * aq;
            self.amps[q] = ph_r * ar;
        }
        Ok(())
    }

    /// `psi_q <- exp(-i gamma E(q)) psi_q`, with `E` evaluated per index.
    pub fn apply_diagonal(&mut self, energy: impl Fn(usize) -> f64 + Sync, gamma: f64) {
        if gamma == 0.0 {
            return;
        }
        let phase = |q: usize, a: &mut C64| *a *= C64::from_polar(1.0, -gamma * energy(q));
        if self.amps.len() >= PAR_MIN_DIM {
            self.amps
                .par_iter_mut()
                .enumerate()
                .for_each(|(q, a)| phase(q, a));
        } else {
            self.amps.iter_mut().enumerate().for_each(|(q, a)| phase(q, a));
        }
    }

    /// [`Self::apply_diagonal`] with a tabulated diagonal.
    pub fn apply_diagonal_values(&mut self, diag: &[f64], gamma: f64) -> Result<()> {
        if diag.len() != self.amps.len() {
            return Err(Error::invalid("diagonal length does not match state"));
        }
        self.apply_diagonal(|q| diag[q], gamma);
        Ok(())
    }

    /// `sum_t c_t <psi|P_t|psi>`, streamed term by term.
    pub fn expectation(&self, terms: &[PauliString]) -> Result<f64> {
        let mut total = C64::new(0.0, 0.0);
        for p in terms {
            self.check_string(p)?;
            let mut acc = C64::new(0.0, 0.0);
            for (q, &a) in self.amps.iter().enumerate() {
                let (r, ph) = p.act_on_basis(q);
                acc += self.amps[r].conj() * ph * a;
            }
            total += acc * p.coeff();
        }
        debug_assert!(total.im.abs() < 1e-10 * (1.0 + total.re.abs()));
        Ok(total.re)
    }

    /// `sum_q |psi_q|^2 E(q)` for a diagonal observable.
    pub fn expectation_diagonal(&self, diag: &[f64]) -> f64 {
        self.amps
            .iter()
            .zip(diag)
            .map(|(a, e)| a.norm_sqr() * e)
            .sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Total probability of the distinct bitstrings in `targets`.
    pub fn probability_of(&self, targets: &[Bitstring]) -> Result<f64> {
        if targets.is_empty() {
            return Err(Error::invalid("probability_of needs at least one target"));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut p = 0.0;
        for t in targets {
            t.expect_len(self.num_qubits)?;
            if seen.insert(t.index()) {
                p += self.amps[t.index()].norm_sqr();
            }
        }
        Ok(p.min(1.0))
    }

    /// Draws `shots` measurements of all qubits from `|psi_q|^2`.
    pub fn sample(&self, shots: usize, seed: u64) -> BTreeMap<Bitstring, usize> {
        let mut cumulative = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cumulative.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = vec![0usize; self.amps.len()];
        for _ in 0..shots {
            let u: f64 = rng.random::<f64>() * acc;
            let q = cumulative.partition_point(|&c| c <= u).min(self.amps.len() - 1);
            counts[q] += 1;
        }
        counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(q, c)| (Bitstring::from_index(self.num_qubits, q).unwrap(), c))
            .collect()
    }

    /// Writes `index bitstring re im` per amplitude.
    pub fn write_dump(&self, mut w: impl Write) -> std::io::Result<()> {
        for (q, a) in self.amps.iter().enumerate() {
            let b = Bitstring::from_index(self.num_qubits, q).expect("index in range");
            writeln!(w, "{q} {b} {:.17e} {:.17e}", a.re, a.im)?;
        }
        Ok(())
    }
}

pub(crate) fn apply_pairs(amps: &mut [C64], j: usize, gate: &SingleQubitGate) {
    let [[u00, u01], [u10, u11]] = gate.matrix();
    let stride = 1usize << j;
    let update = |block: &mut [C64]| {
        let (lo, hi) = block.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = u00 * x + u01 * y;
            *b = u10 * x + u11 * y;
        }
    };
    if amps.len() >= PAR_MIN_DIM {
        amps.par_chunks_mut(2 * stride).for_each(update);
    } else {
        amps.chunks_mut(2 * stride).for_each(update);
    }
}

/// `exp(-i angle P)` for the unit string of `p`.
pub(crate) fn rotate(amps: &mut [C64], p: &PauliString, angle: f64) {
    if angle == 0.0 {
        return;
    }
    let x = p.x_mask();
    if x == 0 {
        let z = p.z_mask();
        let (plus, minus) = (C64::from_polar(1.0, -angle), C64::from_polar(1.0, angle));
        for (q, a) in amps.iter_mut().enumerate() {
            *a *= if (q & z).count_ones() & 1 == 0 { plus } else { minus };
        }
        return;
    }
    let (s, c) = angle.sin_cos();
    // P|q> = i^{n_y} (-1)^{|q & z|} |q ^ x>
    let k = C64::new(0.0, -s) * p.y_phase();
    let z = p.z_mask();
    let top = 1usize << (usize::BITS - 1 - x.leading_zeros());
    for q in 0..amps.len() {
        if q & top != 0 {
            continue;
        }
        let r = q ^ x;
        let (aq, ar) = (amps[q], amps[r]);
        amps[q] = aq * c + k * (parity_sign(r & z) * ar);
        amps[r] = ar * c + k * (parity_sign(q & z) * aq);
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn basis_states() {
        assert_eq!(
            StateVector::from_label(1, "0").unwrap().amplitudes(),
            &[c(1.0, 0.0), c(0.0, 0.0)]
        );
        assert_eq!(StateVector::from_label(2, "10").unwrap().amplitudes()[2], c(1.0, 0.0));
        assert_eq!(StateVector::from_label(3, "111").unwrap().amplitudes()[7], c(1.0, 0.0));
        assert!(matches!(
            StateVector::from_label(3, "11"),
            Err(Error::LengthMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn plus_state() {
        let s = StateVector::plus(1).unwrap();
        assert!(s.amplitudes().iter().all(|&a| close(a, c(FRAC_1_SQRT_2, 0.0))));
        let s = StateVector::plus(2).unwrap();
        assert!(s.amplitudes().iter().all(|&a| close(a, c(0.5, 0.0))));
        let s = StateVector::plus(10).unwrap();
        assert!(s.probabilities().iter().all(|p| (p - 2f64.powi(-10)).abs() < 1e-15));
    }

    #[test]
    fn single_qubit_gates() {
        let mut s = StateVector::zero(1).unwrap();
        s.hadamard(0).unwrap();
        assert!(close(s.amplitudes()[0], c(FRAC_1_SQRT_2, 0.0)));
        assert!(close(s.amplitudes()[1], c(FRAC_1_SQRT_2, 0.0)));

        let mut s = StateVector::zero(2).unwrap();
        s.apply_single_qubit(1, &SingleQubitGate::pauli_x()).unwrap();
        assert_eq!(s, StateVector::from_label(2, "10").unwrap());

        assert!(matches!(
            s.apply_single_qubit(2, &SingleQubitGate::hadamard()),
            Err(Error::QubitOutOfRange { index: 2, num_qubits: 2 })
        ));
    }

    #[test]
    fn pauli_rotation_examples() {
        let theta = 0.37;
        let mut s = StateVector::zero(1).unwrap();
        s.apply_pauli_rotation(&PauliString::single(1, 0, Pauli::Z, 1.0).unwrap(), theta)
            .unwrap();
        assert!(close(s.amplitudes()[0], C64::from_polar(1.0, -theta)));

        // exp(-i pi/2 X)|0> = cos(pi/2)|0> - i sin(pi/2)|1> = -i|1>
        let mut s = StateVector::zero(1).unwrap();
        s.apply_pauli_rotation(&PauliString::single(1, 0, Pauli::X, 1.0).unwrap(), FRAC_PI_2)
            .unwrap();
        assert!(close(s.amplitudes()[0], c(0.0, 0.0)));
        assert!(close(s.amplitudes()[1], c(0.0, -1.0)));

        // ZZ has eigenvalue -1 on |01>
        let mut s = StateVector::from_label(2, "01").unwrap();
        s.apply_pauli_rotation(&PauliString::zz(2, 0, 1, 1.0).unwrap(), theta)
            .unwrap();
        assert!(close(s.amplitudes()[1], C64::from_polar(1.0, theta)));
    }

    #[test]
    fn diagonal_phase() {
        let mut s = StateVector::plus(1).unwrap();
        s.apply_diagonal(|q| if q == 0 { 1.0 } else { -1.0 }, FRAC_PI_4);
        assert!(close(s.amplitudes()[0], C64::from_polar(FRAC_1_SQRT_2, -FRAC_PI_4)));
        assert!(close(s.amplitudes()[1], C64::from_polar(FRAC_1_SQRT_2, FRAC_PI_4)));

        let before = StateVector::plus(3).unwrap();
        let mut s = before.clone();
        s.apply_diagonal(|_| 2.5, 0.0);
        assert_eq!(s, before);
        s.apply_diagonal(|_| 2.5, 0.3);
        let g = C64::from_polar(1.0, -0.75);
        assert!(s
            .amplitudes()
            .iter()
            .zip(before.amplitudes())
            .all(|(a, b)| close(*a, b * g)));
    }

    #[test]
    fn expectation_examples() {
        let z = PauliString::single(1, 0, Pauli::Z, 1.0).unwrap();
        assert_eq!(StateVector::zero(1).unwrap().expectation(&[z.clone()]).unwrap(), 1.0);
        assert!(StateVector::plus(1).unwrap().expectation(&[z.clone()]).unwrap().abs() < 1e-15);
        assert!(StateVector::zero(2).unwrap().expectation(&[z]).is_err());

        let h = SINGLET_TERMS.map(|p| {
            PauliString::new(2, [(0, p), (1, p)], 1.0).unwrap()
        });
        let r = FRAC_1_SQRT_2;
        let singlet =
            StateVector::from_amplitudes(vec![c(0.0, 0.0), c(r, 0.0), c(-r, 0.0), c(0.0, 0.0)])
                .unwrap();
        assert!((singlet.expectation(&h).unwrap() + 3.0).abs() < 1e-12);
        let sum = PauliSum::new(2, h.to_vec()).unwrap();
        assert!((sum.expectation(singlet.amplitudes()) + 3.0).abs() < 1e-12);
    }

    const SINGLET_TERMS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    #[test]
    fn probability_examples() {
        let s = StateVector::plus(4).unwrap();
        let t = Bitstring::from_index(4, 9).unwrap();
        assert!((s.probability_of(&[t]).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        let s = StateVector::from_label(2, "10").unwrap();
        assert_eq!(s.probability_of(&["10".parse().unwrap()]).unwrap(), 1.0);
        let s = StateVector::plus(2).unwrap();
        let p = s
            .probability_of(&["00".parse().unwrap(), "11".parse().unwrap()])
            .unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert!(s.probability_of(&[]).is_err());
        assert!(s.probability_of(&["1".parse().unwrap()]).is_err());
    }

    #[test]
    fn sampling() {
        let h = StateVector::zero(1).unwrap().sample(100, 3);
        assert_eq!(h.len(), 1);
        assert_eq!(h[&"0".parse().unwrap()], 100);

        let plus = StateVector::plus(1).unwrap();
        let h = plus.sample(1_000_000, 42);
        assert_eq!(h.values().sum::<usize>(), 1_000_000);
        for count in h.values() {
            assert!((*count as f64 - 5e5).abs() < 5.0 * 500.0);
        }
        assert_eq!(h, plus.sample(1_000_000, 42));
    }

    #[test]
    fn memory() {
        assert_eq!(memory_estimate(42), 64u128 << 40);
        assert_eq!(memory_estimate(21), 32u128 << 20);
        assert_eq!(memory_estimate(1), 32);
    }

    #[test]
    fn qubit_cap() {
        assert!(matches!(
            StateVector::zero(40),
            Err(Error::TooManyQubits { requested: 40, limit: 30, .. })
        ));
    }

    #[test]
    fn dump_format() {
        let mut out = Vec::new();
        StateVector::from_label(2, "01").unwrap().write_dump(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("1 01 1.00000000000000000e0 0"));
    }
}
