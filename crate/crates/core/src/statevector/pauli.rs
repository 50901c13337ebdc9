use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        })
    }
}

/// A real multiple of a tensor product of Pauli matrices.
///
/// Internally the string is kept as an X mask (qubits carrying X or Y), a Z mask
/// (qubits carrying Z or Y) and the number of Y factors, using `Y = i X Z`.
/// On a basis state this gives `P|q> = i^{n_y} (-1)^{|q & z|} |q ^ x>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliString {
    num_qubits: usize,
    factors: Vec<(usize, Pauli)>,
    coeff: f64,
    #[serde(skip)]
    x_mask: usize,
    #[serde(skip)]
    z_mask: usize,
    #[serde(skip)]
    num_y: u32,
}

impl PauliString {
    pub fn new(
        num_qubits: usize,
        factors: impl IntoIterator<Item = (usize, Pauli)>,
        coeff: f64,
    ) -> Result<Self> {
        let mut factors: Vec<(usize, Pauli)> = factors.into_iter().collect();
        if factors.is_empty() {
            return Err(Error::invalid("Pauli string needs at least one factor"));
        }
        factors.sort_by_key(|&(q, _)| q);
        for pair in factors.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::invalid(format!("qubit {} repeated in Pauli string", pair[0].0)));
            }
        }
        if let Some(&(q, _)) = factors.iter().find(|&&(q, _)| q >= num_qubits) {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits,
            });
        }
        let mut s = Self {
            num_qubits,
            factors,
            coeff,
            x_mask: 0,
            z_mask: 0,
            num_y: 0,
        };
        s.compile();
        Ok(s)
    }

    fn compile(&mut self) {
        let (mut x, mut z, mut y) = (0, 0, 0);
        for &(q, p) in &self.factors {
            match p {
                Pauli::X => x |= 1 << q,
                Pauli::Z => z |= 1 << q,
                Pauli::Y => {
                    x |= 1 << q;
                    z |= 1 << q;
                    y += 1;
                }
            }
        }
        self.x_mask = x;
        self.z_mask = z;
        self.num_y = y;
    }

    pub fn single(num_qubits: usize, qubit: usize, pauli: Pauli, coeff: f64) -> Result<Self> {
        Self::new(num_qubits, [(qubit, pauli)], coeff)
    }

    pub fn zz(num_qubits: usize, i: usize, j: usize, coeff: f64) -> Result<Self> {
        Self::new(num_qubits, [(i, Pauli::Z), (j, Pauli::Z)], coeff)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn factors(&self) -> &[(usize, Pauli)] {
        &self.factors
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    pub fn with_coeff(&self, coeff: f64) -> Self {
        Self {
            coeff,
            ..self.clone()
        }
    }

    pub fn x_mask(&self) -> usize {
        self.x_mask
    }

    pub fn z_mask(&self) -> usize {
        self.z_mask
    }

    /// True when the string contains only Z factors.
    pub fn is_diagonal(&self) -> bool {
        self.x_mask == 0
    }

    /// `i^{n_y}`, the constant phase of the unit string.
    pub fn y_phase(&self) -> C64 {
        match self.num_y % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }

    /// Image of basis state `q` under the unit string: `(q', phase)` with
    /// `P|q> = phase |q'>`.
    #[inline]
    pub fn act_on_basis(&self, q: usize) -> (usize, C64) {
        let phase = self.y_phase() * parity_sign(q & self.z_mask);
        (q ^ self.x_mask, phase)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        for (q, p) in &self.factors {
            write!(f, " {p}{q}")?;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn parity_sign(bits: usize) -> f64 {
    if bits.count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A linear map on `2^N` amplitudes, applied without storing a matrix.
pub trait LinearOperator: Sync {
    fn num_qubits(&self) -> usize;

    /// `out = A x`; `out` is overwritten.
    fn apply(&self, x: &[C64], out: &mut [C64]);

    fn dim(&self) -> usize {
        1usize << self.num_qubits()
    }
}

#[derive(Clone, Debug)]
struct FlipGroup {
    x_mask: usize,
    // (z mask, coeff * i^{n_y})
    terms: Vec<(usize, C64)>,
}

/// A Hermitian sum of Pauli strings, pre-grouped by X mask so that applying it
/// costs one pass over the amplitudes per distinct bit-flip pattern.
#[derive(Clone, Debug)]
pub struct PauliSum {
    num_qubits: usize,
    terms: Vec<PauliString>,
    groups: Vec<FlipGroup>,
}

impl PauliSum {
    pub fn new(num_qubits: usize, terms: Vec<PauliString>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.num_qubits != num_qubits) {
            return Err(Error::invalid(format!(
                "term {t} is defined on {} qubits, expected {num_qubits}",
                t.num_qubits
            )));
        }
        let mut by_mask: BTreeMap<usize, BTreeMap<usize, C64>> = BTreeMap::new();
        for t in &terms {
            *by_mask
                .entry(t.x_mask)
                .or_default()
                .entry(t.z_mask)
                .or_insert(C64::new(0.0, 0.0)) += t.y_phase() * t.coeff;
        }
        let groups = by_mask
            .into_iter()
            .map(|(x_mask, zs)| FlipGroup {
                x_mask,
                terms: zs.into_iter().filter(|(_, c)| c.norm() != 0.0).collect(),
            })
            .filter(|g| !g.terms.is_empty())
            .collect();
        Ok(Self {
            num_qubits,
            terms,
            groups,
        })
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    /// `<psi|H|psi>` for a normalised `psi`, computed in one streaming pass per
    /// flip group.
    pub fn expectation(&self, amps: &[C64]) -> f64 {
        debug_assert_eq!(amps.len(), 1 << self.num_qubits);
        let mut acc = C64::new(0.0, 0.0);
        for g in &self.groups {
            for (q, &a) in amps.iter().enumerate() {
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let f: C64 = g
                    .terms
                    .iter()
                    .map(|&(z, c)| c * parity_sign(q & z))
                    .sum();
                acc += amps[q ^ g.x_mask].conj() * f * a;
            }
        }
        debug_assert!(acc.im.abs() < 1e-8 * (1.0 + acc.re.abs()), "non-real expectation {acc}");
        acc.re
    }
}

impl LinearOperator for PauliSum {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply(&self, x: &[C64], out: &mut [C64]) {
        out.fill(C64::new(0.0, 0.0));
        for g in &self.groups {
            if g.terms.len() == 1 {
                let (z, c) = g.terms[0];
                for (q, &a) in x.iter().enumerate() {
                    out[q ^ g.x_mask] += c * parity_sign(q & z) * a;
                }
            } else {
                for (q, &a) in x.iter().enumerate() {
                    let f: C64 = g
                        .terms
                        .iter()
                        .map(|&(z, c)| c * parity_sign(q & z))
                        .sum();
                    out[q ^ g.x_mask] += f * a;
                }
            }
        }
    }
}
