use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A computational basis label `q_{N-1} … q_1 q_0`.
///
/// Bit `j` of [`Bitstring::index`] is the value of qubit `j`. The textual form
/// is written most-significant qubit first, so `"10"` is qubit 1 set and
/// index 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bitstring {
    len: usize,
    index: usize,
}

impl Bitstring {
    pub fn from_index(len: usize, index: usize) -> Result<Self> {
        if len == 0 || len >= usize::BITS as usize {
            return Err(Error::invalid(format!("bitstring length {len} unsupported")));
        }
        if index >> len != 0 {
            return Err(Error::invalid(format!("index {index} does not fit in {len} bits")));
        }
        Ok(Self { len, index })
    }

    /// Builds a bitstring from per-qubit values, `bits[j]` being qubit `j`.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let index = bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &b)| acc | (usize::from(b) << j));
        Self::from_index(bits.len(), index)
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::from_index(len, 0)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn bit(&self, j: usize) -> bool {
        (self.index >> j) & 1 == 1
    }

    /// Per-qubit values, qubit 0 first.
    pub fn bits(&self) -> Vec<bool> {
        (0..self.len).map(|j| self.bit(j)).collect()
    }

    pub fn count_ones(&self) -> u32 {
        self.index.count_ones()
    }

    pub(crate) fn expect_len(&self, expected: usize) -> Result<()> {
        if self.len != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: self.len,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in (0..self.len).rev() {
            f.write_str(if self.bit(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bitstring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let len = s.len();
        let mut index = 0usize;
        for (pos, c) in s.chars().enumerate() {
            let bit = match c {
                '0' => 0,
                '1' => 1,
                other => {
                    return Err(Error::invalid(format!("bad bit character {other:?} in {s:?}")))
                }
            };
            index |= bit << (len - 1 - pos);
        }
        Self::from_index(len, index)
    }
}
