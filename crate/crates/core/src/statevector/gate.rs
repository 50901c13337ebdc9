use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use crate::{Error, Result};

const UNITARY_TOL: f64 = 1e-12;

/// A 2x2 unitary `u[q][q']` acting on one qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleQubitGate {
    m: [[C64; 2]; 2],
}

impl SingleQubitGate {
    /// Checks `U U^† = I` within 1e-12.
    pub fn new(m: [[C64; 2]; 2]) -> Result<Self> {
        let gate = Self { m };
        if gate.unitarity_error() > UNITARY_TOL {
            return Err(Error::invalid(format!(
                "gate is not unitary (|UU^† - I| = {:.3e})",
                gate.unitarity_error()
            )));
        }
        Ok(gate)
    }

    const fn raw(m: [[C64; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> [[C64; 2]; 2] {
        self.m
    }

    pub fn unitarity_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let dot: C64 = (0..2).map(|k| self.m[r][k] * self.m[c][k].conj()).sum();
                let target = if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                err = err.max((dot - target).norm());
            }
        }
        err
    }

    pub fn dagger(&self) -> Self {
        let m = self.m;
        Self::raw([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn hadamard() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self::raw([[h, h], [h, -h]])
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self::raw([[o, l], [l, o]])
    }

    pub fn pauli_y() -> Self {
        let (o, i) = (C64::new(0.0, 0.0), C64::new(0.0, 1.0));
        Self::raw([[o, -i], [i, o]])
    }

    pub fn pauli_z() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self::raw([[l, o], [o, -l]])
    }

    /// `R^x(phi) = exp(-i phi sigma^x / 2)`.
    pub fn rx(phi: f64) -> Self {
        let (s, c) = (phi / 2.0).sin_cos();
        let (c, s) = (C64::new(c, 0.0), C64::new(0.0, -s));
        Self::raw([[c, s], [s, c]])
    }

    /// `R^y(phi) = exp(-i phi sigma^y / 2)`.
    pub fn ry(phi: f64) -> Self {
        let (s, c) = (phi / 2.0).sin_cos();
        Self::raw([
            [C64::new(c, 0.0), C64::new(-s, 0.0)],
            [C64::new(s, 0.0), C64::new(c, 0.0)],
        ])
    }

    /// `R^z(phi) = exp(-i phi sigma^z / 2)`.
    pub fn rz(phi: f64) -> Self {
        let o = C64::new(0.0, 0.0);
        Self::raw([
            [C64::from_polar(1.0, -phi / 2.0), o],
            [o, C64::from_polar(1.0, phi / 2.0)],
        ])
    }
}
