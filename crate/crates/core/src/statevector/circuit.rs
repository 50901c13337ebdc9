//! Parameterised circuits made of Pauli-string rotations.
//!
//! Every gate is `exp(-i theta_k c P)` for a parameter `theta_k` and a Pauli
//! string `c P`. Both the QAOA layers and the VQE ansatz fit this form, which
//! gives them a common gradient implementation.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64 as C64;

use super::{parity_sign, rotate, LinearOperator, PauliString, PauliSum, StateVector};
use crate::{Error, Result};

/// A Hermitian observable whose expectation value can be taken directly.
pub trait Observable: LinearOperator {
    fn expectation(&self, amps: &[C64]) -> f64;
}

impl Observable for PauliSum {
    fn expectation(&self, amps: &[C64]) -> f64 {
        PauliSum::expectation(self, amps)
    }
}

/// A diagonal observable stored as its `2^N` eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagonal {
    num_qubits: usize,
    values: Vec<f64>,
}

impl Diagonal {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || !values.len().is_power_of_two() {
            return Err(Error::invalid("diagonal length must be a power of two >= 2"));
        }
        Ok(Self {
            num_qubits: values.len().trailing_zeros() as usize,
            values,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl LinearOperator for Diagonal {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply(&self, x: &[C64], out: &mut [C64]) {
        for ((o, a), e) in out.iter_mut().zip(x).zip(&self.values) {
            *o = a * e;
        }
    }
}

impl Observable for Diagonal {
    fn expectation(&self, amps: &[C64]) -> f64 {
        amps.iter()
            .zip(&self.values)
            .map(|(a, e)| a.norm_sqr() * e)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamGate {
    pub generator: PauliString,
    pub param: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParametricCircuit {
    num_qubits: usize,
    num_params: usize,
    gates: Vec<ParamGate>,
}

impl ParametricCircuit {
    pub fn new(num_qubits: usize, num_params: usize) -> Self {
        Self {
            num_qubits,
            num_params,
            gates: Vec::new(),
        }
    }

    /// Appends `exp(-i theta[param] generator)`; gates act in push order.
    pub fn push(&mut self, generator: PauliString, param: usize) -> Result<()> {
        if generator.num_qubits() != self.num_qubits {
            return Err(Error::invalid("generator size does not match circuit"));
        }
        if param >= self.num_params {
            return Err(Error::invalid(format!(
                "parameter index {param} out of range ({} parameters)",
                self.num_params
            )));
        }
        self.gates.push(ParamGate { generator, param });
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn gates(&self) -> &[ParamGate] {
        &self.gates
    }

    /// `(single-qubit, multi-qubit)` gate counts.
    pub fn gate_counts(&self) -> (usize, usize) {
        let single = self
            .gates
            .iter()
            .filter(|g| g.generator.factors().len() == 1)
            .count();
        (single, self.gates.len() - single)
    }

    fn check(&self, state: &StateVector, params: &[f64]) -> Result<()> {
        if params.len() != self.num_params {
            return Err(Error::invalid(format!(
                "expected {} parameters, got {}",
                self.num_params,
                params.len()
            )));
        }
        if state.num_qubits() != self.num_qubits {
            return Err(Error::invalid("state size does not match circuit"));
        }
        Ok(())
    }

    pub fn apply(&self, state: &mut StateVector, params: &[f64]) -> Result<()> {
        self.check(state, params)?;
        for g in &self.gates {
            let angle = params[g.param] * g.generator.coeff();
            rotate(state.amplitudes_mut(), &g.generator, angle);
        }
        Ok(())
    }

    pub fn apply_inverse(&self, state: &mut StateVector, params: &[f64]) -> Result<()> {
        self.check(state, params)?;
        for g in self.gates.iter().rev() {
            let angle = params[g.param] * g.generator.coeff();
            rotate(state.amplitudes_mut(), &g.generator, -angle);
        }
        Ok(())
    }

    pub fn prepare(&self, initial: &StateVector, params: &[f64]) -> Result<StateVector> {
        let mut s = initial.clone();
        self.apply(&mut s, params)?;
        Ok(s)
    }

    pub fn energy(
        &self,
        initial: &StateVector,
        params: &[f64],
        observable: &impl Observable,
    ) -> Result<f64> {
        let s = self.prepare(initial, params)?;
        Ok(observable.expectation(s.amplitudes()))
    }

    /// Energy and gradient from one forward and one reverse sweep.
    ///
    /// With `lambda = H psi` carried backwards alongside `psi`, the derivative
    /// with respect to the effective angle of gate `g` is
    /// `2 Im <lambda_g|P_g|psi_g>`.
    pub fn adjoint_gradient(
        &self,
        initial: &StateVector,
        params: &[f64],
        observable: &impl Observable,
    ) -> Result<(f64, Vec<f64>)> {
        let mut psi = self.prepare(initial, params)?;
        let energy = observable.expectation(psi.amplitudes());
        let mut lambda = vec![C64::new(0.0, 0.0); psi.dim()];
        observable.apply(psi.amplitudes(), &mut lambda);
        let mut grad = vec![0.0; self.num_params];
        for g in self.gates.iter().rev() {
            let p = &g.generator;
            grad[g.param] += 2.0 * p.coeff() * pauli_overlap(&lambda, psi.amplitudes(), p).im;
            let angle = params[g.param] * p.coeff();
            rotate(psi.amplitudes_mut(), p, -angle);
            rotate(&mut lambda, p, -angle);
        }
        Ok((energy, grad))
    }

    /// Gradient by the two-term shift rule, evaluated gate by gate.
    ///
    /// For `U = exp(-i phi P)` with `P^2 = I` the energy is a sinusoid of
    /// period `pi` in `phi`, so `dE/dphi = E(phi + pi/4) - E(phi - pi/4)`.
    /// Costs two circuit evaluations per gate.
    pub fn parameter_shift_gradient(
        &self,
        initial: &StateVector,
        params: &[f64],
        observable: &impl Observable,
    ) -> Result<Vec<f64>> {
        self.check(initial, params)?;
        let mut grad = vec![0.0; self.num_params];
        for (k, gk) in self.gates.iter().enumerate() {
            let mut shifted = [0.0; 2];
            for (slot, shift) in shifted.iter_mut().zip([FRAC_PI_4, -FRAC_PI_4]) {
                let mut s = initial.clone();
                for (i, g) in self.gates.iter().enumerate() {
                    let mut angle = params[g.param] * g.generator.coeff();
                    if i == k {
                        angle += shift;
                    }
                    rotate(s.amplitudes_mut(), &g.generator, angle);
                }
                *slot = observable.expectation(s.amplitudes());
            }
            grad[gk.param] += gk.generator.coeff() * (shifted[0] - shifted[1]);
        }
        Ok(grad)
    }
}

/// `<a|P|b>` for the unit string of `p`.
pub fn pauli_overlap(a: &[C64], b: &[C64], p: &PauliString) -> C64 {
    let (x, z, yph) = (p.x_mask(), p.z_mask(), p.y_phase());
    let mut acc = C64::new(0.0, 0.0);
    for (q, &bq) in b.iter().enumerate() {
        acc += a[q ^ x].conj() * bq * parity_sign(q & z);
    }
    acc * yph
}
