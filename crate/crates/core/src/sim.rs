//! Exact statevector simulation of X-programs.
//!
//! Each gate exp(iθ X_p) = cosθ·I + i sinθ·X_p pairs amplitude x with
//! amplitude x⊕p, so a gate is one pass of 2×2 rotations over the state.
//! Gates commute, so the application order is irrelevant.

use alloc::vec;
use alloc::vec::Vec;

use crate::dist::OutputDistribution;
use crate::xprogram::XProgram;
use crate::Error;

/// Default qubit cap for dense simulation (~1 GiB of complex doubles).
pub const DEFAULT_QUBIT_CAP: usize = 26;

#[derive(Clone, Copy, PartialEq, Debug, Default)]
struct Amp {
    re: f64,
    im: f64,
}

/// A dense 2^n-amplitude state. Outcome integer bit i = qubit i.
#[derive(Clone, PartialEq, Debug)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Amp>,
}

impl StateVector {
    /// |0ⁿ⟩.
    pub fn zero_state(n_qubits: usize) -> Self {
        let mut amps = vec![Amp::default(); 1 << n_qubits];
        amps[0] = Amp { re: 1.0, im: 0.0 };
        StateVector { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// (re, im) of amplitude x.
    pub fn amplitude(&self, x: u64) -> (f64, f64) {
        let a = self.amps[x as usize];
        (a.re, a.im)
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.iter().map(|a| a.re * a.re + a.im * a.im).sum()
    }

    /// Applies exp(iθ X_p) where `mask` encodes the support of p.
    fn apply_x_rotation(&mut self, mask: u64, theta: f64) {
        let c = libm::cos(theta);
        let s = libm::sin(theta);
        for x in 0..self.amps.len() as u64 {
            let y = x ^ mask;
            if x < y {
                let ax = self.amps[x as usize];
                let ay = self.amps[y as usize];
                // a_x' = c·a_x + i·s·a_y ; a_y' = c·a_y + i·s·a_x
                self.amps[x as usize] = Amp {
                    re: c * ax.re - s * ay.im,
                    im: c * ax.im + s * ay.re,
                };
                self.amps[y as usize] = Amp {
                    re: c * ay.re - s * ax.im,
                    im: c * ay.im + s * ax.re,
                };
            }
        }
    }

    /// |amplitude|² for every outcome, validated as a distribution.
    pub fn probabilities(&self) -> Result<OutputDistribution, Error> {
        let probs = self
            .amps
            .iter()
            .map(|a| a.re * a.re + a.im * a.im)
            .collect();
        OutputDistribution::new(self.n_qubits, probs)
    }
}

/// Evolves |0ⁿ⟩ under the program, with the default qubit cap.
pub fn evolve(p: &XProgram) -> Result<StateVector, Error> {
    evolve_with_cap(p, DEFAULT_QUBIT_CAP)
}

/// [`evolve`] with an explicit qubit cap.
pub fn evolve_with_cap(p: &XProgram, cap: usize) -> Result<StateVector, Error> {
    if p.n_qubits() > cap {
        return Err(Error::ResourceLimit {
            required: p.n_qubits() as u64,
            cap: cap as u64,
        });
    }
    let mut state = StateVector::zero_state(p.n_qubits());
    for gate in p.gates() {
        state.apply_x_rotation(gate.as_mask()?, p.theta());
    }
    Ok(state)
}

/// Exact output distribution of the program: |⟨x|U|0ⁿ⟩|².
pub fn simulate(p: &XProgram) -> Result<OutputDistribution, Error> {
    evolve(p)?.probabilities()
}

/// [`simulate`] with an explicit qubit cap.
pub fn simulate_with_cap(p: &XProgram, cap: usize) -> Result<OutputDistribution, Error> {
    evolve_with_cap(p, cap)?.probabilities()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example_keyed_program, example_keyed_program_with_theta};
    use crate::gf2::BitVector;
    use core::f64::consts::PI;

    #[test]
    fn empty_program_is_point_mass() {
        let p = XProgram::new(3, PI / 8.0, alloc::vec![]).unwrap();
        let d = simulate(&p).unwrap();
        assert_eq!(d.probs()[0], 1.0);
        assert!(d.probs()[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn single_qubit_rotation() {
        // e^{iθX}|0⟩ = cosθ|0⟩ + i·sinθ|1⟩
        let p = XProgram::new(1, PI / 8.0, alloc::vec![BitVector::from_bits(&[1])]).unwrap();
        let d = simulate(&p).unwrap();
        let c = libm::cos(PI / 8.0);
        let s = libm::sin(PI / 8.0);
        assert!((d.probs()[0] - c * c).abs() < 1e-15);
        assert!((d.probs()[1] - s * s).abs() < 1e-15);
    }

    #[test]
    fn example_program_bias() {
        let kp = example_keyed_program();
        let d = simulate(kp.program()).unwrap();
        let b = d.bias(kp.secret()).unwrap();
        assert!((b - 0.8535533905932737).abs() < 1e-12, "bias = {b}");
    }

    #[test]
    fn theta_quarter_pi_is_classical_boundary() {
        let kp = example_keyed_program_with_theta(PI / 4.0);
        let d = simulate(kp.program()).unwrap();
        let b = d.bias(kp.secret()).unwrap();
        assert!((b - 0.5).abs() < 1e-12, "bias = {b}");
    }

    #[test]
    fn gate_order_invariance() {
        let kp = example_keyed_program();
        let d1 = simulate(kp.program()).unwrap();
        let mut gates = kp.program().gates().to_vec();
        gates.reverse();
        gates.swap(2, 6);
        let p2 = XProgram::new(5, PI / 8.0, gates).unwrap();
        let d2 = simulate(&p2).unwrap();
        for (a, b) in d1.probs().iter().zip(d2.probs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_preserved() {
        let kp = example_keyed_program();
        let sv = evolve(kp.program()).unwrap();
        assert!((sv.norm_squared() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn qubit_cap_enforced() {
        let p = XProgram::new(6, PI / 8.0, alloc::vec![BitVector::basis(6, 0)]).unwrap();
        assert!(matches!(
            simulate_with_cap(&p, 5),
            Err(Error::ResourceLimit { required: 6, cap: 5 })
        ));
    }
}
