//! Core library for the IQP verification game.
//!
//! Alice hides a secret bitstring `s` inside an X-program built from a
//! quadratic residue code, ships the program to an untrusted prover, and
//! scores the returned samples by the probability mass on strings orthogonal
//! to `s`. An honest quantum device lands at cos²(π/8) ≈ 0.854, the best
//! known classical strategy at 0.75, and a decohered or random responder
//! at 0.5.
//!
//! This crate is `no_std` (with `alloc`) and holds the in-memory machinery:
//!
//! - [`gf2`]: packed bit vectors/matrices, quadratic residues, span
//!   enumeration;
//! - [`xprogram`]: keyed X-program construction, scrambling, and the exact
//!   bias formula;
//! - [`sim`]: exact statevector evolution of X-programs;
//! - [`dist`]: output distributions, sampling, Walsh–Hadamard analysis and
//!   the dephasing channel;
//! - [`adversary`]: classical spoofing strategies used as negative controls;
//! - [`verifier`]: bias estimation, noise-rate fitting and verdicts.
//!
//! Bit-order convention used everywhere: qubit 0 is the first component of a
//! [`gf2::BitVector`] and the least-significant bit of an outcome integer.
//! The literature's 1-based component `j` maps to index `j - 1`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adversary;
pub mod dist;
mod error;
pub mod fixtures;
pub mod gf2;
pub mod sim;
pub mod verifier;
pub mod xprogram;

pub use dist::{OutputDistribution, SampleSet};
pub use error::Error;
pub use gf2::{BitMatrix, BitVector};
pub use sim::StateVector;
pub use verifier::{DecisionConfig, VerificationReport, Verdict};
pub use xprogram::{KeyedProgram, XProgram};

/// The honest quantum value of the bias, cos²(π/8).
pub const QUANTUM_BIAS: f64 = 0.8535533905932737;
/// Bias achieved by the best known classical spoofing strategy.
pub const CLASSICAL_BIAS: f64 = 0.75;
/// Bias of a uniform responder.
pub const RANDOM_BIAS: f64 = 0.5;
