//! Classical prover strategies used as negative controls.
//!
//! Both strategies see only the public [`XProgram`]; the secret never enters
//! these code paths.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;

use crate::dist::SampleSet;
use crate::xprogram::XProgram;
use crate::Error;

fn n_bit_mask(n_qubits: usize) -> u64 {
    if n_qubits >= 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}

/// The correlation-guessing spoofer: per shot, draw random vectors d and e,
/// keep the gates non-orthogonal to both, and answer with their XOR. On a
/// QRC challenge this lands near bias 0.75 against the hidden secret.
pub fn qrc_attack_respond(
    p: &XProgram,
    shots: u64,
    rng: &mut impl Rng,
) -> Result<SampleSet, Error> {
    if p.gates().is_empty() {
        return Err(Error::InvalidParameter(
            "attack requires a nonempty gate list".into(),
        ));
    }
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be positive".into()));
    }
    let mask = n_bit_mask(p.n_qubits());
    let gate_masks: Vec<u64> = p
        .gates()
        .iter()
        .map(|g| g.as_mask())
        .collect::<Result<_, _>>()?;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for _ in 0..shots {
        let d = rng.gen::<u64>() & mask;
        let e = rng.gen::<u64>() & mask;
        let mut y = 0u64;
        for &g in &gate_masks {
            if (g & d).count_ones() % 2 == 1 && (g & e).count_ones() % 2 == 1 {
                y ^= g;
            }
        }
        *counts.entry(y).or_insert(0) += 1;
    }
    SampleSet::from_counts(p.n_qubits(), counts)
}

/// A prover that answers uniformly random bitstrings (bias 0.5 against any
/// nonzero secret).
pub fn uniform_respond(
    n_qubits: usize,
    shots: u64,
    rng: &mut impl Rng,
) -> Result<SampleSet, Error> {
    if n_qubits == 0 || n_qubits > 64 {
        return Err(Error::InvalidParameter(alloc::format!(
            "unsupported qubit count {n_qubits}"
        )));
    }
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be positive".into()));
    }
    let mask = n_bit_mask(n_qubits);
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(rng.gen::<u64>() & mask).or_insert(0) += 1;
    }
    SampleSet::from_counts(n_qubits, counts)
}
