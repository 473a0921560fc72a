//! Well-known reference instances used by tests and the self-test suite.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::gf2::BitVector;
use crate::xprogram::{KeyedProgram, XProgram};

/// The canonical 10-gate, 5-qubit instance with secret s = (1,1,1,1,0) and
/// θ = π/8: seven main gates and three redundant ones (X₃X₄, X₁X₃, X₁X₄).
/// Its exact bias is cos²(π/8).
pub fn example_keyed_program() -> KeyedProgram {
    let gates: Vec<BitVector> = [
        [0, 1, 0, 0, 0],
        [0, 0, 1, 0, 0],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 1, 1],
        [0, 1, 0, 0, 1],
        [0, 1, 1, 1, 0],
        [0, 0, 1, 0, 1],
        [0, 0, 1, 1, 0],
        [1, 0, 1, 0, 0],
        [1, 0, 0, 1, 0],
    ]
    .iter()
    .map(|bits| BitVector::from_bits(bits))
    .collect();
    let program = XProgram::new(5, PI / 8.0, gates).expect("valid fixture");
    KeyedProgram::new(program, BitVector::from_bits(&[1, 1, 1, 1, 0])).expect("valid fixture")
}

/// Same gate list with a caller-chosen angle.
pub fn example_keyed_program_with_theta(theta: f64) -> KeyedProgram {
    let base = example_keyed_program();
    let program = XProgram::new(
        base.program().n_qubits(),
        theta,
        base.program().gates().to_vec(),
    )
    .expect("valid fixture");
    KeyedProgram::new(program, base.secret().clone()).expect("valid fixture")
}
