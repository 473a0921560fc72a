//! OpenQASM 2.0 export of X-programs in IQP circuit form.
//!
//! The emitted circuit is H on every qubit, one diagonal block per gate
//! (a CNOT parity chain into the last support qubit, a phase rotation
//! there, and the chain undone), H on every qubit again, then measurement.
//! All-to-all connectivity is assumed; routing is the transpiler's job.

use std::f64::consts::PI;
use std::fmt::Write;

use iqp_core::XProgram;

const THETA_TDG_TOL: f64 = 1e-12;

/// Renders the program as OpenQASM 2.0 text. At θ = π/8 the diagonal
/// rotation is `tdg`; any other angle uses `rz(-2θ)` on the last support
/// qubit.
pub fn export_qasm(p: &XProgram) -> String {
    let n = p.n_qubits();
    let mut out = String::new();
    writeln!(out, "OPENQASM 2.0;").unwrap();
    writeln!(out, "include \"qelib1.inc\";").unwrap();
    writeln!(out, "qreg q[{n}];").unwrap();
    writeln!(out, "creg c[{n}];").unwrap();
    let hadamard_layer = |out: &mut String| {
        for i in 0..n {
            writeln!(out, "h q[{i}];").unwrap();
        }
    };
    hadamard_layer(&mut out);
    let use_tdg = (p.theta() - PI / 8.0).abs() < THETA_TDG_TOL;
    for gate in p.gates() {
        let support = gate.support();
        let last = *support.last().expect("gates are nonzero");
        for pair in support.windows(2) {
            writeln!(out, "cx q[{}],q[{}];", pair[0], pair[1]).unwrap();
        }
        if use_tdg {
            writeln!(out, "tdg q[{last}];").unwrap();
        } else {
            writeln!(out, "rz({}) q[{last}];", -2.0 * p.theta()).unwrap();
        }
        for pair in support.windows(2).rev() {
            writeln!(out, "cx q[{}],q[{}];", pair[0], pair[1]).unwrap();
        }
    }
    hadamard_layer(&mut out);
    for i in 0..n {
        writeln!(out, "measure q[{i}] -> c[{i}];").unwrap();
    }
    out
}
