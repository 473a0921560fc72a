//! Acceptance gate: every release criterion as its own test, each printing
//! one pass/fail line. `cargo test --test acceptance` is the sign-off run.

use iqp_tools::selftest;

fn gate(name: &str, check: fn() -> Result<String, String>) {
    match check() {
        Ok(detail) => println!("[PASS] {name}: {detail}"),
        Err(detail) => {
            println!("[FAIL] {name}: {detail}");
            panic!("{name}: {detail}");
        }
    }
}

#[test]
fn criterion_1_exact_quantum_bias() {
    gate("exact quantum bias (q=7, q=23)", selftest::check_exact_bias);
}

#[test]
fn criterion_2_scramble_redundancy_invariance() {
    gate("scramble/redundancy invariance", selftest::check_invariance);
}

#[test]
fn criterion_3_classical_attack_landmark() {
    gate("classical attack landmark", selftest::check_attack);
}

#[test]
fn criterion_4_random_responder_landmark() {
    gate("random-responder landmark", selftest::check_random_responder);
}

#[test]
fn criterion_5_noise_pipeline() {
    gate("noise pipeline", selftest::check_noise_pipeline);
}

#[test]
fn criterion_6_reference_instance_replication() {
    gate("reference instance replication", selftest::check_reference_instance);
}

#[test]
fn criterion_7_end_to_end_protocol() {
    gate("end-to-end protocol", selftest::check_end_to_end);
}

#[test]
fn criterion_8_qasm_contract() {
    gate("qasm contract", selftest::check_qasm_contract);
}

#[test]
fn criterion_9_hardware_fixture_ingestion() {
    gate("hardware fixture ingestion", selftest::check_hardware_fixtures);
}
