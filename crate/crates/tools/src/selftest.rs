//! The built-in acceptance suite behind `iqp selftest`.
//!
//! Each check is a standalone function returning a pass message or a failure
//! description, so the integration tests can assert them individually while
//! the CLI prints one line per check.

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use anyhow::Result;
use iqp_core::adversary::{qrc_attack_respond, uniform_respond};
use iqp_core::dist::{sample, OutputDistribution};
use iqp_core::fixtures::{example_keyed_program, example_keyed_program_with_theta};
use iqp_core::gf2::BitVector;
use iqp_core::sim::simulate;
use iqp_core::verifier::{decide, estimate_bias, fit_epsilon};
use iqp_core::xprogram::{exact_bias_qrc, generate_qrc_keyed, scramble};
use iqp_core::{DecisionConfig, KeyedProgram, Verdict, QUANTUM_BIAS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::formats::CountsFile;
use crate::{cli, qasm};

type Check = std::result::Result<String, String>;

/// Reference OpenQASM 2.0 interpreter used to validate [`qasm::export_qasm`]
/// independently of the X-program simulator.
pub mod interp {
    /// Dense statevector over `n` qubits; qubit 0 is the least-significant
    /// index bit, matching the exporter's `q[i]` numbering.
    pub struct Interp {
        n: usize,
        amps: Vec<(f64, f64)>,
    }

    impl Interp {
        fn new(n: usize) -> Self {
            let mut amps = vec![(0.0, 0.0); 1 << n];
            amps[0] = (1.0, 0.0);
            Interp { n, amps }
        }

        fn h(&mut self, k: usize) {
            let bit = 1usize << k;
            let r = 1.0 / f64::sqrt(2.0);
            for x in 0..self.amps.len() {
                if x & bit == 0 {
                    let a = self.amps[x];
                    let b = self.amps[x | bit];
                    self.amps[x] = (r * (a.0 + b.0), r * (a.1 + b.1));
                    self.amps[x | bit] = (r * (a.0 - b.0), r * (a.1 - b.1));
                }
            }
        }

        fn cx(&mut self, control: usize, target: usize) {
            let cbit = 1usize << control;
            let tbit = 1usize << target;
            for x in 0..self.amps.len() {
                if x & cbit != 0 && x & tbit == 0 {
                    self.amps.swap(x, x | tbit);
                }
            }
        }

        /// Multiplies amplitudes with qubit `k` set by e^{i phase}.
        fn phase(&mut self, k: usize, phase: f64) {
            let bit = 1usize << k;
            let (s, c) = phase.sin_cos();
            for (x, a) in self.amps.iter_mut().enumerate() {
                if x & bit != 0 {
                    *a = (a.0 * c - a.1 * s, a.0 * s + a.1 * c);
                }
            }
        }

        pub fn probabilities(&self) -> Vec<f64> {
            self.amps.iter().map(|a| a.0 * a.0 + a.1 * a.1).collect()
        }

        pub fn n_qubits(&self) -> usize {
            self.n
        }
    }

    fn qubit_index(arg: &str) -> Result<usize, String> {
        let inner = arg
            .strip_prefix("q[")
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| format!("bad qubit reference {arg:?}"))?;
        inner.parse().map_err(|e| format!("bad index {arg:?}: {e}"))
    }

    /// Parses and runs a circuit emitted by the exporter. Supported
    /// statements: `h`, `cx`, `tdg`, `rz(λ)`; `measure`/`barrier` and the
    /// declarations are recognized and skipped.
    pub fn run(text: &str) -> Result<Interp, String> {
        let mut state: Option<Interp> = None;
        for raw in text.lines() {
            let line = raw.trim().trim_end_matches(';');
            if line.is_empty()
                || line.starts_with("OPENQASM")
                || line.starts_with("include")
                || line.starts_with("creg")
                || line.starts_with("measure")
                || line.starts_with("barrier")
                || line.starts_with("//")
            {
                continue;
            }
            if let Some(decl) = line.strip_prefix("qreg q[") {
                let n: usize = decl
                    .strip_suffix(']')
                    .ok_or_else(|| format!("bad qreg line {raw:?}"))?
                    .parse()
                    .map_err(|e| format!("bad qreg size: {e}"))?;
                state = Some(Interp::new(n));
                continue;
            }
            let st = state.as_mut().ok_or("statement before qreg")?;
            let (op, args) = line
                .split_once(' ')
                .ok_or_else(|| format!("bad statement {raw:?}"))?;
            if op == "h" {
                st.h(qubit_index(args)?);
            } else if op == "cx" {
                let (a, b) = args
                    .split_once(',')
                    .ok_or_else(|| format!("cx needs two qubits: {raw:?}"))?;
                st.cx(qubit_index(a)?, qubit_index(b)?);
            } else if op == "tdg" {
                st.phase(qubit_index(args)?, -std::f64::consts::PI / 4.0);
            } else if let Some(param) = op.strip_prefix("rz(") {
                let lambda: f64 = param
                    .strip_suffix(')')
                    .ok_or_else(|| format!("bad rz statement {raw:?}"))?
                    .parse()
                    .map_err(|e| format!("bad rz angle: {e}"))?;
                st.phase(qubit_index(args)?, lambda);
            } else {
                return Err(format!("unsupported statement {raw:?}"));
            }
        }
        state.ok_or_else(|| "no qreg declaration".into())
    }
}

fn q7_keyed(seed: u64, redundant: usize, scrambles: usize) -> KeyedProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kp = generate_qrc_keyed(7, redundant, &mut rng).expect("q=7 is valid");
    if scrambles > 0 {
        scramble(&kp, scrambles, &mut rng).expect("scramble")
    } else {
        kp
    }
}

/// Exact bias formula agrees with the simulator for q = 7 and q = 23.
pub fn check_exact_bias() -> Check {
    let start = Instant::now();
    let formula7 = exact_bias_qrc(7, PI / 8.0).map_err(|e| e.to_string())?;
    if (formula7 - QUANTUM_BIAS).abs() > 1e-12 {
        return Err(format!("exact q=7 bias {formula7} != cos^2(pi/8)"));
    }
    for q in [7u64, 23] {
        let kp = q7_like(q);
        let dist = simulate(kp.program()).map_err(|e| e.to_string())?;
        let sim_bias = dist.bias(kp.secret()).map_err(|e| e.to_string())?;
        let formula = exact_bias_qrc(q, PI / 8.0).map_err(|e| e.to_string())?;
        if (sim_bias - formula).abs() > 1e-9 {
            return Err(format!(
                "q={q}: simulator bias {sim_bias} vs formula {formula}"
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() > 5.0 {
        return Err(format!("took {elapsed:.2?}, budget is 5 s"));
    }
    Ok(format!(
        "formula = cos^2(pi/8) = {formula7:.10}; simulator agrees for q=7 and q=23 in {elapsed:.2?}"
    ))
}

fn q7_like(q: u64) -> KeyedProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    generate_qrc_keyed(q, 0, &mut rng).expect("valid q")
}

/// Bias is invariant under 100 scramble sequences and 100 redundant
/// augmentations of the q = 7 program.
pub fn check_invariance() -> Check {
    let base = q7_keyed(3, 0, 0);
    let reference = simulate(base.program())
        .and_then(|d| d.bias(base.secret()))
        .map_err(|e| e.to_string())?;
    let mut max_dev: f64 = 0.0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let scrambled = scramble(&base, 50, &mut rng).map_err(|e| e.to_string())?;
        let b = simulate(scrambled.program())
            .and_then(|d| d.bias(scrambled.secret()))
            .map_err(|e| e.to_string())?;
        max_dev = max_dev.max((b - reference).abs());
    }
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
        let redundant = 1 + (seed % 5) as usize;
        let kp = generate_qrc_keyed(7, redundant, &mut rng).map_err(|e| e.to_string())?;
        let b = simulate(kp.program())
            .and_then(|d| d.bias(kp.secret()))
            .map_err(|e| e.to_string())?;
        max_dev = max_dev.max((b - reference).abs());
    }
    if max_dev > 1e-12 {
        return Err(format!("bias drifted by {max_dev:.3e} (limit 1e-12)"));
    }
    Ok(format!(
        "bias stable at {reference:.10} over 200 variants (max deviation {max_dev:.1e})"
    ))
}

/// Exhaustive expected bias of the (d, e) spoofing strategy on a program.
fn attack_oracle_bias(p: &iqp_core::XProgram, s: &BitVector) -> Result<f64, String> {
    let n = p.n_qubits();
    if n > 16 {
        return Err(format!("oracle is exponential in n; n = {n} is too large"));
    }
    let gate_masks: Vec<u64> = p
        .gates()
        .iter()
        .map(|g| g.as_mask().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let s_mask = s.as_mask().map_err(|e| e.to_string())?;
    let parity = |a: u64, b: u64| (a & b).count_ones() & 1;
    let mut orthogonal = 0u64;
    for d in 0..1u64 << n {
        for e in 0..1u64 << n {
            let mut y = 0u64;
            for &g in &gate_masks {
                if parity(g, d) == 1 && parity(g, e) == 1 {
                    y ^= g;
                }
            }
            if parity(y, s_mask) == 0 {
                orthogonal += 1;
            }
        }
    }
    Ok(orthogonal as f64 / (1u64 << (2 * n)) as f64)
}

/// Classical attack matches its exhaustive oracle; oracle vs the 0.75
/// landmark is reported.
pub fn check_attack() -> Check {
    let kp = q7_keyed(5, 3, 50);
    let oracle = attack_oracle_bias(kp.program(), kp.secret())?;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let samples =
        qrc_attack_respond(kp.program(), 100_000, &mut rng).map_err(|e| e.to_string())?;
    let (empirical, _) = estimate_bias(&samples, kp.secret()).map_err(|e| e.to_string())?;
    if (empirical - oracle).abs() > 0.01 {
        return Err(format!(
            "empirical {empirical:.4} vs oracle {oracle:.4} (limit 0.01)"
        ));
    }
    Ok(format!(
        "empirical {empirical:.4} matches oracle {oracle:.6}; oracle - 0.75 = {:+.2e}",
        oracle - 0.75
    ))
}

/// Uniform responder lands at 0.5 and is classified RANDOM_CONSISTENT.
pub fn check_random_responder() -> Check {
    let kp = q7_keyed(5, 3, 50);
    let mut rng = ChaCha8Rng::seed_from_u64(123);
    let samples = uniform_respond(kp.program().n_qubits(), 100_000, &mut rng)
        .map_err(|e| e.to_string())?;
    let (bias, se) = estimate_bias(&samples, kp.secret()).map_err(|e| e.to_string())?;
    if (bias - 0.5).abs() > 0.01 {
        return Err(format!("bias {bias:.4} is not within 0.01 of 0.5"));
    }
    let verdict = decide(bias, se, &DecisionConfig::default());
    if verdict != Verdict::RandomConsistent {
        return Err(format!("verdict {} (expected RANDOM_CONSISTENT)", verdict.as_str()));
    }
    Ok(format!("bias {bias:.4} +/- {se:.4}, verdict RANDOM_CONSISTENT"))
}

/// Brute-force application of the i.i.d. bit-flip kernel.
fn bitflip_convolution(d: &OutputDistribution, eps: f64) -> OutputDistribution {
    let n = d.n_qubits();
    let probs = d.probs();
    let mut out = vec![0.0; probs.len()];
    for (y, slot) in out.iter_mut().enumerate() {
        for (x, &p) in probs.iter().enumerate() {
            let flips = (x ^ y).count_ones();
            *slot += p * eps.powi(flips as i32) * (1.0 - eps).powi((n as u32 - flips) as i32);
        }
    }
    OutputDistribution::new(n, out).expect("kernel preserves normalization")
}

/// Dephasing channel equals the bit-flip convolution; the rate fit recovers
/// injected rates exactly and from finite samples.
pub fn check_noise_pipeline() -> Check {
    let kp = example_keyed_program();
    let ideal = simulate(kp.program()).map_err(|e| e.to_string())?;
    for eps in [0.0, 0.0679, 0.2, 0.5] {
        let fast = ideal.apply_dephasing(eps).map_err(|e| e.to_string())?;
        let slow = bitflip_convolution(&ideal, eps);
        for (a, b) in fast.probs().iter().zip(slow.probs()) {
            if (a - b).abs() > 1e-12 {
                return Err(format!("channel mismatch at eps={eps}: {a} vs {b}"));
            }
        }
    }
    let mut grid_worst: f64 = 0.0;
    for k in 1..=25 {
        let eps = 0.01 * k as f64;
        let noisy = ideal.apply_dephasing(eps).map_err(|e| e.to_string())?;
        let (fit, _) = fit_epsilon(&noisy, &ideal).map_err(|e| e.to_string())?;
        grid_worst = grid_worst.max((fit - eps).abs());
    }
    if grid_worst > 1e-8 {
        return Err(format!("grid fit error {grid_worst:.3e} (limit 1e-8)"));
    }
    let eps = 0.0679;
    let noisy = ideal.apply_dephasing(eps).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let samples = sample(&noisy, 1_000_000, &mut rng).map_err(|e| e.to_string())?;
    let empirical = samples.to_distribution().map_err(|e| e.to_string())?;
    let (fit, _) = fit_epsilon(&empirical, &ideal).map_err(|e| e.to_string())?;
    if (fit - eps).abs() > 0.01 {
        return Err(format!("sampled fit {fit:.4} vs injected {eps} (limit 0.01)"));
    }
    Ok(format!(
        "channel exact; grid fit error {grid_worst:.1e}; sampled fit {fit:.4} for injected {eps}"
    ))
}

/// The worked five-qubit instance hits the published bias and correlation;
/// the theta = pi/4 control collapses to 0.5.
pub fn check_reference_instance() -> Check {
    let kp = example_keyed_program();
    let dist = simulate(kp.program()).map_err(|e| e.to_string())?;
    let bias = dist.bias(kp.secret()).map_err(|e| e.to_string())?;
    if (bias - QUANTUM_BIAS).abs() > 1e-12 {
        return Err(format!("bias {bias} != cos^2(pi/8)"));
    }
    let corr = dist.correlation(kp.secret()).map_err(|e| e.to_string())?;
    if (corr - f64::sqrt(0.5)).abs() > 1e-9 {
        return Err(format!("correlation {corr} != 1/sqrt(2)"));
    }
    let control = example_keyed_program_with_theta(PI / 4.0);
    let control_bias = simulate(control.program())
        .and_then(|d| d.bias(control.secret()))
        .map_err(|e| e.to_string())?;
    if (control_bias - 0.5).abs() > 1e-12 {
        return Err(format!("pi/4 control bias {control_bias} != 0.5"));
    }
    Ok(format!(
        "bias {bias:.6}, correlation {corr:.5}, pi/4 control at {control_bias:.3}"
    ))
}

fn read_verdict(path: &std::path::Path) -> Result<String, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    v["verdict"]
        .as_str()
        .map(String::from)
        .ok_or_else(|| "report has no verdict".into())
}

/// generate -> sample -> verify and generate -> attack -> verify, driven
/// through the real CLI entry point.
pub fn check_end_to_end() -> Check {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).display().to_string();
    let run = |args: &[String]| -> Result<(), String> {
        let mut argv = vec!["iqp".to_string()];
        argv.extend_from_slice(args);
        match cli::run(argv.clone()) {
            0 => Ok(()),
            code => Err(format!("`{}` exited with {code}", argv.join(" "))),
        }
    };
    let s = |parts: &[&str]| parts.iter().map(|p| p.to_string()).collect::<Vec<_>>();

    run(&s(&[
        "generate", "--q", "7", "--redundant", "3", "--scrambles", "50", "--seed", "42",
        "--challenge-out", &path("challenge.json"), "--key-out", &path("key.json"),
    ]))?;
    run(&s(&[
        "sample", "--challenge", &path("challenge.json"), "--shots", "100000",
        "--seed", "7", "--out", &path("honest.json"),
    ]))?;
    run(&s(&[
        "verify", "--counts", &path("honest.json"), "--key", &path("key.json"),
        "--ideal-challenge", &path("challenge.json"),
        "--json-out", &path("honest_report.json"),
    ]))?;
    let honest = read_verdict(&dir.path().join("honest_report.json"))?;
    if honest != "QUANTUM_CONSISTENT" {
        return Err(format!("honest run classified {honest}"));
    }
    run(&s(&[
        "attack", "--challenge", &path("challenge.json"), "--shots", "100000",
        "--seed", "8", "--out", &path("spoofed.json"),
    ]))?;
    run(&s(&[
        "verify", "--counts", &path("spoofed.json"), "--key", &path("key.json"),
        "--json-out", &path("spoofed_report.json"),
    ]))?;
    let spoofed = read_verdict(&dir.path().join("spoofed_report.json"))?;
    if spoofed != "CLASSICAL_ATTACK_CONSISTENT" {
        return Err(format!("attack run classified {spoofed}"));
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() > 30.0 {
        return Err(format!("took {elapsed:.2?}, budget is 30 s"));
    }
    Ok(format!(
        "honest QUANTUM_CONSISTENT, attack CLASSICAL_ATTACK_CONSISTENT in {elapsed:.2?}"
    ))
}

/// QASM export has the contracted gate counts and the reference interpreter
/// reproduces the simulator's distribution.
pub fn check_qasm_contract() -> Check {
    let kp = example_keyed_program();
    let text = qasm::export_qasm(kp.program());
    let count = |needle: &str| text.matches(needle).count();
    if count("cx q[") != 16 || count("tdg q[") != 10 || count("h q[") != 10 {
        return Err(format!(
            "gate counts cx={} tdg={} h={} (expected 16/10/10)",
            count("cx q["),
            count("tdg q["),
            count("h q[")
        ));
    }
    let state = interp::run(&text)?;
    let reference = simulate(kp.program()).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for (a, b) in state.probabilities().iter().zip(reference.probs()) {
        worst = worst.max((a - b).abs());
    }
    if worst > 1e-9 {
        return Err(format!("re-simulation deviates by {worst:.3e} (limit 1e-9)"));
    }
    Ok(format!(
        "16 cx / 10 tdg / 10 h; interpreter agrees within {worst:.1e}"
    ))
}

/// Published hardware counts, encoded as fixture files, reproduce the
/// reported biases through the full ingestion and decision path.
pub fn check_hardware_fixtures() -> Check {
    const FIXTURES: [(&str, &str, f64); 5] = [
        ("nmr raw", include_str!("../fixtures/nmr_raw_counts.json"), 0.755),
        (
            "nmr compensated",
            include_str!("../fixtures/nmr_compensated_counts.json"),
            0.866,
        ),
        ("ibmqx4", include_str!("../fixtures/ibmqx4_counts.json"), 0.488),
        ("ibmqx5", include_str!("../fixtures/ibmqx5_counts.json"), 0.492),
        (
            "ibmqx4 main part",
            include_str!("../fixtures/ibmqx4_main_counts.json"),
            0.512,
        ),
    ];
    let secret = BitVector::from_bits(&[1, 1, 1, 1, 0]);
    let mut lines = Vec::new();
    for (name, text, expected) in FIXTURES {
        let file: CountsFile = serde_json::from_str(text)
            .map_err(|e| format!("{name}: unparseable fixture: {e}"))?;
        let samples = file.to_samples().map_err(|e| format!("{name}: {e}"))?;
        let (bias, se) = estimate_bias(&samples, &secret).map_err(|e| e.to_string())?;
        if (bias - expected).abs() > 0.001 {
            return Err(format!(
                "{name}: bias {bias:.4} vs published {expected} (limit 0.001)"
            ));
        }
        let verdict = decide(bias, se, &DecisionConfig::default());
        lines.push(format!("{name} {bias:.3}->{}", verdict.as_str()));
    }
    Ok(lines.join(", "))
}

/// Runs every check, printing one line each; returns the failure count.
pub fn run_all(out: &mut impl Write) -> Result<usize> {
    let checks: [(&str, fn() -> Check); 9] = [
        ("exact quantum bias (q=7, q=23)", check_exact_bias),
        ("scramble/redundancy invariance", check_invariance),
        ("classical attack landmark", check_attack),
        ("random-responder landmark", check_random_responder),
        ("noise pipeline", check_noise_pipeline),
        ("reference instance replication", check_reference_instance),
        ("end-to-end protocol", check_end_to_end),
        ("qasm contract", check_qasm_contract),
        ("hardware fixture ingestion", check_hardware_fixtures),
    ];
    let mut failures = 0;
    for (name, check) in checks {
        match check() {
            Ok(detail) => writeln!(out, "[PASS] {name}: {detail}")?,
            Err(detail) => {
                failures += 1;
                writeln!(out, "[FAIL] {name}: {detail}")?;
            }
        }
    }
    if failures == 0 {
        writeln!(out, "all {} checks passed", 9)?;
    } else {
        writeln!(out, "{failures} of 9 checks FAILED")?;
    }
    Ok(failures)
}
