//! The `iqp` command line: Alice's side of the game plus prover emulators.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use iqp_core::adversary::{qrc_attack_respond, uniform_respond};
use iqp_core::dist::sample;
use iqp_core::sim::simulate;
use iqp_core::verifier::build_report;
use iqp_core::xprogram::{generate_qrc_keyed, scramble};
use iqp_core::{DecisionConfig, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::formats::{
    self, BitOrder, ChallengeFile, ChallengeMetadata, CountsFile, DistributionFile, KeyFile,
    KeyProvenance,
};
use crate::{qasm, report, selftest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "iqp",
    version,
    about = "Cryptographic verification game for IQP-based quantum cloud computing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a scrambled challenge file and the matching private key file
    Generate {
        /// Code parameter; must be prime with 8 | (q + 1), e.g. 7, 23, 31
        #[arg(long)]
        q: u64,
        /// Number of redundant gates appended before scrambling
        #[arg(long, default_value_t = 3)]
        redundant: usize,
        /// Number of secret-preserving column-add scrambles
        #[arg(long, default_value_t = 50)]
        scrambles: usize,
        /// 64-bit RNG seed; identical seeds give identical files
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "challenge.json")]
        challenge_out: PathBuf,
        #[arg(long, default_value = "key.json")]
        key_out: PathBuf,
    },
    /// Emit the challenge as an OpenQASM 2.0 circuit
    ExportQasm {
        #[arg(long)]
        challenge: PathBuf,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the exact output distribution of a challenge
    Simulate {
        #[arg(long)]
        challenge: PathBuf,
        /// Dephasing rate applied to the exact distribution
        #[arg(long)]
        epsilon: Option<f64>,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Act as an honest quantum prover: simulate and sample
    Sample {
        #[arg(long)]
        challenge: PathBuf,
        #[arg(long)]
        shots: u64,
        #[arg(long)]
        seed: u64,
        /// Dephasing rate applied before sampling
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value = "counts.json")]
        out: PathBuf,
    },
    /// Act as the classical spoofing prover
    Attack {
        #[arg(long)]
        challenge: PathBuf,
        #[arg(long)]
        shots: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "counts.json")]
        out: PathBuf,
    },
    /// Act as a prover answering uniformly random bitstrings
    Random {
        #[arg(long)]
        challenge: PathBuf,
        #[arg(long)]
        shots: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "counts.json")]
        out: PathBuf,
    },
    /// Score a counts file against the private key
    Verify {
        #[arg(long)]
        counts: PathBuf,
        #[arg(long)]
        key: PathBuf,
        /// Challenge file used to compute the ideal distribution for the
        /// noise-rate fit
        #[arg(long)]
        ideal_challenge: Option<PathBuf>,
        /// Write the report as JSON to this path as well
        #[arg(long)]
        json_out: Option<PathBuf>,
        /// Exit with code 1 unless the verdict is QUANTUM_CONSISTENT
        #[arg(long)]
        strict: bool,
    },
    /// Run the built-in acceptance checks
    Selftest,
}

/// Parses and executes; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Generate {
            q,
            redundant,
            scrambles,
            seed,
            challenge_out,
            key_out,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut kp = generate_qrc_keyed(q, redundant, &mut rng)?;
            if scrambles > 0 {
                kp = scramble(&kp, scrambles, &mut rng)?;
            }
            let challenge = ChallengeFile::from_program(
                kp.program(),
                Some(ChallengeMetadata { q: Some(q) }),
            );
            formats::write_challenge(&challenge_out, &challenge)?;
            let key = KeyFile {
                format_version: formats::FORMAT_VERSION,
                secret: kp.secret().to_string(),
                provenance: KeyProvenance {
                    q,
                    n_redundant: redundant,
                    scrambles,
                    seed,
                },
            };
            formats::write_key(&key_out, &key)?;
            eprintln!(
                "wrote {} ({} qubits, {} gates) and {}",
                challenge_out.display(),
                kp.program().n_qubits(),
                kp.program().gates().len(),
                key_out.display()
            );
            Ok(EXIT_OK)
        }
        Command::ExportQasm { challenge, out } => {
            let program = formats::read_challenge_program(&challenge)?;
            emit_text(out.as_deref(), &qasm::export_qasm(&program))?;
            Ok(EXIT_OK)
        }
        Command::Simulate {
            challenge,
            epsilon,
            out,
        } => {
            let program = formats::read_challenge_program(&challenge)?;
            let mut dist = simulate(&program)?;
            if let Some(eps) = epsilon {
                dist = dist.apply_dephasing(eps)?;
            }
            let file = DistributionFile::from_distribution(&dist);
            match out {
                Some(path) => formats::write_distribution(&path, &file)?,
                None => println!("{}", serde_json::to_string_pretty(&file)?),
            }
            Ok(EXIT_OK)
        }
        Command::Sample {
            challenge,
            shots,
            seed,
            epsilon,
            out,
        } => {
            let program = formats::read_challenge_program(&challenge)?;
            let mut dist = simulate(&program)?;
            if let Some(eps) = epsilon {
                dist = dist.apply_dephasing(eps)?;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let samples = sample(&dist, shots, &mut rng)?;
            let file = CountsFile::from_samples(&samples, BitOrder::Qubit0Leftmost);
            formats::write_counts(&out, &file)?;
            Ok(EXIT_OK)
        }
        Command::Attack {
            challenge,
            shots,
            seed,
            out,
        } => {
            let program = formats::read_challenge_program(&challenge)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let samples = qrc_attack_respond(&program, shots, &mut rng)?;
            let file = CountsFile::from_samples(&samples, BitOrder::Qubit0Leftmost);
            formats::write_counts(&out, &file)?;
            Ok(EXIT_OK)
        }
        Command::Random {
            challenge,
            shots,
            seed,
            out,
        } => {
            let program = formats::read_challenge_program(&challenge)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let samples = uniform_respond(program.n_qubits(), shots, &mut rng)?;
            let file = CountsFile::from_samples(&samples, BitOrder::Qubit0Leftmost);
            formats::write_counts(&out, &file)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            counts,
            key,
            ideal_challenge,
            json_out,
            strict,
        } => {
            let samples = formats::read_counts(&counts)?;
            let key = formats::read_key(&key)?;
            let secret = key.secret_vector()?;
            if secret.len() != samples.n_qubits() {
                bail!(
                    "key secret has {} bits but counts cover {} qubits",
                    secret.len(),
                    samples.n_qubits()
                );
            }
            let ideal = match ideal_challenge {
                Some(path) => {
                    let program = formats::read_challenge_program(&path)?;
                    Some(simulate(&program)?)
                }
                None => None,
            };
            let report = build_report(
                &samples,
                &secret,
                ideal.as_ref(),
                &DecisionConfig::default(),
            )?;
            print!("{}", report::render_text(&report));
            if let Some(path) = json_out {
                let text = serde_json::to_string_pretty(&report::render_json(&report))?;
                std::fs::write(&path, text + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if strict && report.verdict != Verdict::QuantumConsistent {
                return Ok(EXIT_VERIFICATION_NEGATIVE);
            }
            Ok(EXIT_OK)
        }
        Command::Selftest => {
            let failures = selftest::run_all(&mut std::io::stdout())?;
            if failures == 0 {
                Ok(EXIT_OK)
            } else {
                Ok(EXIT_VERIFICATION_NEGATIVE)
            }
        }
    }
}

fn emit_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}
