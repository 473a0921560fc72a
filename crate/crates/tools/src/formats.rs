//! Versioned JSON file formats for the challenge/response exchange.
//!
//! Three files make up the protocol surface: the challenge Alice ships to
//! the prover (never containing the secret), the key file she keeps, and the
//! counts file the prover (or a cloud backend) returns. Bitstring order is
//! ambiguous across backends, so every counts file declares it explicitly.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use iqp_core::gf2::BitVector;
use iqp_core::{OutputDistribution, SampleSet, XProgram};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: unsupported format_version {found} (expected {FORMAT_VERSION})")]
    Version { path: String, found: u32 },
    #[error("{path}: bad bitstring key {key:?}: {reason}")]
    BadKey {
        path: String,
        key: String,
        reason: String,
    },
    #[error("{path}: {reason}")]
    Invalid { path: String, reason: String },
    #[error(transparent)]
    Core(#[from] iqp_core::Error),
}

/// Which end of a bitstring key carries qubit 0.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum BitOrder {
    /// The first character of a key is qubit 0 (the convention of this
    /// toolkit's own output).
    #[serde(rename = "qubit0_leftmost")]
    Qubit0Leftmost,
    /// The last character of a key is qubit 0 (IBM-style strings).
    #[serde(rename = "qubit0_rightmost")]
    Qubit0Rightmost,
}

/// Metadata a challenge may carry for Alice's own records. The generation
/// seed is deliberately not representable here: challenge files are shipped
/// to the prover verbatim.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize, Default)]
pub struct ChallengeMetadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
}

/// The public challenge: gate list (gates-as-rows, first character of each
/// bitstring = qubit 0) and the angle θ as a decimal string.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ChallengeFile {
    pub format_version: u32,
    pub n_qubits: usize,
    pub theta: String,
    pub gates: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<ChallengeMetadata>,
}

impl ChallengeFile {
    pub fn from_program(p: &XProgram, metadata: Option<ChallengeMetadata>) -> Self {
        ChallengeFile {
            format_version: FORMAT_VERSION,
            n_qubits: p.n_qubits(),
            theta: format!("{}", p.theta()),
            gates: p.gates().iter().map(|g| g.to_string()).collect(),
            metadata,
        }
    }

    pub fn to_program(&self) -> Result<XProgram, FormatError> {
        let theta = f64::from_str(&self.theta).map_err(|e| FormatError::Invalid {
            path: String::new(),
            reason: format!("bad theta {:?}: {e}", self.theta),
        })?;
        let gates = self
            .gates
            .iter()
            .map(|s| parse_bitstring(s, self.n_qubits))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|reason| FormatError::Invalid {
                path: String::new(),
                reason,
            })?;
        Ok(XProgram::new(self.n_qubits, theta, gates)?)
    }
}

/// Alice's private key: the secret string plus generation provenance.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct KeyFile {
    pub format_version: u32,
    /// Secret bitstring, first character = qubit 0.
    pub secret: String,
    pub provenance: KeyProvenance,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct KeyProvenance {
    pub q: u64,
    pub n_redundant: usize,
    pub scrambles: usize,
    pub seed: u64,
}

impl KeyFile {
    pub fn secret_vector(&self) -> Result<BitVector, FormatError> {
        let v = parse_bitstring(&self.secret, self.secret.len()).map_err(|reason| {
            FormatError::Invalid {
                path: String::new(),
                reason,
            }
        })?;
        if v.is_zero() {
            return Err(FormatError::Invalid {
                path: String::new(),
                reason: "secret must be nonzero".into(),
            });
        }
        Ok(v)
    }
}

/// Measurement counts keyed by bitstring, with a mandatory bit order.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CountsFile {
    pub format_version: u32,
    pub n_qubits: usize,
    pub bit_order: BitOrder,
    pub counts: BTreeMap<String, u64>,
}

impl CountsFile {
    pub fn from_samples(samples: &SampleSet, order: BitOrder) -> Self {
        let n = samples.n_qubits();
        let counts = samples
            .counts()
            .iter()
            .map(|(&outcome, &count)| (outcome_to_key(outcome, n, order), count))
            .collect();
        CountsFile {
            format_version: FORMAT_VERSION,
            n_qubits: n,
            bit_order: order,
            counts,
        }
    }

    /// Converts to the internal sample set (qubit 0 = least-significant
    /// bit), honoring the declared bit order.
    pub fn to_samples(&self) -> Result<SampleSet, FormatError> {
        let mut pairs = Vec::with_capacity(self.counts.len());
        for (key, &count) in &self.counts {
            let outcome = key_to_outcome(key, self.n_qubits, self.bit_order).map_err(
                |reason| FormatError::BadKey {
                    path: String::new(),
                    key: key.clone(),
                    reason,
                },
            )?;
            pairs.push((outcome, count));
        }
        if pairs.iter().all(|&(_, c)| c == 0) {
            return Err(FormatError::Invalid {
                path: String::new(),
                reason: "total count is zero".into(),
            });
        }
        Ok(SampleSet::from_counts(self.n_qubits, pairs)?)
    }
}

/// An exact output distribution, qubit 0 = least-significant index bit.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct DistributionFile {
    pub format_version: u32,
    pub n_qubits: usize,
    pub probs: Vec<f64>,
}

impl DistributionFile {
    pub fn from_distribution(d: &OutputDistribution) -> Self {
        DistributionFile {
            format_version: FORMAT_VERSION,
            n_qubits: d.n_qubits(),
            probs: d.probs().to_vec(),
        }
    }

    pub fn to_distribution(&self) -> Result<OutputDistribution, FormatError> {
        Ok(OutputDistribution::new(self.n_qubits, self.probs.clone())?)
    }
}

fn parse_bitstring(s: &str, expected_len: usize) -> Result<BitVector, String> {
    if s.len() != expected_len || s.is_empty() {
        return Err(format!(
            "expected {expected_len} characters, found {}",
            s.len()
        ));
    }
    let mut bits = Vec::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '0' => bits.push(0),
            '1' => bits.push(1),
            _ => return Err(format!("character {c:?} is not 0 or 1")),
        }
    }
    Ok(BitVector::from_bits(&bits))
}

fn outcome_to_key(outcome: u64, n_qubits: usize, order: BitOrder) -> String {
    let mut chars: Vec<char> = (0..n_qubits)
        .map(|i| if outcome >> i & 1 == 1 { '1' } else { '0' })
        .collect();
    if order == BitOrder::Qubit0Rightmost {
        chars.reverse();
    }
    chars.into_iter().collect()
}

fn key_to_outcome(key: &str, n_qubits: usize, order: BitOrder) -> Result<u64, String> {
    if key.len() != n_qubits {
        return Err(format!("expected {n_qubits} characters, found {}", key.len()));
    }
    let mut outcome = 0u64;
    for (pos, c) in key.chars().enumerate() {
        let qubit = match order {
            BitOrder::Qubit0Leftmost => pos,
            BitOrder::Qubit0Rightmost => n_qubits - 1 - pos,
        };
        match c {
            '0' => {}
            '1' => outcome |= 1 << qubit,
            _ => return Err(format!("character {c:?} is not 0 or 1")),
        }
    }
    Ok(outcome)
}

fn annotate(mut err: FormatError, path: &Path) -> FormatError {
    let p = path.display().to_string();
    match &mut err {
        FormatError::Invalid { path, .. } | FormatError::BadKey { path, .. } => {
            *path = p;
        }
        _ => {}
    }
    err
}

/// Writes `value` as pretty JSON via a temp file in the same directory,
/// renamed into place.
fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let text = serde_json::to_string_pretty(value).map_err(|source| FormatError::Json {
        path: path.display().to_string(),
        source,
    })?;
    let io_err = |source| FormatError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))
        .map_err(io_err)?;
    use std::io::Write;
    tmp.write_all(text.as_bytes()).map_err(io_err)?;
    tmp.write_all(b"\n").map_err(io_err)?;
    tmp.persist(path)
        .map_err(|e| io_err(e.error))?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| FormatError::Json {
        path: path.display().to_string(),
        source,
    })
}

fn check_version(found: u32, path: &Path) -> Result<(), FormatError> {
    if found != FORMAT_VERSION {
        return Err(FormatError::Version {
            path: path.display().to_string(),
            found,
        });
    }
    Ok(())
}

pub fn write_challenge(path: &Path, file: &ChallengeFile) -> Result<(), FormatError> {
    // The challenge is the Bob-facing artifact; key material must be absent.
    let serialized = serde_json::to_string(file).expect("challenge serializes");
    assert!(
        !serialized.contains("secret") && !serialized.contains("seed"),
        "challenge file must not carry key material"
    );
    write_json(path, file)
}

pub fn read_challenge(path: &Path) -> Result<ChallengeFile, FormatError> {
    let file: ChallengeFile = read_json(path)?;
    check_version(file.format_version, path)?;
    Ok(file)
}

pub fn read_challenge_program(path: &Path) -> Result<XProgram, FormatError> {
    let file = read_challenge(path)?;
    file.to_program().map_err(|e| annotate(e, path))
}

pub fn write_key(path: &Path, file: &KeyFile) -> Result<(), FormatError> {
    write_json(path, file)
}

pub fn read_key(path: &Path) -> Result<KeyFile, FormatError> {
    let file: KeyFile = read_json(path)?;
    check_version(file.format_version, path)?;
    file.secret_vector().map_err(|e| annotate(e, path))?;
    Ok(file)
}

pub fn write_counts(path: &Path, file: &CountsFile) -> Result<(), FormatError> {
    write_json(path, file)
}

/// Reads a counts file and converts it to the internal bit order.
pub fn read_counts(path: &Path) -> Result<SampleSet, FormatError> {
    let file: CountsFile = read_json(path)?;
    check_version(file.format_version, path)?;
    file.to_samples().map_err(|e| annotate(e, path))
}

pub fn write_distribution(path: &Path, file: &DistributionFile) -> Result<(), FormatError> {
    write_json(path, file)
}

pub fn read_distribution(path: &Path) -> Result<OutputDistribution, FormatError> {
    let file: DistributionFile = read_json(path)?;
    check_version(file.format_version, path)?;
    file.to_distribution().map_err(|e| annotate(e, path))
}
