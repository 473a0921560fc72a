//! Output distributions, sampling, Walsh–Hadamard analysis, and the
//! analytic dephasing channel.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::gf2::BitVector;
use crate::Error;

const NORMALIZATION_TOL: f64 = 1e-10;
const NEGATIVE_CLAMP_TOL: f64 = 1e-12;

/// A probability distribution over the 2^n measurement bitstrings.
/// Outcome integer bit i corresponds to qubit i (qubit 0 = LSB).
#[derive(Clone, PartialEq, Debug)]
pub struct OutputDistribution {
    n_qubits: usize,
    probs: Vec<f64>,
}

impl OutputDistribution {
    /// Validates length 2^n, nonnegativity (tiny float negatives are
    /// clamped to 0), and normalization.
    pub fn new(n_qubits: usize, probs: Vec<f64>) -> Result<Self, Error> {
        if n_qubits == 0 || n_qubits >= usize::BITS as usize {
            return Err(Error::InvalidParameter(format!(
                "unsupported qubit count {n_qubits}"
            )));
        }
        if probs.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                left: 1 << n_qubits,
                right: probs.len(),
            });
        }
        let mut probs = probs;
        for p in &mut probs {
            if *p < 0.0 {
                if *p < -NEGATIVE_CLAMP_TOL {
                    return Err(Error::Internal(format!("negative probability {p}")));
                }
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Internal(format!(
                "distribution sums to {total}, not 1"
            )));
        }
        Ok(OutputDistribution { n_qubits, probs })
    }

    /// All mass on the 0ⁿ string.
    pub fn point_mass(n_qubits: usize) -> Self {
        let mut probs = vec![0.0; 1 << n_qubits];
        probs[0] = 1.0;
        OutputDistribution { n_qubits, probs }
    }

    pub fn uniform(n_qubits: usize) -> Self {
        let size = 1usize << n_qubits;
        OutputDistribution {
            n_qubits,
            probs: vec![1.0 / size as f64; size],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// ⟨Z_s⟩ = Σ_x p(x) (−1)^{x·s}, in [−1, 1].
    pub fn correlation(&self, s: &BitVector) -> Result<f64, Error> {
        let mask = self.check_secret(s)?;
        Ok(self
            .probs
            .iter()
            .enumerate()
            .map(|(x, &p)| {
                if (x as u64 & mask).count_ones() % 2 == 0 {
                    p
                } else {
                    -p
                }
            })
            .sum())
    }

    /// Probability bias P_{s⊥} = Σ_{x·s=0} p(x).
    pub fn bias(&self, s: &BitVector) -> Result<f64, Error> {
        let mask = self.check_secret(s)?;
        Ok(self
            .probs
            .iter()
            .enumerate()
            .filter(|(x, _)| (*x as u64 & mask).count_ones() % 2 == 0)
            .map(|(_, &p)| p)
            .sum())
    }

    /// Fourier coefficients p̂(s) = (1/2ⁿ) Σ_x p(x) (−1)^{x·s} for all 2ⁿ
    /// values of s, via the fast Walsh–Hadamard transform.
    pub fn fwht(&self) -> Vec<f64> {
        let mut data = self.probs.clone();
        walsh_hadamard(&mut data);
        let scale = 1.0 / self.probs.len() as f64;
        for v in &mut data {
            *v *= scale;
        }
        data
    }

    /// Applies the collapsed dephasing channel: each Fourier coefficient is
    /// damped by (1 − 2ε)^|s|. Equivalent to an independent bit-flip with
    /// probability ε on every output bit.
    pub fn apply_dephasing(&self, eps: f64) -> Result<OutputDistribution, Error> {
        if !(0.0..=0.5).contains(&eps) {
            return Err(Error::InvalidParameter(format!(
                "dephasing rate {eps} outside [0, 0.5]"
            )));
        }
        let mut data = self.probs.clone();
        walsh_hadamard(&mut data);
        let damp = 1.0 - 2.0 * eps;
        for (s, v) in data.iter_mut().enumerate() {
            *v *= powi(damp, s.count_ones());
        }
        walsh_hadamard(&mut data);
        let scale = 1.0 / self.probs.len() as f64;
        for v in &mut data {
            *v *= scale;
        }
        // The channel is stochastic; renormalize away the float dust.
        let total: f64 = data.iter().sum();
        for v in &mut data {
            *v /= total;
        }
        OutputDistribution::new(self.n_qubits, data)
    }

    fn check_secret(&self, s: &BitVector) -> Result<u64, Error> {
        if s.len() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: s.len(),
            });
        }
        s.as_mask()
    }
}

/// In-place unnormalized Walsh–Hadamard butterfly; applying it twice
/// multiplies by the array length.
pub(crate) fn walsh_hadamard(data: &mut [f64]) {
    debug_assert!(data.len().is_power_of_two());
    let mut half = 1;
    while half < data.len() {
        for block in (0..data.len()).step_by(half * 2) {
            for i in block..block + half {
                let (a, b) = (data[i], data[i + half]);
                data[i] = a + b;
                data[i + half] = a - b;
            }
        }
        half *= 2;
    }
}

fn powi(base: f64, mut exp: u32) -> f64 {
    let mut acc = 1.0;
    let mut b = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= b;
        }
        b *= b;
        exp >>= 1;
    }
    acc
}

/// A multiset of n-bit measurement outcomes, stored as outcome → count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SampleSet {
    n_qubits: usize,
    counts: BTreeMap<u64, u64>,
}

impl SampleSet {
    /// Builds from (outcome, count) pairs; outcomes must fit in n bits and
    /// the total count must be at least 1. Zero counts are dropped.
    pub fn from_counts(
        n_qubits: usize,
        pairs: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Self, Error> {
        if n_qubits == 0 || n_qubits > 64 {
            return Err(Error::InvalidParameter(format!(
                "unsupported qubit count {n_qubits}"
            )));
        }
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for (outcome, count) in pairs {
            if n_qubits < 64 && outcome >= 1u64 << n_qubits {
                return Err(Error::InvalidParameter(format!(
                    "outcome {outcome} does not fit in {n_qubits} bits"
                )));
            }
            if count > 0 {
                *counts.entry(outcome).or_insert(0) += count;
            }
        }
        if counts.is_empty() {
            return Err(Error::InvalidParameter("empty sample set".into()));
        }
        Ok(SampleSet { n_qubits, counts })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// The empirical distribution (counts normalized by the total).
    pub fn to_distribution(&self) -> Result<OutputDistribution, Error> {
        if self.n_qubits >= usize::BITS as usize {
            return Err(Error::ResourceLimit {
                required: u64::MAX,
                cap: 1 << (usize::BITS - 1),
            });
        }
        let total = self.total() as f64;
        let mut probs = vec![0.0; 1usize << self.n_qubits];
        for (&outcome, &count) in &self.counts {
            probs[outcome as usize] = count as f64 / total;
        }
        OutputDistribution::new(self.n_qubits, probs)
    }
}

/// Draws `shots` i.i.d. outcomes from `d` by inverse-CDF sampling;
/// deterministic for a fixed rng stream.
pub fn sample(
    d: &OutputDistribution,
    shots: u64,
    rng: &mut impl Rng,
) -> Result<SampleSet, Error> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be positive".into()));
    }
    let mut cdf = Vec::with_capacity(d.probs.len());
    let mut acc = 0.0;
    for &p in &d.probs {
        acc += p;
        cdf.push(acc);
    }
    let total = *cdf.last().expect("nonempty distribution");
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.gen::<f64>() * total;
        let idx = cdf.partition_point(|&c| c <= u).min(d.probs.len() - 1);
        *counts.entry(idx as u64).or_insert(0) += 1;
    }
    SampleSet::from_counts(d.n_qubits, counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example_keyed_program;
    use crate::sim::simulate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bv(bits: &[u8]) -> BitVector {
        BitVector::from_bits(bits)
    }

    fn example_dist() -> OutputDistribution {
        simulate(example_keyed_program().program()).unwrap()
    }

    #[test]
    fn correlation_examples() {
        let d = example_dist();
        assert!((d.correlation(&BitVector::zeros(5)).unwrap() - 1.0).abs() < 1e-12);
        let c = d.correlation(&bv(&[1, 1, 1, 1, 0])).unwrap();
        assert!((c - 0.7071067811865476).abs() < 1e-12, "corr = {c}");
        let u = OutputDistribution::uniform(5);
        assert!(u.correlation(&bv(&[1, 0, 1, 0, 0])).unwrap().abs() < 1e-15);
    }

    #[test]
    fn bias_examples() {
        let d = example_dist();
        let b = d.bias(&bv(&[1, 1, 1, 1, 0])).unwrap();
        assert!((b - 0.8535533905932737).abs() < 1e-12, "bias = {b}");
        let u = OutputDistribution::uniform(5);
        assert!((u.bias(&bv(&[1, 1, 1, 1, 0])).unwrap() - 0.5).abs() < 1e-15);
        let p = OutputDistribution::point_mass(5);
        assert_eq!(p.bias(&bv(&[1, 1, 1, 1, 0])).unwrap(), 1.0);
        assert!(d.bias(&BitVector::zeros(4)).is_err());
    }

    #[test]
    fn bias_correlation_identity_exhaustive() {
        let d = example_dist();
        for s in 0u64..32 {
            if s == 0 {
                continue;
            }
            let sv = BitVector::from_integer(5, s);
            let bias = d.bias(&sv).unwrap();
            let corr = d.correlation(&sv).unwrap();
            assert!((bias - (1.0 + corr) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fwht_matches_correlation_exhaustively() {
        let d = example_dist();
        let coeffs = d.fwht();
        assert!((coeffs[0] - 1.0 / 32.0).abs() < 1e-15);
        for s in 0u64..32 {
            let sv = if s == 0 {
                BitVector::zeros(5)
            } else {
                BitVector::from_integer(5, s)
            };
            let corr = d.correlation(&sv).unwrap();
            assert!((32.0 * coeffs[s as usize] - corr).abs() < 1e-12);
        }
        // s = (1,1,1,1,0) is integer 0b01111 = 15
        assert!((32.0 * coeffs[15] - 0.7071067811865476).abs() < 1e-9);
    }

    #[test]
    fn fwht_point_mass() {
        let p = OutputDistribution::point_mass(3);
        for &c in &p.fwht() {
            assert!((c - 1.0 / 8.0).abs() < 1e-15);
        }
    }

    #[test]
    fn fwht_involution() {
        let d = example_dist();
        let mut data = d.probs().to_vec();
        walsh_hadamard(&mut data);
        walsh_hadamard(&mut data);
        for (orig, roundtrip) in d.probs().iter().zip(&data) {
            assert!((orig * 32.0 - roundtrip).abs() < 1e-12);
        }
    }

    #[test]
    fn dephasing_edge_rates() {
        let d = example_dist();
        let same = d.apply_dephasing(0.0).unwrap();
        for (a, b) in d.probs().iter().zip(same.probs()) {
            assert!((a - b).abs() < 1e-14);
        }
        let flat = d.apply_dephasing(0.5).unwrap();
        for &p in flat.probs() {
            assert!((p - 1.0 / 32.0).abs() < 1e-14);
        }
        assert!(d.apply_dephasing(0.6).is_err());
        assert!(d.apply_dephasing(-0.1).is_err());
    }

    #[test]
    fn dephasing_matches_bitflip_convolution() {
        // Independent bit-flip kernel, exhaustive at n = 5
        let d = example_dist();
        let eps = 0.0679;
        let channel = d.apply_dephasing(eps).unwrap();
        let n = 5;
        for x in 0usize..32 {
            let mut expected = 0.0;
            for y in 0usize..32 {
                let flips = (x ^ y).count_ones();
                expected += d.probs()[y]
                    * libm::pow(eps, f64::from(flips))
                    * libm::pow(1.0 - eps, f64::from(n - flips));
            }
            assert!((channel.probs()[x] - expected).abs() < 1e-12);
        }
        // Damped bias: ½(1 + (1-2ε)^4 · ⟨Z_s⟩)
        let b = channel.bias(&bv(&[1, 1, 1, 1, 0])).unwrap();
        assert!((b - 0.697202335657823).abs() < 1e-12, "bias = {b}");
    }

    #[test]
    fn dephasing_composition() {
        let d = example_dist();
        let (e1, e2) = (0.03, 0.11);
        let chained = d.apply_dephasing(e1).unwrap().apply_dephasing(e2).unwrap();
        let eff = (1.0 - (1.0 - 2.0 * e1) * (1.0 - 2.0 * e2)) / 2.0;
        let single = d.apply_dephasing(eff).unwrap();
        for (a, b) in chained.fwht().iter().zip(single.fwht().iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn sample_point_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = sample(&OutputDistribution::point_mass(4), 100, &mut rng).unwrap();
        assert_eq!(s.total(), 100);
        assert_eq!(s.counts().get(&0), Some(&100));
        assert!(sample(&OutputDistribution::point_mass(4), 0, &mut rng).is_err());
    }

    #[test]
    fn sample_two_outcome_frequencies() {
        let mut probs = vec![0.0; 4];
        probs[1] = 0.5;
        probs[2] = 0.5;
        let d = OutputDistribution::new(2, probs).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let s = sample(&d, 100_000, &mut rng).unwrap();
        for outcome in [1u64, 2] {
            let freq = *s.counts().get(&outcome).unwrap() as f64 / 100_000.0;
            assert!((freq - 0.5).abs() < 0.01, "freq({outcome}) = {freq}");
        }
        assert_eq!(s.counts().get(&0), None);
    }

    #[test]
    fn sample_determinism() {
        let d = example_dist();
        let a = sample(&d, 1000, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = sample(&d, 1000, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sample_set_validation() {
        assert!(SampleSet::from_counts(3, [(8, 1)]).is_err());
        assert!(SampleSet::from_counts(3, [(1, 0)]).is_err());
        let s = SampleSet::from_counts(3, [(1, 2), (1, 3), (7, 1)]).unwrap();
        assert_eq!(s.total(), 6);
        assert_eq!(s.counts().get(&1), Some(&5));
    }
}
