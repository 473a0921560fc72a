//! Alice's statistics: bias estimation, noise-rate fitting from the decay of
//! the n-point correlations, and verdict rendering against the
//! 0.854 / 0.75 / 0.5 landmarks.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dist::{OutputDistribution, SampleSet};
use crate::gf2::BitVector;
use crate::{Error, CLASSICAL_BIAS, QUANTUM_BIAS, RANDOM_BIAS};

/// Default floor below which an ideal correlation is too small to divide by.
pub const DEFAULT_CORRELATION_FLOOR: f64 = 1e-6;

/// Classification of a prover from its estimated bias.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    /// Within the acceptance window of the honest quantum value only.
    QuantumConsistent,
    /// Within the window of the classical spoofing value only.
    ClassicalAttackConsistent,
    /// Within the window of the uniform-responder value only.
    RandomConsistent,
    /// No landmark matched, or the windows overlap.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::QuantumConsistent => "QUANTUM_CONSISTENT",
            Verdict::ClassicalAttackConsistent => "CLASSICAL_ATTACK_CONSISTENT",
            Verdict::RandomConsistent => "RANDOM_CONSISTENT",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Landmarks and acceptance window used by [`decide`].
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct DecisionConfig {
    pub quantum_landmark: f64,
    pub classical_landmark: f64,
    pub random_landmark: f64,
    /// Window half-width in units of the standard error (the `k` in k·σ).
    pub sigma_multiplier: f64,
}

impl Default for DecisionConfig {
    fn default() -> Self {
        DecisionConfig {
            quantum_landmark: QUANTUM_BIAS,
            classical_landmark: CLASSICAL_BIAS,
            random_landmark: RANDOM_BIAS,
            sigma_multiplier: 3.0,
        }
    }
}

/// Diagnostics accompanying a fitted noise rate.
#[derive(Clone, PartialEq, Debug)]
pub struct FitDiagnostics {
    /// Fitted slope of log(ratio) against Hamming weight; ε = (1 − e^slope)/2.
    pub slope: f64,
    /// The s values (as outcome integers) that entered the fit.
    pub used: Vec<u64>,
    /// s values excluded because the correlation ratio was ≤ 0.
    pub excluded_nonpositive: Vec<u64>,
    /// Per-point residuals log(r_s) − slope·|s|, aligned with `used`.
    pub residuals: Vec<f64>,
    /// True when the fitted rate hit the ε = 0.5 boundary (total
    /// decoherence, ratios indistinguishable from zero).
    pub at_boundary: bool,
}

/// The verifier's full output for one batch of samples.
#[derive(Clone, PartialEq, Debug)]
pub struct VerificationReport {
    pub n_shots: u64,
    pub bias_estimate: f64,
    pub std_error: f64,
    pub secret_weight: u32,
    pub fitted_epsilon: Option<f64>,
    pub verdict: Verdict,
    pub thresholds: DecisionConfig,
}

/// Empirical bias and its Wald binomial standard error sqrt(p(1−p)/N).
pub fn estimate_bias(samples: &SampleSet, s: &BitVector) -> Result<(f64, f64), Error> {
    if s.len() != samples.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: samples.n_qubits(),
            right: s.len(),
        });
    }
    let mask = s.as_mask()?;
    let total = samples.total();
    let orthogonal: u64 = samples
        .counts()
        .iter()
        .filter(|(&x, _)| (x & mask).count_ones() % 2 == 0)
        .map(|(_, &c)| c)
        .sum();
    let p = orthogonal as f64 / total as f64;
    let std_error = libm::sqrt(p * (1.0 - p) / total as f64);
    Ok((p, std_error))
}

/// Fits the dephasing rate from the decay of correlation ratios with
/// Hamming weight, using the default correlation floor.
pub fn fit_epsilon(
    empirical: &OutputDistribution,
    ideal: &OutputDistribution,
) -> Result<(f64, FitDiagnostics), Error> {
    fit_epsilon_with_floor(empirical, ideal, DEFAULT_CORRELATION_FLOOR)
}

/// For every s ≠ 0 with |⟨Z_s⟩_ideal| above `floor`, the ratio
/// r_s = ⟨Z_s⟩_emp / ⟨Z_s⟩_ideal should equal (1 − 2ε)^|s| under dephasing.
/// A least-squares fit of log r_s against |s| through the origin (the ratio
/// is pinned to 1 at |s| = 0 by normalization) gives ε = (1 − e^slope)/2.
pub fn fit_epsilon_with_floor(
    empirical: &OutputDistribution,
    ideal: &OutputDistribution,
    floor: f64,
) -> Result<(f64, FitDiagnostics), Error> {
    if empirical.n_qubits() != ideal.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: ideal.n_qubits(),
            right: empirical.n_qubits(),
        });
    }
    let emp_coeffs = empirical.fwht();
    let ideal_coeffs = ideal.fwht();
    let size = emp_coeffs.len() as f64;

    let mut used = Vec::new();
    let mut excluded = Vec::new();
    let mut points: Vec<(f64, f64)> = Vec::new(); // (|s|, log r_s)
    for s in 1..emp_coeffs.len() {
        let ideal_corr = size * ideal_coeffs[s];
        if ideal_corr.abs() <= floor {
            continue;
        }
        let ratio = size * emp_coeffs[s] / ideal_corr;
        if ratio <= 0.0 {
            excluded.push(s as u64);
            continue;
        }
        used.push(s as u64);
        points.push((f64::from(s.count_ones()), libm::log(ratio)));
    }
    if points.is_empty() {
        return Err(Error::FitFailure(String::from(
            "no s with usable ideal correlation and positive ratio",
        )));
    }
    let num: f64 = points.iter().map(|(w, lr)| w * lr).sum();
    let den: f64 = points.iter().map(|(w, _)| w * w).sum();
    let slope = num / den;
    let raw_eps = (1.0 - libm::exp(slope)) / 2.0;
    let at_boundary = raw_eps >= 0.5;
    let eps = raw_eps.clamp(0.0, 0.5);
    let residuals = points.iter().map(|(w, lr)| lr - slope * w).collect();
    Ok((
        eps,
        FitDiagnostics {
            slope,
            used,
            excluded_nonpositive: excluded,
            residuals,
            at_boundary,
        },
    ))
}

/// Classifies a bias estimate against the three landmarks: a definite class
/// requires exactly one landmark within k·σ; zero or multiple matches give
/// [`Verdict::Inconclusive`].
pub fn decide(bias: f64, std_error: f64, config: &DecisionConfig) -> Verdict {
    let window = config.sigma_multiplier * std_error;
    let candidates = [
        (config.quantum_landmark, Verdict::QuantumConsistent),
        (config.classical_landmark, Verdict::ClassicalAttackConsistent),
        (config.random_landmark, Verdict::RandomConsistent),
    ];
    let mut matched = None;
    for (landmark, verdict) in candidates {
        if (bias - landmark).abs() <= window {
            if matched.is_some() {
                return Verdict::Inconclusive; // overlapping windows
            }
            matched = Some(verdict);
        }
    }
    matched.unwrap_or(Verdict::Inconclusive)
}

/// Runs the full verifier: bias estimate, optional noise fit against an
/// ideal distribution, and verdict.
pub fn build_report(
    samples: &SampleSet,
    secret: &BitVector,
    ideal: Option<&OutputDistribution>,
    config: &DecisionConfig,
) -> Result<VerificationReport, Error> {
    let (bias_estimate, std_error) = estimate_bias(samples, secret)?;
    let fitted_epsilon = match ideal {
        Some(ideal) => {
            let empirical = samples.to_distribution()?;
            match fit_epsilon(&empirical, ideal) {
                Ok((eps, _)) => Some(eps),
                Err(Error::FitFailure(_)) => None,
                Err(e) => return Err(e),
            }
        }
        None => None,
    };
    Ok(VerificationReport {
        n_shots: samples.total(),
        bias_estimate,
        std_error,
        secret_weight: secret.hamming_weight(),
        fitted_epsilon,
        verdict: decide(bias_estimate, std_error, config),
        thresholds: *config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{sample, SampleSet};
    use crate::fixtures::example_keyed_program;
    use crate::sim::simulate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn secret() -> BitVector {
        BitVector::from_bits(&[1, 1, 1, 1, 0])
    }

    #[test]
    fn estimate_bias_all_zero_outcomes() {
        let s = SampleSet::from_counts(5, [(0, 42)]).unwrap();
        let (b, se) = estimate_bias(&s, &secret()).unwrap();
        assert_eq!(b, 1.0);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn estimate_bias_complement_sums_to_one() {
        let d = simulate(example_keyed_program().program()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let samples = sample(&d, 10_000, &mut rng).unwrap();
        let (b, _) = estimate_bias(&samples, &secret()).unwrap();
        // complement: count x·s = 1
        let mask = secret().as_mask().unwrap();
        let ones: u64 = samples
            .counts()
            .iter()
            .filter(|(&x, _)| (x & mask).count_ones() % 2 == 1)
            .map(|(_, &c)| c)
            .sum();
        let complement = ones as f64 / samples.total() as f64;
        assert_eq!(b + complement, 1.0);
    }

    #[test]
    fn estimate_bias_converges() {
        let kp = example_keyed_program();
        let d = simulate(kp.program()).unwrap();
        let exact = d.bias(kp.secret()).unwrap();
        let mut passes = 0;
        for seed in 0..50u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let samples = sample(&d, 100_000, &mut rng).unwrap();
            let (b, se) = estimate_bias(&samples, kp.secret()).unwrap();
            if (b - exact).abs() <= 3.0 * se {
                passes += 1;
            }
        }
        assert!(passes >= 47, "only {passes}/50 within 3 sigma");
    }

    #[test]
    fn fit_recovers_injected_epsilon_grid() {
        let d = simulate(example_keyed_program().program()).unwrap();
        for k in 1..=25usize {
            let eps = k as f64 * 0.01;
            let noisy = d.apply_dephasing(eps).unwrap();
            let (fitted, diag) = fit_epsilon(&noisy, &d).unwrap();
            assert!(
                (fitted - eps).abs() < 1e-8,
                "eps = {eps}, fitted = {fitted}"
            );
            assert!(diag.excluded_nonpositive.is_empty());
            assert!(!diag.at_boundary);
        }
    }

    #[test]
    fn fit_identity_gives_zero() {
        let d = simulate(example_keyed_program().program()).unwrap();
        let (eps, diag) = fit_epsilon(&d, &d).unwrap();
        assert!(eps.abs() < 1e-12);
        assert!(diag.residuals.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn fit_uniform_signals_total_decoherence() {
        let d = simulate(example_keyed_program().program()).unwrap();
        let uniform = OutputDistribution::uniform(5);
        match fit_epsilon(&uniform, &d) {
            Err(Error::FitFailure(_)) => {}
            Ok((eps, diag)) => {
                assert!(diag.at_boundary || eps > 0.49, "eps = {eps}");
            }
            Err(e) => panic!("unexpected error {e:?}"),
        }
    }

    #[test]
    fn decide_examples() {
        let cfg = DecisionConfig::default();
        assert_eq!(decide(0.866, 0.016, &cfg), Verdict::QuantumConsistent);
        assert_eq!(decide(0.492, 0.003, &cfg), Verdict::RandomConsistent);
        // 0.008 off the landmark with a 3·0.002 window is not a match
        assert_eq!(decide(0.492, 0.002, &cfg), Verdict::Inconclusive);
        assert_eq!(decide(0.5, 0.3, &cfg), Verdict::Inconclusive); // windows overlap
        assert_eq!(decide(0.751, 0.002, &cfg), Verdict::ClassicalAttackConsistent);
        assert_eq!(decide(0.65, 0.002, &cfg), Verdict::Inconclusive); // far from all
    }

    #[test]
    fn decide_definite_classes_only_degrade_with_sigma() {
        // Growing the window can only turn a definite class into
        // INCONCLUSIVE (overlap), never into a different definite class.
        let cfg = DecisionConfig::default();
        for bias_milli in 400..=950u32 {
            let bias = bias_milli as f64 / 1000.0;
            let mut definite: Option<Verdict> = None;
            let mut overlapped = false;
            for sigma_step in 0..=200u32 {
                let sigma = sigma_step as f64 * 0.001;
                let v = decide(bias, sigma, &cfg);
                if v == Verdict::Inconclusive {
                    if definite.is_some() {
                        overlapped = true; // window grew past a second landmark
                    }
                } else {
                    assert!(!overlapped, "bias {bias}: definite after overlap");
                    if let Some(prev) = definite {
                        assert_eq!(prev, v, "bias {bias}, sigma {sigma}");
                    }
                    definite = Some(v);
                }
            }
        }
    }

    #[test]
    fn report_round_trip() {
        let kp = example_keyed_program();
        let d = simulate(kp.program()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let samples = sample(&d, 100_000, &mut rng).unwrap();
        let report =
            build_report(&samples, kp.secret(), Some(&d), &DecisionConfig::default()).unwrap();
        assert_eq!(report.n_shots, 100_000);
        assert_eq!(report.secret_weight, 4);
        assert_eq!(report.verdict, Verdict::QuantumConsistent);
        let eps = report.fitted_epsilon.expect("fit available");
        assert!(eps < 0.02, "sampling noise only: eps = {eps}");
    }
}
