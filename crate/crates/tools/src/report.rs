//! Rendering of verification reports as text and JSON.

use iqp_core::VerificationReport;
use serde_json::json;

pub fn render_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    out.push_str("=== verification report ===\n");
    out.push_str(&format!("shots:          {}\n", report.n_shots));
    out.push_str(&format!(
        "bias estimate:  {:.6} +/- {:.6}\n",
        report.bias_estimate, report.std_error
    ));
    out.push_str(&format!("secret weight:  {}\n", report.secret_weight));
    match report.fitted_epsilon {
        Some(eps) => out.push_str(&format!("fitted epsilon: {eps:.6}\n")),
        None => out.push_str("fitted epsilon: n/a\n"),
    }
    out.push_str(&format!(
        "landmarks:      quantum {:.4} / classical {:.4} / random {:.4} (window {} sigma)\n",
        report.thresholds.quantum_landmark,
        report.thresholds.classical_landmark,
        report.thresholds.random_landmark,
        report.thresholds.sigma_multiplier
    ));
    out.push_str(&format!("verdict:        {}\n", report.verdict.as_str()));
    out
}

pub fn render_json(report: &VerificationReport) -> serde_json::Value {
    json!({
        "n_shots": report.n_shots,
        "bias_estimate": report.bias_estimate,
        "std_error": report.std_error,
        "secret_weight": report.secret_weight,
        "fitted_epsilon": report.fitted_epsilon,
        "verdict": report.verdict.as_str(),
        "thresholds": {
            "quantum_landmark": report.thresholds.quantum_landmark,
            "classical_landmark": report.thresholds.classical_landmark,
            "random_landmark": report.thresholds.random_landmark,
            "sigma_multiplier": report.thresholds.sigma_multiplier,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use iqp_core::{DecisionConfig, VerificationReport, Verdict};

    fn sample_report() -> VerificationReport {
        VerificationReport {
            n_shots: 100_000,
            bias_estimate: 0.8536,
            std_error: 0.0011,
            secret_weight: 4,
            fitted_epsilon: Some(0.002),
            verdict: Verdict::QuantumConsistent,
            thresholds: DecisionConfig::default(),
        }
    }

    #[test]
    fn text_contains_verdict_and_bias() {
        let text = render_text(&sample_report());
        assert!(text.contains("QUANTUM_CONSISTENT"));
        assert!(text.contains("0.853600"));
    }

    #[test]
    fn json_fields() {
        let v = render_json(&sample_report());
        assert_eq!(v["verdict"], "QUANTUM_CONSISTENT");
        assert_eq!(v["n_shots"], 100_000);
        assert_eq!(v["thresholds"]["sigma_multiplier"], 3.0);
    }
}
