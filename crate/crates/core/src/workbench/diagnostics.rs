use serde::{Deserialize, Serialize};

/// JSON schema of [`DiagnosticsReport`].
pub const DIAGNOSTICS_SCHEMA: &str = include_str!("../../schemas/diagnostics.schema.json");

/// Limits beyond which a model size is flagged as overparametrized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DiagnosticThresholds {
    /// Smallest relative drop of Φ that justifies an extra branch.
    pub min_relative_gain: f64,
    /// Largest acceptable Φ_val(n) / Φ_val(n − 1).
    pub max_validation_ratio: f64,
    pub max_abs_correlation: f64,
    /// Largest acceptable cloud size per unit noise amplitude.
    pub max_noise_amplification: f64,
}

impl Default for DiagnosticThresholds {
    fn default() -> Self {
        DiagnosticThresholds {
            min_relative_gain: 0.05,
            max_validation_ratio: 1.0,
            max_abs_correlation: 0.999,
            max_noise_amplification: 10.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Flag,
    NotEvaluated,
}

/// What the study found for one model size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub label: String,
    pub n_branches: usize,
    pub n_params: usize,
    /// Φ on the calibration tests.
    pub phi: f64,
    /// Φ on the held-out tests; absent without held-out data.
    pub phi_validation: Option<f64>,
    pub max_abs_correlation: Option<f64>,
    pub cloud_size: Option<f64>,
    /// The Jacobian at p* was rank deficient.
    pub rank_deficient: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionEntry {
    pub model: String,
    pub value: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: String,
    pub description: String,
    pub threshold: f64,
    pub entries: Vec<CriterionEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub noise_sigma: f64,
    pub models: Vec<ModelSummary>,
    pub criteria: Vec<Criterion>,
    /// Labels of the models flagged by at least one criterion.
    pub flagged: Vec<String>,
}

fn entry(model: &ModelSummary, value: Option<f64>, flag: impl Fn(f64) -> bool) -> CriterionEntry {
    let verdict = match value {
        Some(v) if flag(v) => Verdict::Flag,
        Some(_) => Verdict::Pass,
        None => Verdict::NotEvaluated,
    };
    CriterionEntry { model: model.label.clone(), value, verdict }
}

/// Applies the four overparametrization criteria to a sequence of nested
/// model sizes. Criteria I and II compare each model with the previous one,
/// so `models` should be ordered by increasing size.
pub fn diagnose(models: &[ModelSummary], noise_sigma: f64, t: &DiagnosticThresholds) -> DiagnosticsReport {
    let previous = |i: usize| if i == 0 { None } else { models.get(i - 1) };

    let gain = models
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let v = previous(i).filter(|p| p.phi > 0.0).map(|p| (p.phi - m.phi) / p.phi);
            entry(m, v, |g| g < t.min_relative_gain)
        })
        .collect();

    let validation = models
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let v = match (previous(i).and_then(|p| p.phi_validation), m.phi_validation) {
                (Some(prev), Some(cur)) if prev > 0.0 => Some(cur / prev),
                _ => None,
            };
            entry(m, v, |r| r > t.max_validation_ratio)
        })
        .collect();

    let correlation = models
        .iter()
        .map(|m| {
            let mut e = entry(m, m.max_abs_correlation, |c| c >= t.max_abs_correlation);
            if m.rank_deficient {
                e.verdict = Verdict::Flag;
            }
            e
        })
        .collect();

    let amplification = models
        .iter()
        .map(|m| {
            let v = m.cloud_size.filter(|_| noise_sigma > 0.0).map(|c| c / noise_sigma);
            let mut e = entry(m, v, |a| a > t.max_noise_amplification);
            if m.rank_deficient {
                e.verdict = Verdict::Flag;
            }
            e
        })
        .collect();

    let criteria = vec![
        Criterion {
            id: "I".into(),
            description: "relative decrease of the calibration error over the next smaller model".into(),
            threshold: t.min_relative_gain,
            entries: gain,
        },
        Criterion {
            id: "II".into(),
            description: "held-out error relative to the next smaller model".into(),
            threshold: t.max_validation_ratio,
            entries: validation,
        },
        Criterion {
            id: "III".into(),
            description: "largest off-diagonal |Corr|".into(),
            threshold: t.max_abs_correlation,
            entries: correlation,
        },
        Criterion {
            id: "IV".into(),
            description: "cloud size divided by the noise amplitude".into(),
            threshold: t.max_noise_amplification,
            entries: amplification,
        },
    ];
    let flagged = models
        .iter()
        .filter(|m| {
            criteria
                .iter()
                .any(|c| c.entries.iter().any(|e| e.model == m.label && e.verdict == Verdict::Flag))
        })
        .map(|m| m.label.clone())
        .collect();
    DiagnosticsReport { noise_sigma, models: models.to_vec(), criteria, flagged }
}
