use serde::{Deserialize, Serialize};

use crate::constitutive::MaterialParams;
use crate::identify::TestCase;
use crate::simulator::{extract_extrema, integrate, SolverOptions};

use super::WorkbenchError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationResult {
    /// Unweighted Φ on the held-out tests.
    pub phi: f64,
    pub n_tests: usize,
    /// Set when there was nothing to validate against.
    pub flagged: bool,
}

/// Error functional of `p_star` on tests that took no part in its
/// calibration. An empty set gives Φ = 0 and is flagged.
pub fn run_validation(
    p_star: &MaterialParams,
    held_out: &[TestCase],
    solver: &SolverOptions,
) -> Result<ValidationResult, WorkbenchError> {
    if held_out.is_empty() {
        return Ok(ValidationResult { phi: 0.0, n_tests: 0, flagged: true });
    }
    p_star.validate()?;
    let mut phi = 0.0;
    for t in held_out {
        let predicted = extract_extrema(&integrate(p_star, &t.program, solver)?, &t.program)?;
        let observed = t.record.values();
        if observed.len() != predicted.len() {
            return Err(WorkbenchError::Config(format!(
                "held-out record has {} values, its program {}",
                observed.len(),
                predicted.len()
            )));
        }
        phi += observed.iter().zip(predicted.values()).map(|(e, m)| (e - m) * (e - m)).sum::<f64>();
    }
    Ok(ValidationResult { phi, n_tests: held_out.len(), flagged: false })
}
