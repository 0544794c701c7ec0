use crate::simulator::{extract_extrema, integrate, ExperimentRecord, LoadingProgram, SolverOptions};

use super::{IdentifyError, LeastSquaresModel, ParameterLayout, ParameterVector, Transform, Weighting};

/// One calibration test: the program that was applied and what was measured.
#[derive(Clone, Debug, PartialEq)]
pub struct TestCase {
    pub program: LoadingProgram,
    pub record: ExperimentRecord,
}

/// Ratcheting tests, weighting and parameter layout of one identification.
#[derive(Clone, Debug)]
pub struct IdentificationProblem {
    pub tests: Vec<TestCase>,
    pub layout: ParameterLayout,
    pub solver: SolverOptions,
    weighting: Weighting,
    observed: Vec<f64>,
}

impl IdentificationProblem {
    pub fn new(
        layout: ParameterLayout,
        tests: Vec<TestCase>,
        weighting: Weighting,
        solver: SolverOptions,
    ) -> Result<Self, IdentifyError> {
        if tests.is_empty() {
            return Err(IdentifyError::InvalidProblem("no tests given".into()));
        }
        solver.validate().map_err(|e| IdentifyError::InvalidProblem(e.to_string()))?;
        for (i, t) in tests.iter().enumerate() {
            if t.record.len() != 2 * t.program.n_cycles() {
                return Err(IdentifyError::InvalidProblem(format!(
                    "test {i}: record has {} values but the program has {} cycles",
                    t.record.len(),
                    t.program.n_cycles()
                )));
            }
        }
        let observed: Vec<f64> = tests.iter().flat_map(|t| t.record.values()).collect();
        if observed.len() < layout.len() {
            return Err(IdentifyError::InvalidProblem(format!(
                "{} data values cannot determine {} parameters",
                observed.len(),
                layout.len()
            )));
        }
        weighting.check_len(observed.len())?;
        Ok(IdentificationProblem { tests, layout, solver, weighting, observed })
    }

    /// Offsets of each test's block in the experimental vector.
    pub fn test_offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.tests.len() + 1);
        let mut acc = 0;
        out.push(0);
        for t in &self.tests {
            acc += t.record.len();
            out.push(acc);
        }
        out
    }

    /// Same tests and layout with replaced measured values.
    pub fn with_observed(&self, values: &[f64]) -> Result<Self, IdentifyError> {
        let offsets = self.test_offsets();
        if values.len() != self.observed.len() {
            return Err(IdentifyError::InvalidProblem("observed vector has the wrong length".into()));
        }
        let tests = self
            .tests
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let record = t
                    .record
                    .with_values(&values[offsets[i]..offsets[i + 1]])
                    .map_err(|e| IdentifyError::InvalidProblem(e.to_string()))?;
                Ok(TestCase { program: t.program.clone(), record })
            })
            .collect::<Result<Vec<_>, IdentifyError>>()?;
        Self::new(self.layout.clone(), tests, self.weighting.clone(), self.solver.clone())
    }
}

impl LeastSquaresModel for IdentificationProblem {
    fn n_params(&self) -> usize {
        self.layout.len()
    }

    fn observed(&self) -> &[f64] {
        &self.observed
    }

    fn predict(&self, p: &[f64]) -> Result<Vec<f64>, IdentifyError> {
        let mp = self.layout.to_material_params(p)?;
        let mut out = Vec::with_capacity(self.observed.len());
        for t in &self.tests {
            let fail = |source| IdentifyError::Simulation { params: p.to_vec(), source };
            let trace = integrate(&mp, &t.program, &self.solver).map_err(fail)?;
            let rec = extract_extrema(&trace, &t.program).map_err(fail)?;
            out.extend(rec.values());
        }
        Ok(out)
    }

    fn weighting(&self) -> &Weighting {
        &self.weighting
    }

    fn transforms(&self) -> Vec<Transform> {
        self.layout.transforms()
    }

    fn conservative_mask(&self) -> Vec<bool> {
        self.layout.conservative_mask()
    }
}

fn check_layout(p: &ParameterVector, problem: &IdentificationProblem) -> Result<(), IdentifyError> {
    if p.layout.slots != problem.layout.slots {
        return Err(IdentifyError::Layout("parameter vector layout differs from the problem layout".into()));
    }
    Ok(())
}

/// Concatenated per-test extrema predicted by `p`.
pub fn model_response(p: &ParameterVector, problem: &IdentificationProblem) -> Result<Vec<f64>, IdentifyError> {
    check_layout(p, problem)?;
    problem.predict(&p.values)
}

/// `Φ = (Exp − Mod)·W·(Exp − Mod)`.
pub fn error_functional(p: &ParameterVector, problem: &IdentificationProblem) -> Result<f64, IdentifyError> {
    check_layout(p, problem)?;
    problem.objective(&p.values)
}
