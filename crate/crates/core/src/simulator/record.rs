use serde::{Deserialize, Serialize};

use super::{LoadingProgram, Segment, SimulationError, SimulationTrace};

/// Axial strain at the two stress turning points of one cycle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleExtrema {
    pub max_strain: f64,
    pub min_strain: f64,
    /// Turning-point times relative to the start of the cyclic block, s.
    pub max_time: f64,
    pub min_time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordMeta {
    /// Mean stress of the harmonic block, MPa.
    pub sigma_m: Option<f64>,
    /// Final stress amplitude of the harmonic block, MPa.
    pub sigma_a_max: Option<f64>,
    /// Duration of the cyclic block, s.
    pub block_duration: f64,
    pub program: LoadingProgram,
    /// Free-form origin note ("synthetic", file name, ...).
    pub provenance: String,
}

/// Per-cycle strain extrema of one ratcheting test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub cycles: Vec<CycleExtrema>,
    pub meta: RecordMeta,
    /// `(time, θ)` samples, s and K.
    pub temperature: Option<Vec<(f64, f64)>>,
}

impl ExperimentRecord {
    /// Number of recorded values (two per cycle).
    pub fn len(&self) -> usize {
        2 * self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Values interleaved as `[max₁, min₁, max₂, min₂, …]`.
    pub fn values(&self) -> Vec<f64> {
        self.cycles.iter().flat_map(|c| [c.max_strain, c.min_strain]).collect()
    }

    /// Turning-point times in the order of [`values`](Self::values).
    pub fn times(&self) -> Vec<f64> {
        self.cycles.iter().flat_map(|c| [c.max_time, c.min_time]).collect()
    }

    /// Replaces the strain values, keeping times and metadata.
    pub fn with_values(&self, values: &[f64]) -> Result<Self, SimulationError> {
        if values.len() != self.len() {
            return Err(SimulationError::TraceMismatch(format!(
                "expected {} values, got {}",
                self.len(),
                values.len()
            )));
        }
        let mut out = self.clone();
        for (c, v) in out.cycles.iter_mut().zip(values.chunks_exact(2)) {
            c.max_strain = v[0];
            c.min_strain = v[1];
        }
        Ok(out)
    }

    /// Attaches the temperature history of `trace`.
    pub fn with_temperature(mut self, trace: &SimulationTrace) -> Self {
        self.temperature = Some(trace.times.iter().copied().zip(trace.theta.iter().copied()).collect());
        self
    }

    /// Indices of cycles whose maximum is below their minimum.
    pub fn inverted_cycles(&self) -> Vec<usize> {
        self.cycles
            .iter()
            .enumerate()
            .filter(|(_, c)| c.max_strain < c.min_strain)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Reads ε₁₁ at the stress turning points of every cycle of `program`.
pub fn extract_extrema(trace: &SimulationTrace, program: &LoadingProgram) -> Result<ExperimentRecord, SimulationError> {
    let grid = program.discretize(&trace.options)?;
    if grid.times.len() != trace.len() {
        return Err(SimulationError::TraceMismatch(format!(
            "program has {} nodes, trace has {}",
            grid.times.len(),
            trace.len()
        )));
    }
    let scale = 1.0 + program.duration();
    if grid.times.iter().zip(&trace.times).any(|(a, b)| (a - b).abs() > 1e-9 * scale)
        || grid.stress.iter().zip(&trace.stress).any(|(a, b)| (a - b).abs() > 1e-9 * (1.0 + a.abs()))
    {
        return Err(SimulationError::TraceMismatch("time or stress grid differs from the program".into()));
    }
    if grid.cycles.is_empty() && program.n_cycles() > 0 {
        return Err(SimulationError::TraceMismatch("program cycles not found on the grid".into()));
    }
    let cycles = grid
        .cycles
        .iter()
        .map(|m| CycleExtrema {
            max_strain: trace.strain[m.max_node],
            min_strain: trace.strain[m.min_node],
            max_time: m.max_time,
            min_time: m.min_time,
        })
        .collect();
    let (sigma_m, sigma_a_max) = program
        .segments
        .iter()
        .find_map(|s| match *s {
            Segment::HarmonicCycles { mean, amplitude_to, .. } => Some((Some(mean), Some(amplitude_to))),
            _ => None,
        })
        .unwrap_or((None, None));
    Ok(ExperimentRecord {
        cycles,
        meta: RecordMeta {
            sigma_m,
            sigma_a_max,
            block_duration: grid.cycles.first().map_or(0.0, |m| m.block_duration),
            program: program.clone(),
            provenance: "simulation".into(),
        },
        temperature: None,
    })
}
