use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{SimulationError, SolverOptions};

/// Stress continuity tolerance between consecutive segments, MPa.
const CONTINUITY_TOL: f64 = 1e-9;

/// One piece of a uniaxial stress history (σ₁₁ in MPa, time in s).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    /// Linear change of stress.
    MonotonicRamp { stress_from: f64, stress_to: f64, duration: f64 },
    Hold { stress: f64, duration: f64 },
    /// `σ = mean + a_i sin(2π τ / period)` with the amplitude constant within
    /// cycle `i` and stepping linearly from `amplitude_from` (first cycle) to
    /// `amplitude_to` (last cycle).
    HarmonicCycles { mean: f64, amplitude_from: f64, amplitude_to: f64, n_cycles: usize, period: f64 },
    /// `σ = peak_i (1 − cos(2π τ / period)) / 2`: cycles between zero and a
    /// peak that steps linearly from `peak_from` to `peak_to`.
    PulsatingCycles { peak_from: f64, peak_to: f64, n_cycles: usize, period: f64 },
    /// Linear return to zero stress from wherever the previous segment ended.
    Unload { duration: f64 },
}

impl Segment {
    pub fn duration(&self) -> f64 {
        match *self {
            Segment::MonotonicRamp { duration, .. }
            | Segment::Hold { duration, .. }
            | Segment::Unload { duration } => duration,
            Segment::HarmonicCycles { n_cycles, period, .. }
            | Segment::PulsatingCycles { n_cycles, period, .. } => n_cycles as f64 * period,
        }
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self, Segment::HarmonicCycles { .. } | Segment::PulsatingCycles { .. })
    }

    pub fn n_cycles(&self) -> usize {
        match *self {
            Segment::HarmonicCycles { n_cycles, .. } | Segment::PulsatingCycles { n_cycles, .. } => n_cycles,
            _ => 0,
        }
    }

    fn start_stress(&self, previous_end: f64) -> f64 {
        match *self {
            Segment::MonotonicRamp { stress_from, .. } => stress_from,
            Segment::Hold { stress, .. } => stress,
            Segment::HarmonicCycles { mean, .. } => mean,
            Segment::PulsatingCycles { .. } => 0.0,
            Segment::Unload { .. } => previous_end,
        }
    }

    fn end_stress(&self, _previous_end: f64) -> f64 {
        match *self {
            Segment::MonotonicRamp { stress_to, .. } => stress_to,
            Segment::Hold { stress, .. } => stress,
            Segment::HarmonicCycles { mean, .. } => mean,
            Segment::PulsatingCycles { .. } | Segment::Unload { .. } => 0.0,
        }
    }
}

/// Amplitude of cycle `i` of `n` when stepping linearly from `from` to `to`.
fn cycle_level(from: f64, to: f64, i: usize, n: usize) -> f64 {
    if n <= 1 {
        to
    } else {
        from + (to - from) * i as f64 / (n - 1) as f64
    }
}

/// Ordered list of segments, contiguous in stress.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadingProgram {
    pub segments: Vec<Segment>,
}

/// Stress turning points of one load cycle on a discretised program.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleMarks {
    pub segment: usize,
    pub cycle: usize,
    pub max_node: usize,
    pub min_node: usize,
    /// Times of the turning points relative to the start of their cyclic block, s.
    pub max_time: f64,
    pub min_time: f64,
    /// Duration of the cyclic block, s.
    pub block_duration: f64,
}

/// Time and stress nodes of a discretised program.
#[derive(Clone, Debug, PartialEq)]
pub struct ProgramGrid {
    pub times: Vec<f64>,
    pub stress: Vec<f64>,
    pub cycles: Vec<CycleMarks>,
}

impl LoadingProgram {
    pub fn new(segments: Vec<Segment>) -> Self {
        LoadingProgram { segments }
    }

    pub fn duration(&self) -> f64 {
        self.segments.iter().map(Segment::duration).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn n_cycles(&self) -> usize {
        self.segments.iter().map(Segment::n_cycles).sum()
    }

    /// Largest stress reached anywhere in the program.
    pub fn peak_stress(&self) -> f64 {
        let mut prev = 0.0;
        let mut peak = 0.0_f64;
        for seg in &self.segments {
            let start = seg.start_stress(prev);
            let local = match *seg {
                Segment::HarmonicCycles { mean, amplitude_from, amplitude_to, n_cycles, .. } if n_cycles > 0 => {
                    mean + amplitude_from.max(amplitude_to)
                }
                Segment::PulsatingCycles { peak_from, peak_to, n_cycles, .. } if n_cycles > 0 => peak_from.max(peak_to),
                _ => start,
            };
            prev = seg.end_stress(prev);
            peak = peak.max(local).max(start).max(prev);
        }
        peak
    }

    /// Prescribed σ₁₁ at time `t`.
    pub fn stress_at(&self, t: f64) -> f64 {
        let mut start_time = 0.0;
        let mut prev = 0.0;
        for seg in &self.segments {
            let d = seg.duration();
            if t <= start_time + d || std::ptr::eq(seg, self.segments.last().unwrap()) {
                let tau = (t - start_time).clamp(0.0, d);
                return segment_stress(seg, prev, tau);
            }
            start_time += d;
            prev = seg.end_stress(prev);
        }
        0.0
    }

    pub fn validate(&self) -> Result<(), SimulationError> {
        let bad = |msg: String| Err(SimulationError::InvalidProgram(msg));
        let mut prev = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            let d = seg.duration();
            if !(d >= 0.0 && d.is_finite()) {
                return bad(format!("segment {i} has invalid duration {d}"));
            }
            let start = seg.start_stress(prev);
            if (start - prev).abs() > CONTINUITY_TOL * (1.0 + prev.abs()) {
                return bad(format!("segment {i} starts at {start} MPa but the previous one ends at {prev} MPa"));
            }
            match *seg {
                Segment::HarmonicCycles { amplitude_from, amplitude_to, period, n_cycles, .. } => {
                    if amplitude_from < 0.0 || amplitude_to < amplitude_from {
                        return bad(format!(
                            "segment {i}: amplitude must be non-negative and nondecreasing ({amplitude_from} -> {amplitude_to})"
                        ));
                    }
                    if n_cycles > 0 && !(period > 0.0) {
                        return bad(format!("segment {i}: period must be positive"));
                    }
                }
                Segment::PulsatingCycles { peak_from, peak_to, period, n_cycles } => {
                    if peak_from < 0.0 || peak_to < peak_from {
                        return bad(format!("segment {i}: peak must be non-negative and nondecreasing"));
                    }
                    if n_cycles > 0 && !(period > 0.0) {
                        return bad(format!("segment {i}: period must be positive"));
                    }
                }
                _ => {}
            }
            prev = seg.end_stress(prev);
        }
        Ok(())
    }

    /// Discretises the program. Cyclic segments get `steps_per_cycle` nodes per
    /// cycle, placed so that every stress turning point is a node; ramps and
    /// holds are split by the stress- and time-increment limits.
    pub fn discretize(&self, opts: &SolverOptions) -> Result<ProgramGrid, SimulationError> {
        self.validate()?;
        opts.validate()?;
        let spc = opts.steps_per_cycle;
        let mut times = vec![0.0];
        let mut stress = vec![0.0];
        let mut cycles = Vec::new();
        let mut t0 = 0.0;
        let mut prev = 0.0;
        for (si, seg) in self.segments.iter().enumerate() {
            let d = seg.duration();
            match *seg {
                Segment::HarmonicCycles { n_cycles, period, .. } | Segment::PulsatingCycles { n_cycles, period, .. } => {
                    let harmonic = matches!(seg, Segment::HarmonicCycles { .. });
                    for c in 0..n_cycles {
                        let cycle_start = c as f64 * period;
                        let base = times.len() - 1;
                        for j in 1..=spc {
                            let phase = j as f64 / spc as f64;
                            times.push(t0 + cycle_start + period * phase);
                            stress.push(cycle_stress(seg, c, phase));
                        }
                        let (max_j, min_j) = if harmonic { (spc / 4, 3 * spc / 4) } else { (spc / 2, spc) };
                        cycles.push(CycleMarks {
                            segment: si,
                            cycle: c,
                            max_node: base + max_j,
                            min_node: base + min_j,
                            max_time: cycle_start + period * max_j as f64 / spc as f64,
                            min_time: cycle_start + period * min_j as f64 / spc as f64,
                            block_duration: d,
                        });
                    }
                }
                _ => {
                    let start = seg.start_stress(prev);
                    let end = seg.end_stress(prev);
                    let by_stress = ((end - start).abs() / opts.max_stress_increment).ceil();
                    let by_time = (d / opts.max_time_step).ceil();
                    let n = by_stress.max(by_time).max(if d > 0.0 { 1.0 } else { 0.0 }) as usize;
                    for j in 1..=n {
                        let tau = d * j as f64 / n as f64;
                        times.push(t0 + tau);
                        stress.push(segment_stress(seg, prev, tau));
                    }
                }
            }
            t0 += d;
            prev = seg.end_stress(prev);
        }
        Ok(ProgramGrid { times, stress, cycles })
    }
}

fn segment_stress(seg: &Segment, prev_end: f64, tau: f64) -> f64 {
    match *seg {
        Segment::MonotonicRamp { stress_from, stress_to, duration } => {
            if duration > 0.0 {
                stress_from + (stress_to - stress_from) * tau / duration
            } else {
                stress_to
            }
        }
        Segment::Hold { stress, .. } => stress,
        Segment::Unload { duration } => {
            if duration > 0.0 {
                prev_end * (1.0 - tau / duration)
            } else {
                0.0
            }
        }
        Segment::HarmonicCycles { n_cycles, period, .. } | Segment::PulsatingCycles { n_cycles, period, .. } => {
            if n_cycles == 0 {
                return seg.end_stress(prev_end);
            }
            let x = tau / period;
            let i = (x.floor() as usize).min(n_cycles - 1);
            cycle_stress(seg, i, x - i as f64)
        }
    }
}

/// Stress of cycle `i` at `phase` ∈ [0, 1] of a cyclic segment.
fn cycle_stress(seg: &Segment, i: usize, phase: f64) -> f64 {
    // cycle boundaries are exact so consecutive segments stay contiguous
    let angle = 2.0 * PI * phase;
    let (sin, cos) = if phase == 0.0 || phase == 1.0 { (0.0, 1.0) } else { angle.sin_cos() };
    match *seg {
        Segment::HarmonicCycles { mean, amplitude_from, amplitude_to, n_cycles, .. } => {
            mean + cycle_level(amplitude_from, amplitude_to, i, n_cycles) * sin
        }
        Segment::PulsatingCycles { peak_from, peak_to, n_cycles, .. } => {
            0.5 * cycle_level(peak_from, peak_to, i, n_cycles) * (1.0 - cos)
        }
        _ => unreachable!("cycle_stress called on a non-cyclic segment"),
    }
}

/// Durations of the non-cyclic stages of an experiment program, s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageDurations {
    pub loading: f64,
    pub hold: f64,
    pub period: f64,
    pub unloading: f64,
}

impl Default for StageDurations {
    fn default() -> Self {
        StageDurations { loading: 60.0, hold: 30.0, period: 1.0, unloading: 60.0 }
    }
}

/// Settings of the four-stage experiment program beyond the paper's data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentProgramConfig {
    pub durations: StageDurations,
    /// First-cycle amplitude as a fraction of the final amplitude.
    pub amplitude_start_fraction: f64,
    /// Largest admissible σ_m + σ_a,max, MPa.
    pub stress_ceiling: f64,
}

impl Default for ExperimentProgramConfig {
    fn default() -> Self {
        ExperimentProgramConfig { durations: StageDurations::default(), amplitude_start_fraction: 0.05, stress_ceiling: 1000.0 }
    }
}

/// Four-stage ratcheting test: load to σ_m, hold, cycle about σ_m with a
/// linearly growing amplitude, unload.
pub fn make_experiment_program(
    sigma_m: f64,
    sigma_a_max: f64,
    n_cycles: usize,
    cfg: &ExperimentProgramConfig,
) -> Result<LoadingProgram, SimulationError> {
    let bad = |msg: String| Err(SimulationError::InvalidProgram(msg));
    if !(sigma_a_max >= 0.0) || !sigma_m.is_finite() {
        return bad(format!("amplitude must be non-negative, got {sigma_a_max}"));
    }
    if n_cycles == 0 {
        return bad("an experiment program needs at least one cycle".into());
    }
    if sigma_m + sigma_a_max > cfg.stress_ceiling {
        return bad(format!(
            "peak stress {} MPa exceeds the configured ceiling {} MPa",
            sigma_m + sigma_a_max,
            cfg.stress_ceiling
        ));
    }
    let f = cfg.amplitude_start_fraction;
    if !(0.0..=1.0).contains(&f) {
        return bad(format!("amplitude start fraction must lie in [0, 1], got {f}"));
    }
    let d = cfg.durations;
    Ok(LoadingProgram::new(vec![
        Segment::MonotonicRamp { stress_from: 0.0, stress_to: sigma_m, duration: d.loading },
        Segment::Hold { stress: sigma_m, duration: d.hold },
        Segment::HarmonicCycles {
            mean: sigma_m,
            amplitude_from: f * sigma_a_max,
            amplitude_to: sigma_a_max,
            n_cycles,
            period: d.period,
        },
        Segment::Unload { duration: d.unloading },
    ]))
}

/// Pulsating program with σ_min = 0 and a peak growing linearly to
/// `sigma_max_final` over `n_cycles`, starting from `start_fraction` of it.
pub fn make_metric_program(n_cycles: usize, sigma_max_final: f64, period: f64, start_fraction: f64) -> LoadingProgram {
    if n_cycles == 0 {
        return LoadingProgram::new(vec![]);
    }
    LoadingProgram::new(vec![Segment::PulsatingCycles {
        peak_from: start_fraction * sigma_max_final,
        peak_to: sigma_max_final,
        n_cycles,
        period,
    }])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_programs_peak_at_890() {
        let cfg = ExperimentProgramConfig::default();
        for (m, a) in [(420.0, 470.0), (635.0, 255.0), (530.0, 360.0)] {
            let p = make_experiment_program(m, a, 2400, &cfg).unwrap();
            assert_eq!(p.segments.len(), 4);
            assert!((p.peak_stress() - 890.0).abs() < 1e-9);
            p.validate().unwrap();
        }
    }

    #[test]
    fn experiment_program_rejects_bad_input() {
        let cfg = ExperimentProgramConfig::default();
        assert!(make_experiment_program(420.0, -1.0, 10, &cfg).is_err());
        assert!(make_experiment_program(420.0, 470.0, 0, &cfg).is_err());
        assert!(make_experiment_program(900.0, 470.0, 10, &cfg).is_err());
    }

    #[test]
    fn metric_program_edge_cases() {
        let p = make_metric_program(0, 800.0, 1.0, 0.5);
        assert!(p.is_empty());
        assert_eq!(p.duration(), 0.0);
        let z = make_metric_program(5, 0.0, 1.0, 0.5);
        let grid = z.discretize(&SolverOptions::default()).unwrap();
        assert!(grid.stress.iter().all(|s| *s == 0.0));
    }

    #[test]
    fn turning_points_are_nodes() {
        let cfg = ExperimentProgramConfig::default();
        let p = make_experiment_program(420.0, 470.0, 7, &cfg).unwrap();
        let g = p.discretize(&SolverOptions::default()).unwrap();
        assert_eq!(g.cycles.len(), 7);
        let last = g.cycles.last().unwrap();
        assert!((g.stress[last.max_node] - 890.0).abs() < 1e-9);
        assert!((g.stress[last.min_node] - (420.0 - 470.0)).abs() < 1e-9);
        let first = g.cycles[0];
        assert!((g.stress[first.max_node] - (420.0 + 0.05 * 470.0)).abs() < 1e-9);
        assert!((first.max_time - 0.25).abs() < 1e-12);
        assert!((first.min_time - 0.75).abs() < 1e-12);
        // the grid reproduces the continuous program at every node
        for (t, s) in g.times.iter().zip(&g.stress) {
            assert!((p.stress_at(*t) - s).abs() < 1e-9, "t = {t}");
        }
        assert_eq!(*g.stress.last().unwrap(), 0.0);
    }

    #[test]
    fn discontinuous_program_rejected() {
        let p = LoadingProgram::new(vec![
            Segment::MonotonicRamp { stress_from: 0.0, stress_to: 100.0, duration: 1.0 },
            Segment::Hold { stress: 50.0, duration: 1.0 },
        ]);
        assert!(p.validate().is_err());
        let p = LoadingProgram::new(vec![Segment::HarmonicCycles {
            mean: 0.0,
            amplitude_from: 10.0,
            amplitude_to: 5.0,
            n_cycles: 3,
            period: 1.0,
        }]);
        assert!(p.validate().is_err());
    }
}
