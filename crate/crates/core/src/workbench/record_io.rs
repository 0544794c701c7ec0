use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::simulator::{CycleExtrema, ExperimentRecord, LoadingProgram, RecordMeta};

use super::{csv_err, read_json, write_json, WorkbenchError};

/// Metadata stored next to a record CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordSidecar {
    #[serde(rename = "sigma_m_MPa")]
    pub sigma_m: Option<f64>,
    #[serde(rename = "sigma_a_max_MPa")]
    pub sigma_a_max: Option<f64>,
    #[serde(rename = "block_duration_s")]
    pub block_duration: f64,
    pub program: LoadingProgram,
    pub provenance: String,
    /// `[max_time, min_time]` of each cycle relative to the cyclic block, s.
    #[serde(rename = "turning_times_s")]
    pub turning_times: Vec<[f64; 2]>,
    /// `(time s, θ K)` samples.
    #[serde(rename = "temperature_K", default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<Vec<(f64, f64)>>,
}

/// `test.csv` → `test.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Writes `cycle,max_strain,min_strain` rows and the metadata sidecar.
pub fn write_record(path: &Path, record: &ExperimentRecord) -> Result<(), WorkbenchError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(["cycle", "max_strain", "min_strain"]).map_err(csv_err(path))?;
    for (i, c) in record.cycles.iter().enumerate() {
        w.serialize((i + 1, c.max_strain, c.min_strain)).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| csv_err(path)(e.into()))?;
    let meta = &record.meta;
    let sidecar = RecordSidecar {
        sigma_m: meta.sigma_m,
        sigma_a_max: meta.sigma_a_max,
        block_duration: meta.block_duration,
        program: meta.program.clone(),
        provenance: meta.provenance.clone(),
        turning_times: record.cycles.iter().map(|c| [c.max_time, c.min_time]).collect(),
        temperature: record.temperature.clone(),
    };
    write_json(&sidecar_path(path), &sidecar)
}

/// Reads the `cycle,max_strain,min_strain` table alone.
pub fn read_record_csv(path: &Path) -> Result<Vec<(f64, f64)>, WorkbenchError> {
    let fmt = |m: String| WorkbenchError::Format { path: path.to_path_buf(), message: m };
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = r.headers().map_err(csv_err(path))?.clone();
    if header.iter().collect::<Vec<_>>() != ["cycle", "max_strain", "min_strain"] {
        return Err(fmt(format!("expected header cycle,max_strain,min_strain, found {}", header.iter().collect::<Vec<_>>().join(","))));
    }
    let mut rows = Vec::new();
    for (i, row) in r.deserialize::<(usize, f64, f64)>().enumerate() {
        let (cycle, max, min) = row.map_err(csv_err(path))?;
        if cycle != i + 1 {
            return Err(fmt(format!("row {} holds cycle {cycle}; cycles must be numbered 1, 2, …", i + 1)));
        }
        rows.push((max, min));
    }
    Ok(rows)
}

/// Reads a record CSV together with its sidecar.
pub fn read_record(path: &Path) -> Result<ExperimentRecord, WorkbenchError> {
    let rows = read_record_csv(path)?;
    let side_path = sidecar_path(path);
    let side: RecordSidecar = read_json(&side_path)?;
    if side.turning_times.len() != rows.len() {
        return Err(WorkbenchError::Format {
            path: side_path,
            message: format!("{} turning times for {} cycles", side.turning_times.len(), rows.len()),
        });
    }
    if side.program.n_cycles() != rows.len() {
        return Err(WorkbenchError::Format {
            path: side_path,
            message: format!("program has {} cycles, the record {}", side.program.n_cycles(), rows.len()),
        });
    }
    let cycles = rows
        .iter()
        .zip(&side.turning_times)
        .map(|((max, min), t)| CycleExtrema { max_strain: *max, min_strain: *min, max_time: t[0], min_time: t[1] })
        .collect();
    Ok(ExperimentRecord {
        cycles,
        meta: RecordMeta {
            sigma_m: side.sigma_m,
            sigma_a_max: side.sigma_a_max,
            block_duration: side.block_duration,
            program: side.program,
            provenance: side.provenance,
        },
        temperature: side.temperature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::MaterialParams;
    use crate::simulator::{extract_extrema, integrate, make_experiment_program, ExperimentProgramConfig, SolverOptions};

    fn record() -> ExperimentRecord {
        let program = make_experiment_program(420.0, 470.0, 5, &ExperimentProgramConfig::default()).unwrap();
        let trace = integrate(&MaterialParams::vt6_af(2).unwrap(), &program, &SolverOptions::default()).unwrap();
        extract_extrema(&trace, &program).unwrap()
    }

    #[test]
    fn record_round_trips_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let rec = record();
        write_record(&path, &rec).unwrap();
        assert_eq!(read_record(&path).unwrap(), rec);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("cycle,max_strain,min_strain\n1,"));
        assert_eq!(text.lines().count(), 6);
    }

    #[test]
    fn record_with_temperature_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let mut rec = record();
        rec.temperature = Some(vec![(0.0, 293.15), (1.5, 293.2)]);
        write_record(&path, &rec).unwrap();
        assert_eq!(read_record(&path).unwrap(), rec);
    }

    #[test]
    fn bad_cycle_numbering_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        std::fs::write(&path, "cycle,max_strain,min_strain\n1,0.01,0.0\n3,0.02,0.01\n").unwrap();
        assert!(matches!(read_record_csv(&path), Err(WorkbenchError::Format { .. })));
        std::fs::write(&path, "n,a,b\n").unwrap();
        assert!(matches!(read_record_csv(&path), Err(WorkbenchError::Format { .. })));
    }
}
