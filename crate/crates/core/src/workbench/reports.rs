use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::identify::{RefineStop, TestCase};
use crate::sensitivity::ParameterCloud;

use super::config::ModelSpec;
use super::study::Study;
use super::validation::ValidationResult;
use super::{csv_err, io_err, write_json, write_params, WorkbenchError};

/// Outcome of calibrating one model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub label: String,
    pub names: Vec<String>,
    pub p0: Vec<f64>,
    /// Φ after the nested simplex stage.
    pub phi_nested: f64,
    pub p_star: Vec<f64>,
    pub phi: f64,
    /// Absent without a refinement.
    pub gradient_inf: Option<f64>,
    pub gradient_tol: f64,
    pub iterations: usize,
    /// Absent when the refinement stopped on a rank-deficient Jacobian.
    pub stop: Option<RefineStop>,
    /// `Mod(p*)` on the calibration tests, concatenated.
    pub response: Vec<f64>,
}

/// Scalar summary of a parameter cloud.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloudSummary {
    pub n_draws: usize,
    pub cloud_size: f64,
    pub max_abs_correlation: f64,
    /// Parameter pair holding the largest correlation.
    pub most_correlated: Option<(String, String)>,
    pub diagonal_ratios: Vec<f64>,
    /// Full-simulation distances of the leading draws, when requested;
    /// `None` for draws whose parameters are inadmissible.
    pub exact_distances: Option<Vec<Option<f64>>>,
}

impl CloudSummary {
    pub fn new(cloud: &ParameterCloud, names: &[String], exact_distances: Option<Vec<Option<f64>>>) -> Self {
        let most = crate::sensitivity::max_off_diagonal(&cloud.correlation);
        CloudSummary {
            n_draws: cloud.draws.len(),
            cloud_size: cloud.cloud_size,
            max_abs_correlation: cloud.max_abs_correlation(),
            most_correlated: most.map(|(_, i, j)| (names[i].clone(), names[j].clone())),
            diagonal_ratios: cloud.diagonal_ratios.clone(),
            exact_distances,
        }
    }
}

/// Everything computed for one model size.
#[derive(Clone, Debug)]
pub struct ModelStudy {
    pub spec: ModelSpec,
    pub fit: FitReport,
    pub validation: ValidationResult,
    pub cloud: Option<ParameterCloud>,
    pub cloud_summary: Option<CloudSummary>,
    /// Message of the rank-deficiency that stopped the analysis.
    pub rank_deficient: Option<String>,
    /// `(time s, θ K)` of `p*` on each calibration program.
    pub temperature: Vec<Vec<(f64, f64)>>,
}

/// Rows `model,parameter,value` for the identified constants of each fit.
pub fn write_fit_csv(path: &Path, fits: &[FitReport]) -> Result<(), WorkbenchError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(["model", "parameter", "value"]).map_err(csv_err(path))?;
    for f in fits {
        for (name, v) in f.names.iter().zip(&f.p_star) {
            w.serialize((&f.label, name, v)).map_err(csv_err(path))?;
        }
        w.serialize((&f.label, "phi", f.phi)).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// `draw,<parameters…>,distance`, one row per refitted draw.
pub fn write_cloud_csv(path: &Path, names: &[String], cloud: &ParameterCloud) -> Result<(), WorkbenchError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    let mut header = vec!["draw".to_string()];
    header.extend(names.iter().cloned());
    header.push("distance".into());
    w.write_record(&header).map_err(csv_err(path))?;
    for (j, (p, d)) in cloud.draws.iter().zip(&cloud.distances).enumerate() {
        let mut row = vec![j.to_string()];
        row.extend(p.iter().map(|v| v.to_string()));
        row.push(d.to_string());
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Parameter names, draws and distances of a cloud CSV.
pub fn read_cloud_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>, Vec<f64>), WorkbenchError> {
    let fmt = |m: String| WorkbenchError::Format { path: path.to_path_buf(), message: m };
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header: Vec<String> = r.headers().map_err(csv_err(path))?.iter().map(String::from).collect();
    if header.len() < 3 || header[0] != "draw" || header[header.len() - 1] != "distance" {
        return Err(fmt("expected header draw,<parameters…>,distance".into()));
    }
    let names = header[1..header.len() - 1].to_vec();
    let (mut draws, mut distances) = (Vec::new(), Vec::new());
    for (i, row) in r.deserialize::<Vec<f64>>().enumerate() {
        let row = row.map_err(csv_err(path))?;
        if row[0] != i as f64 {
            return Err(fmt(format!("row {} holds draw {}", i, row[0])));
        }
        draws.push(row[1..row.len() - 1].to_vec());
        distances.push(row[row.len() - 1]);
    }
    Ok((names, draws, distances))
}

/// Square matrix with a `parameter,<names…>` header and one row per name.
pub fn write_correlation_csv(path: &Path, names: &[String], corr: &DMatrix<f64>) -> Result<(), WorkbenchError> {
    if corr.nrows() != names.len() || corr.ncols() != names.len() {
        return Err(WorkbenchError::Format {
            path: path.to_path_buf(),
            message: format!("{}×{} matrix for {} names", corr.nrows(), corr.ncols(), names.len()),
        });
    }
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    let mut header = vec!["parameter".to_string()];
    header.extend(names.iter().cloned());
    w.write_record(&header).map_err(csv_err(path))?;
    for (i, name) in names.iter().enumerate() {
        let mut row = vec![name.clone()];
        row.extend(corr.row(i).iter().map(|v| v.to_string()));
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn read_correlation_csv(path: &Path) -> Result<(Vec<String>, DMatrix<f64>), WorkbenchError> {
    let fmt = |m: String| WorkbenchError::Format { path: path.to_path_buf(), message: m };
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header: Vec<String> = r.headers().map_err(csv_err(path))?.iter().map(String::from).collect();
    if header.first().map(String::as_str) != Some("parameter") {
        return Err(fmt("expected header parameter,<names…>".into()));
    }
    let names = header[1..].to_vec();
    let n = names.len();
    let mut m = DMatrix::zeros(n, n);
    let mut rows = 0;
    for (i, row) in r.records().enumerate() {
        let row = row.map_err(csv_err(path))?;
        if i >= n || &row[0] != names[i].as_str() {
            return Err(fmt(format!("row {} does not match the header", i + 1)));
        }
        for j in 0..n {
            m[(i, j)] = row[j + 1].parse().map_err(|_| fmt(format!("bad number `{}` in row {}", &row[j + 1], i + 1)))?;
        }
        rows += 1;
    }
    if rows != n {
        return Err(fmt(format!("{rows} rows for {n} parameters")));
    }
    Ok((names, m))
}

fn write_pairs<A: Serialize, B: Serialize>(
    path: &Path,
    header: [&str; 2],
    rows: impl Iterator<Item = (A, B)>,
) -> Result<(), WorkbenchError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.serialize(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// `cycle,strain` series of the maxima and minima of one record's values.
fn write_extrema_curves(dir: &Path, stem: &str, values: &[f64], out: &mut Vec<PathBuf>) -> Result<(), WorkbenchError> {
    for (suffix, offset) in [("max", 0), ("min", 1)] {
        let path = dir.join(format!("{stem}_{suffix}.csv"));
        let series = values.iter().skip(offset).step_by(2).enumerate().map(|(i, v)| (i + 1, *v));
        write_pairs(&path, ["cycle", "strain"], series)?;
        out.push(path);
    }
    Ok(())
}

fn plot_files(dir: &Path, tests: &[TestCase], models: &[ModelStudy]) -> Result<Vec<PathBuf>, WorkbenchError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut out = Vec::new();
    for (k, t) in tests.iter().enumerate() {
        write_extrema_curves(dir, &format!("experiment_test{}", k + 1), &t.record.values(), &mut out)?;
    }
    for m in models {
        let mut offset = 0;
        for (k, t) in tests.iter().enumerate() {
            let n = t.record.len();
            let stem = format!("{}_test{}", m.spec.label(), k + 1);
            write_extrema_curves(dir, &stem, &m.fit.response[offset..offset + n], &mut out)?;
            offset += n;
            if let Some(theta) = m.temperature.get(k) {
                let path = dir.join(format!("{stem}_temperature.csv"));
                write_pairs(&path, ["time", "theta"], theta.iter().copied())?;
                out.push(path);
            }
        }
    }
    Ok(out)
}

/// Writes the fit table, per-model parameter files, clouds, correlation
/// matrices, the diagnostics report and plot-ready series into `dir`.
/// Returns the paths written.
pub fn emit_reports(study: &Study, dir: &Path) -> Result<Vec<PathBuf>, WorkbenchError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut out = Vec::new();
    let fits: Vec<FitReport> = study.models.iter().map(|m| m.fit.clone()).collect();
    let path = dir.join("fit.csv");
    write_fit_csv(&path, &fits)?;
    out.push(path);
    for m in &study.models {
        let label = m.spec.label();
        let path = dir.join(format!("params_{label}.json"));
        let layout = crate::identify::ParameterLayout::for_model(&m.spec.preset()?)?;
        write_params(&path, &layout.to_material_params(&m.fit.p_star)?)?;
        out.push(path);
        let path = dir.join(format!("fit_{label}.json"));
        write_json(&path, &m.fit)?;
        out.push(path);
        let path = dir.join(format!("validation_{label}.json"));
        write_json(&path, &m.validation)?;
        out.push(path);
        if let (Some(cloud), Some(summary)) = (&m.cloud, &m.cloud_summary) {
            let path = dir.join(format!("cloud_{label}.csv"));
            write_cloud_csv(&path, &m.fit.names, cloud)?;
            out.push(path);
            let path = dir.join(format!("cloud_{label}.json"));
            write_json(&path, summary)?;
            out.push(path);
            let path = dir.join(format!("correlation_{label}.csv"));
            write_correlation_csv(&path, &m.fit.names, &cloud.correlation)?;
            out.push(path);
        }
    }
    let path = dir.join("diagnostics.json");
    write_json(&path, &study.diagnostics)?;
    out.push(path);
    out.extend(plot_files(&dir.join("plots"), &study.calibration, &study.models)?);
    Ok(out)
}
