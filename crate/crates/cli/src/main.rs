use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ratchet_core::identify::{jacobian_fd, IdentificationProblem, ParameterLayout, TestCase, Weighting};
use ratchet_core::sensitivity::correlation_matrix;
use ratchet_core::workbench::{
    analyze_cloud, calibrate, emit_reports, load_tests, read_json, read_params, run_study,
    run_validation, write_cloud_csv, write_correlation_csv, write_fit_csv, write_json, write_params, write_record,
    HardeningChoice, ModelSpec, ParameterFile, RunConfig, WorkbenchError,
};
use ratchet_core::ModelFamily;

/// Cyclic plasticity model calibration and error-sensitivity workbench.
#[derive(Parser)]
#[command(name = "ratchet", version)]
struct Cli {
    /// JSON run configuration; built-in defaults when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// Model family: AF, OW1 or OW2.
    #[arg(long, global = true, value_parser = parse_family)]
    model: Option<ModelFamily>,
    #[arg(long, global = true)]
    branches: Option<usize>,
    /// Isotropic hardening rule: new or voce.
    #[arg(long, global = true, value_parser = parse_hardening)]
    hardening: Option<HardeningChoice>,
    /// Cycles of every configured test program.
    #[arg(long, global = true)]
    cycles: Option<usize>,
    /// Noise amplitude σ (strain).
    #[arg(long, global = true)]
    noise_sigma: Option<f64>,
    /// Number of noise draws of the parameter cloud.
    #[arg(long, global = true)]
    draws: Option<usize>,
    /// Calibration records (CSV with sidecar JSON); replaces configured ones.
    #[arg(long, global = true, num_args = 1..)]
    records: Vec<PathBuf>,
    /// Held-out records; replaces configured ones.
    #[arg(long, global = true, num_args = 1..)]
    validation_records: Vec<PathBuf>,
    /// Initial parameter file for the identification.
    #[arg(long, global = true)]
    p0: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate synthetic calibration and held-out records.
    Synth {
        #[arg(long)]
        out: PathBuf,
        /// Parameters generating the data; the model preset if absent.
        #[arg(long)]
        true_params: Option<PathBuf>,
        /// Write noise-free records.
        #[arg(long)]
        clean: bool,
    },
    /// Integrate one program and write the trace as CSV.
    Simulate {
        #[arg(long)]
        params: PathBuf,
        /// Ratcheting test `SIGMA_M,SIGMA_A_MAX` (MPa); the metric program if absent.
        #[arg(long, value_parser = parse_test)]
        test: Option<(f64, f64)>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Calibrate the model and write the identified parameters.
    Identify {
        #[arg(long)]
        out: PathBuf,
    },
    /// Parameter cloud and correlation matrix around identified parameters.
    Sensitivity {
        #[arg(long)]
        params: PathBuf,
        /// Re-simulate the first N draws in full to audit the linearised distances.
        #[arg(long, default_value_t = 0)]
        exact_metric: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Correlation matrix of the calibration Jacobian.
    Correlate {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Calibrate every configured model size and apply the overparametrization criteria.
    Diagnose {
        #[arg(long)]
        out: PathBuf,
    },
    /// Error functional of a parameter set on the held-out tests.
    Validate {
        #[arg(long)]
        params: PathBuf,
    },
}

fn parse_family(s: &str) -> Result<ModelFamily, String> {
    ModelFamily::from_label(s).ok_or_else(|| format!("unknown model `{s}`; use AF, OW1 or OW2"))
}

fn parse_hardening(s: &str) -> Result<HardeningChoice, String> {
    serde_json::from_value(serde_json::Value::String(s.to_lowercase())).map_err(|_| format!("unknown hardening rule `{s}`; use new or voce"))
}

fn parse_test(s: &str) -> Result<(f64, f64), String> {
    let (m, a) = s.split_once(',').ok_or("expected SIGMA_M,SIGMA_A_MAX")?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    Ok((num(m)?, num(a)?))
}

fn load_config(cli: &Cli) -> Result<RunConfig, WorkbenchError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let o = &cli.overrides;
    if let Some(f) = o.model {
        cfg.model.family = f;
    }
    if let Some(n) = o.branches {
        cfg.model.n_branches = n;
        cfg.diagnose.branch_counts = vec![n];
    }
    if let Some(h) = o.hardening {
        cfg.model.hardening = h;
    }
    if let Some(n) = o.cycles {
        for t in cfg.experiments.calibration.iter_mut().chain(cfg.experiments.validation.iter_mut()) {
            t.n_cycles = n;
        }
    }
    if let Some(s) = o.noise_sigma {
        cfg.noise.sigma = s;
    }
    if let Some(n) = o.draws {
        cfg.sobol.n_draws = n;
    }
    if !o.records.is_empty() {
        cfg.paths.calibration_records = o.records.clone();
        // one block of noise modes per test
        cfg.sobol.dimensions = cfg.noise.n_modes * o.records.len();
    }
    if !o.validation_records.is_empty() {
        cfg.paths.validation_records = o.validation_records.clone();
    }
    if let Some(p) = &o.p0 {
        cfg.paths.initial_params = Some(p.clone());
    }
    if let Command::Synth { true_params, clean, .. } = &cli.command {
        if true_params.is_some() {
            cfg.synthetic.true_params = true_params.clone();
        }
        if *clean {
            cfg.synthetic.noise_index = None;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn create_dir(dir: &Path) -> Result<(), WorkbenchError> {
    std::fs::create_dir_all(dir).map_err(|source| WorkbenchError::Io { path: dir.to_path_buf(), source })
}

/// Calibration problem in the layout of a parameter file, the file's values
/// in that layout, and the held-out tests.
struct Loaded {
    label: String,
    problem: IdentificationProblem,
    p: Vec<f64>,
    held_out: Vec<TestCase>,
}

fn load_with_params(cfg: &mut RunConfig, params: &Path) -> Result<Loaded, WorkbenchError> {
    let file: ParameterFile = read_json(params)?;
    let mp = read_params(params)?;
    cfg.model = file.spec();
    let (cal, held_out) = load_tests(cfg)?;
    let layout = ParameterLayout::for_model(&mp)?;
    let p = layout.extract(&mp)?;
    let problem = IdentificationProblem::new(layout, cal, Weighting::Identity, cfg.solver.clone())?;
    Ok(Loaded { label: cfg.model.label(), problem, p, held_out })
}

fn run(cli: Cli) -> Result<ExitCode, WorkbenchError> {
    let mut cfg = load_config(&cli)?;
    match &cli.command {
        Command::Synth { out, .. } => {
            create_dir(out)?;
            let (cal, val) = load_tests(&cfg)?;
            for (prefix, tests) in [("calibration", &cal), ("validation", &val)] {
                for (k, t) in tests.iter().enumerate() {
                    let path = out.join(format!("{prefix}_{}.csv", k + 1));
                    write_record(&path, &t.record)?;
                    println!("{}", path.display());
                }
            }
            let truth = match &cfg.synthetic.true_params {
                Some(p) => read_params(p)?,
                None => ModelSpec { hardening: HardeningChoice::New, ..cfg.model }.preset()?,
            };
            let path = out.join("true_params.json");
            write_params(&path, &truth)?;
            println!("{}", path.display());
        }
        Command::Simulate { params, test, out } => {
            let mp = read_params(params)?;
            let program = match test {
                Some((m, a)) => {
                    let n = cli.overrides.cycles.unwrap_or(cfg.experiments.calibration.first().map_or(200, |t| t.n_cycles));
                    ratchet_core::simulator::make_experiment_program(*m, *a, n, &cfg.experiments.program)?
                }
                None => cfg.metric.program(),
            };
            let trace = ratchet_core::integrate(&mp, &program, &cfg.solver)?;
            let file = std::fs::File::create(out).map_err(|source| WorkbenchError::Io { path: out.clone(), source })?;
            trace
                .write_csv(std::io::BufWriter::new(file))
                .map_err(|source| WorkbenchError::Csv { path: out.clone(), source })?;
            println!("{} samples written to {}", trace.len(), out.display());
        }
        Command::Identify { out } => {
            create_dir(out)?;
            let (cal, _) = load_tests(&cfg)?;
            let c = calibrate(&cfg, &cfg.model, &cal)?;
            let label = cfg.model.label();
            write_params(&out.join(format!("params_{label}.json")), &c.problem.layout.to_material_params(&c.fit.p_star)?)?;
            write_json(&out.join(format!("fit_{label}.json")), &c.fit)?;
            write_fit_csv(&out.join("fit.csv"), std::slice::from_ref(&c.fit))?;
            println!("{label}: phi = {:e}, stop = {:?}", c.fit.phi, c.fit.stop);
            if let Some(msg) = c.rank_deficient {
                eprintln!("overparametrized: {msg}");
                return Ok(ExitCode::from(4));
            }
        }
        Command::Sensitivity { params, exact_metric, out } => {
            create_dir(out)?;
            cfg.diagnose.exact_metric_draws = *exact_metric;
            let Loaded { label, problem, p, .. } = load_with_params(&mut cfg, params)?;
            let names = problem.layout.names();
            let (cloud, summary) = analyze_cloud(&cfg, &problem, &p)?;
            write_cloud_csv(&out.join(format!("cloud_{label}.csv")), &names, &cloud)?;
            write_correlation_csv(&out.join(format!("correlation_{label}.csv")), &names, &cloud.correlation)?;
            write_json(&out.join(format!("cloud_{label}.json")), &summary)?;
            println!("{label}: cloud size = {:e}, max |Corr| = {}", summary.cloud_size, summary.max_abs_correlation);
        }
        Command::Correlate { params, out } => {
            let Loaded { problem, p, .. } = load_with_params(&mut cfg, params)?;
            let j = jacobian_fd(&problem, &p, &cfg.sensitivity.jacobian)?;
            let corr = correlation_matrix(&j)?;
            write_correlation_csv(out, &problem.layout.names(), &corr)?;
            println!("{}", out.display());
        }
        Command::Diagnose { out } => {
            let study = run_study(&cfg)?;
            let files = emit_reports(&study, out)?;
            for m in &study.models {
                println!(
                    "{}: phi = {:e}, cloud size = {}",
                    m.spec.label(),
                    m.fit.phi,
                    m.cloud_summary.as_ref().map_or("-".into(), |c| format!("{:e}", c.cloud_size))
                );
            }
            println!("flagged: {:?}; {} files in {}", study.diagnostics.flagged, files.len(), out.display());
            if study.models.iter().any(|m| m.rank_deficient.is_some()) {
                return Ok(ExitCode::from(4));
            }
        }
        Command::Validate { params } => {
            let Loaded { held_out, .. } = load_with_params(&mut cfg, params)?;
            let result = run_validation(&read_params(params)?, &held_out, &cfg.solver)?;
            println!("{}", serde_json::to_string_pretty(&result).expect("validation result serializes"));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_rank_deficient() {
                ExitCode::from(4)
            } else if e.is_config() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
