use std::path::Path;
use std::process::{Command, Output};

fn ratchet(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratchet")).args(args).current_dir(cwd).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

/// Short programs, short searches and a short metric program.
const SMALL_CONFIG: &str = r#"{
  "experiments": {"calibration": [{"sigma_m": 420, "sigma_a_max": 470, "n_cycles": 30},
                                  {"sigma_m": 635, "sigma_a_max": 255, "n_cycles": 30}],
                  "validation": [{"sigma_m": 530, "sigma_a_max": 360, "n_cycles": 30}]},
  "solver": {"steps_per_cycle": 20},
  "identify": {"nested": {"inner": {"max_evals": 40}, "outer": {"max_evals": 8}},
               "refine": {"max_iterations": 3}},
  "sobol": {"n_draws": 16},
  "metric": {"n_cycles": 5},
  "diagnose": {"branch_counts": [2]}
}"#;

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("config.json"), SMALL_CONFIG).unwrap();
    let out = ratchet(&["--config", "config.json", "synth", "--out", "data", "--clean"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    dir
}

const RECORDS: [&str; 3] = ["--records", "data/calibration_1.csv", "data/calibration_2.csv"];

#[test]
fn synth_writes_records_and_truth() {
    let dir = setup();
    let d = dir.path().join("data");
    for f in ["calibration_1.csv", "calibration_1.json", "calibration_2.csv", "validation_1.csv", "true_params.json"] {
        assert!(d.join(f).is_file(), "{f} missing");
    }
    let csv = std::fs::read_to_string(d.join("calibration_1.csv")).unwrap();
    assert!(csv.starts_with("cycle,max_strain,min_strain\n"));
    assert_eq!(csv.lines().count(), 31);
    let truth = std::fs::read_to_string(d.join("true_params.json")).unwrap();
    assert!(truth.contains("\"K_MPa\"") && truth.contains("\"AF\""));
}

#[test]
fn simulate_writes_a_trace() {
    let dir = setup();
    let out = ratchet(
        &["--config", "config.json", "simulate", "--params", "data/true_params.json", "--test", "420,470", "--out", "trace.csv"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(trace.starts_with("time_s,stress_MPa,strain,theta_K,dissipation_J_per_kg\n"));
    assert!(trace.lines().count() > 30 * 20);
}

#[test]
fn truth_validates_to_zero_on_its_clean_held_out_data() {
    let dir = setup();
    let mut args = vec!["--config", "config.json", "validate", "--params", "data/true_params.json"];
    args.extend(RECORDS);
    args.extend(["--validation-records", "data/validation_1.csv"]);
    let out = ratchet(&args, dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["phi"], 0.0);
    assert_eq!(v["n_tests"], 1);
    assert_eq!(v["flagged"], false);
}

#[test]
fn correlate_and_sensitivity_write_matrices() {
    let dir = setup();
    let mut args = vec!["--config", "config.json", "correlate", "--params", "data/true_params.json", "--out", "corr.csv"];
    args.extend(RECORDS);
    let out = ratchet(&args, dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let corr = std::fs::read_to_string(dir.path().join("corr.csv")).unwrap();
    assert!(corr.starts_with("parameter,gamma_MPa,beta_MPa,c1_MPa"));
    assert_eq!(corr.lines().count(), 8);

    let mut args = vec!["--config", "config.json", "sensitivity", "--params", "data/true_params.json"];
    args.extend(["--exact-metric", "2", "--out", "sens"]);
    args.extend(RECORDS);
    let out = ratchet(&args, dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let cloud = std::fs::read_to_string(dir.path().join("sens/cloud_AF-2.csv")).unwrap();
    assert_eq!(cloud.lines().count(), 17);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sens/cloud_AF-2.json")).unwrap()).unwrap();
    assert_eq!(summary["exact_distances"].as_array().unwrap().len(), 2);
    assert!(dir.path().join("sens/correlation_AF-2.csv").is_file());
}

#[test]
fn diagnose_emits_reports() {
    let dir = setup();
    let out = ratchet(&["--config", "config.json", "diagnose", "--out", "report"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = dir.path().join("report");
    for f in ["fit.csv", "diagnostics.json", "params_AF-2.json", "cloud_AF-2.csv", "plots/AF-2_test1_max.csv"] {
        assert!(r.join(f).is_file(), "{f} missing");
    }
}

#[test]
fn bad_inputs_exit_with_config_error() {
    let dir = setup();
    let out = ratchet(&["--config", "missing.json", "identify", "--out", "x"], dir.path());
    assert_eq!(code(&out), 2);
    std::fs::write(dir.path().join("bad.json"), r#"{"model": "AF", "n_branches": 2, "hardening": "new", "parameters": {"K_MPa": 800}}"#)
        .unwrap();
    let out = ratchet(&["--config", "config.json", "validate", "--params", "bad.json"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing parameter"));
    let out = ratchet(&["identify", "--out", "x", "--branches", "9"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn elastic_only_model_is_a_hard_overparametrization_flag() {
    let dir = setup();
    // yield stress above every peak: no constant but the elastic ones acts
    let truth = std::fs::read_to_string(dir.path().join("data/true_params.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&truth).unwrap();
    v["parameters"]["K_MPa"] = 2000.0.into();
    std::fs::write(dir.path().join("elastic.json"), v.to_string()).unwrap();
    let mut args = vec!["--config", "config.json", "correlate", "--params", "elastic.json", "--out", "c.csv"];
    args.extend(RECORDS);
    let out = ratchet(&args, dir.path());
    assert_eq!(code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
}
