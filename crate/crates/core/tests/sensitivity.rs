use std::time::Instant;

use nalgebra::DMatrix;
use proptest::prelude::*;

use ratchet_core::identify::*;
use ratchet_core::sensitivity::*;
use ratchet_core::simulator::*;
use ratchet_core::*;

fn synthetic_problem(p_true: &MaterialParams, n_cycles: usize) -> IdentificationProblem {
    let cfg = ExperimentProgramConfig::default();
    let opts = SolverOptions::default();
    let tests = [(420.0, 470.0), (635.0, 255.0)]
        .iter()
        .map(|(m, a)| {
            let program = make_experiment_program(*m, *a, n_cycles, &cfg).unwrap();
            let record = extract_extrema(&integrate(p_true, &program, &opts).unwrap(), &program).unwrap();
            TestCase { program, record }
        })
        .collect();
    IdentificationProblem::new(ParameterLayout::for_model(p_true).unwrap(), tests, Weighting::Identity, opts).unwrap()
}

/// Clean AF-2 data, so the truth is an exact zero-gradient optimum.
fn af2_setup() -> (IdentificationProblem, Vec<f64>, Linearization) {
    let p = MaterialParams::vt6_af(2).unwrap();
    let prob = synthetic_problem(&p, 50);
    let x = prob.layout.extract(&p).unwrap();
    let metric = MetricProgramConfig::default().program();
    let lin = Linearization::assemble(&prob, &x, &metric, &SensitivityOptions::default()).unwrap();
    (prob, x, lin)
}

#[test]
fn contiguous_sobol_normals_have_standard_moments() {
    let z = sobol_normals(&SobolConfig { leap: 0, ..Default::default() }).unwrap();
    assert_eq!(z.shape(), (10_000, 40));
    for (c, col) in z.column_iter().enumerate() {
        let n = col.len() as f64;
        let mean = col.sum() / n;
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() <= 0.02, "column {c}: mean {mean}");
        assert!((var - 1.0).abs() <= 0.03, "column {c}: variance {var}");
    }
}

#[test]
fn draws_are_bitwise_identical_across_thread_counts() {
    let (prob, x, lin) = af2_setup();
    let noise = NoiseModel::default();
    let sobol = SobolConfig { n_draws: 2000, ..Default::default() };
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let z = sobol_normals(&sobol).unwrap();
            let cloud = cloud_from_linearization(&prob, &x, &lin, &noise, &sobol, &SensitivityOptions::default()).unwrap();
            (z, cloud.draws, cloud.distances, cloud.cloud_size)
        })
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(7));
}

#[test]
fn antithetic_draws_centre_the_cloud_on_p_star() {
    let (prob, x, lin) = af2_setup();
    let sobol = SobolConfig { n_draws: 1000, antithetic: true, ..Default::default() };
    let z = sobol_normals(&sobol).unwrap();
    for col in z.column_iter() {
        assert_eq!(col.sum(), 0.0);
    }
    let cloud = cloud_from_linearization(&prob, &x, &lin, &NoiseModel::default(), &sobol, &SensitivityOptions::default()).unwrap();
    for (i, p) in x.iter().enumerate() {
        let mean_shift = cloud.draws.iter().map(|d| d[i] - p).sum::<f64>() / cloud.draws.len() as f64;
        assert!(mean_shift.abs() <= 1e-12 * p.abs(), "parameter {i}: {mean_shift:e}");
    }
}

#[test]
fn linearized_distance_predicts_full_simulation() {
    let (prob, x, lin) = af2_setup();
    let metric = MetricProgramConfig::default().program();
    let star = prob.layout.to_material_params(&x).unwrap();
    let z = sobol_normals(&SobolConfig { dimensions: x.len() + 1, skip: 11, leap: 0, n_draws: 20, antithetic: false }).unwrap();
    for r in 0..z.nrows() {
        let dir: Vec<f64> = x.iter().enumerate().map(|(i, v)| v * z[(r, i)]).collect();
        let unit = linearized_distance(&lin.d_eps_dp, &dir).unwrap();
        // scale to a linearised distance of 1e-4
        let dp: Vec<f64> = dir.iter().map(|d| d * 1e-4 / unit).collect();
        let d_lin = linearized_distance(&lin.d_eps_dp, &dp).unwrap();
        let p: Vec<f64> = x.iter().zip(&dp).map(|(x, d)| x + d).collect();
        let full = mechanics_distance(&star, &prob.layout.to_material_params(&p).unwrap(), &metric, &prob.solver).unwrap();
        assert!((full - d_lin).abs() <= 0.05 * d_lin, "direction {r}: full {full:e}, linearised {d_lin:e}");
    }
}

#[test]
fn mechanics_distance_is_a_symmetric_pseudometric() {
    let metric = MetricProgramConfig::default().program();
    let opts = SolverOptions::default();
    let a = MaterialParams::vt6_af(2).unwrap();
    let mut b = a.clone();
    b.yield_stress *= 0.99;
    let mut c = a.clone();
    c.c[0] *= 1.05;
    let d = |p: &MaterialParams, q: &MaterialParams| mechanics_distance(p, q, &metric, &opts).unwrap();
    assert_eq!(d(&a, &a), 0.0);
    assert_eq!(d(&a, &b), d(&b, &a));
    assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
}

#[test]
fn strain_sensitivity_matches_directional_difference() {
    let (prob, x, lin) = af2_setup();
    let metric = MetricProgramConfig::default().program();
    let strain = |p: &[f64]| integrate(&prob.layout.to_material_params(p).unwrap(), &metric, &prob.solver).unwrap().strain;
    let dir: Vec<f64> = x.iter().enumerate().map(|(i, v)| v * if i % 2 == 0 { 1.0 } else { -0.5 }).collect();
    let eps = 1e-5;
    let plus: Vec<f64> = x.iter().zip(&dir).map(|(x, d)| x + eps * d).collect();
    let minus: Vec<f64> = x.iter().zip(&dir).map(|(x, d)| x - eps * d).collect();
    let fd: Vec<f64> = strain(&plus).iter().zip(strain(&minus)).map(|(a, b)| (a - b) / (2.0 * eps)).collect();
    let pred = &lin.d_eps_dp * nalgebra::DVector::from(dir);
    let err = fd.iter().zip(pred.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    assert!(err <= 1e-5 * pred.norm(), "{:e}", err / pred.norm());
    assert_eq!(linearized_distance(&lin.d_eps_dp, &vec![0.0; x.len()]).unwrap(), 0.0);
}

#[test]
fn elastic_program_leaves_plastic_constants_without_influence() {
    let elastic = make_metric_program(10, 500.0, 1.0, 0.5);
    let opts = SolverOptions::default();
    for p in [MaterialParams::vt6_af(3).unwrap(), MaterialParams::vt6_ow1(2).unwrap(), MaterialParams::vt6_ow2(2).unwrap()] {
        let layout = ParameterLayout::for_model(&p).unwrap();
        let x = layout.extract(&p).unwrap();
        let s = strain_sensitivity(&layout, &x, &elastic, &opts, 1e-5, 1e-6).unwrap();
        for (i, name) in layout.names().iter().enumerate() {
            if name.starts_with("kappa") || name.starts_with('r') || name == "m" {
                assert!(s.column(i).iter().all(|v| *v == 0.0), "{name}");
            }
        }
    }
}

#[test]
fn cloud_size_scales_linearly_with_noise() {
    let (prob, x, lin) = af2_setup();
    let sobol = SobolConfig { n_draws: 1000, ..Default::default() };
    let opts = SensitivityOptions::default();
    let size = |sigma: f64| {
        let noise = NoiseModel { sigma, ..Default::default() };
        cloud_from_linearization(&prob, &x, &lin, &noise, &sobol, &opts).unwrap()
    };
    let (a, b) = (size(1e-6), size(2e-6));
    assert!((b.cloud_size / a.cloud_size - 2.0).abs() <= 2e-10);
    let zero = size(0.0);
    assert_eq!(zero.cloud_size, 0.0);
    assert!(zero.draws.iter().all(|d| d == &x));
}

#[test]
fn ten_thousand_refits_within_a_minute() {
    let (prob, x, lin) = af2_setup();
    let sobol = SobolConfig { dimensions: 40, ..Default::default() };
    let start = Instant::now();
    let cloud = cloud_from_linearization(&prob, &x, &lin, &NoiseModel::default(), &sobol, &SensitivityOptions::default()).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert_eq!(cloud.draws.len(), 10_000);
    assert!(elapsed <= 60.0, "{elapsed} s");
}

#[test]
fn qr_path_is_no_worse_than_normal_equations_near_rank_deficiency() {
    let p = [1.0, 1.0, 1.0, 1.0];
    let target: Vec<f64> = (0..60).map(|i| (i as f64 * 0.71).cos() * 1e-3).collect();
    let zeros = vec![0.0; 60];
    for gap in [1e-4, 1e-7] {
        // column 1 is column 0 plus `gap` times an independent direction
        let mut j = DMatrix::from_fn(60, 4, |i, c| ((i as f64 + 1.0) * (c as f64 + 0.3)).sin());
        let near = j.column(0) + j.column(1) * gap;
        j.set_column(1, &near);
        let refit = FastRefit::new(&j, &Weighting::Identity, &p, 1e-6).unwrap();
        let qr = fast_refit(&refit, &zeros, &zeros, &target).unwrap();
        let residual = |q: &[f64]| {
            let d = nalgebra::DVector::from_iterator(4, q.iter().zip(&p).map(|(a, b)| a - b));
            (nalgebra::DVector::from(target.clone()) - &j * d).norm()
        };
        match fast_refit_normal_equations(&j, &Weighting::Identity, &p, &zeros, &zeros, &target) {
            Ok(ne) => assert!(residual(&qr) <= residual(&ne) * (1.0 + 1e-9), "gap {gap}: {:e} vs {:e}", residual(&qr), residual(&ne)),
            Err(SensitivityError::Singular) => assert!(gap < 1e-5, "normal equations failed at gap {gap}"),
            Err(e) => panic!("{e}"),
        }
    }
}

fn corr_oracle(j: &DMatrix<f64>) -> DMatrix<f64> {
    let n = j.ncols();
    let mut p = DMatrix::<f64>::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            p[(a, b)] = (0..j.nrows()).map(|r| j[(r, a)] * j[(r, b)]).sum();
        }
    }
    DMatrix::from_fn(n, n, |a, b| p[(a, b)] / (p[(a, a)] * p[(b, b)]).sqrt())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn correlation_matches_oracle_and_is_well_formed(
        entries in proptest::collection::vec(-1.0f64..1.0, 500),
        scale in proptest::collection::vec(1e-6f64..1e6, 5),
    ) {
        let j = DMatrix::from_vec(100, 5, entries);
        let c = correlation_matrix(&j).unwrap();
        let o = corr_oracle(&j);
        for a in 0..5 {
            prop_assert_eq!(c[(a, a)], 1.0);
            for b in 0..5 {
                prop_assert!((c[(a, b)] - o[(a, b)]).abs() <= 1e-12);
                prop_assert_eq!(c[(a, b)], c[(b, a)]);
                prop_assert!((-1.0..=1.0).contains(&c[(a, b)]));
            }
        }
        // positive column scaling leaves |Corr| unchanged
        let mut js = j.clone();
        for (i, s) in scale.iter().enumerate() {
            js.column_mut(i).scale_mut(*s);
        }
        let cs = correlation_matrix(&js).unwrap();
        for (a, b) in c.iter().zip(cs.iter()) {
            prop_assert!((a.abs() - b.abs()).abs() <= 1e-12);
        }
    }
}

#[test]
fn correlation_of_model_jacobians_is_well_formed() {
    for p in [MaterialParams::vt6_af(3).unwrap(), MaterialParams::vt6_ow2(3).unwrap()] {
        let prob = synthetic_problem(&p, 30);
        let j = jacobian_fd(&prob, &prob.layout.extract(&p).unwrap(), &JacobianOptions::default()).unwrap();
        let c = correlation_matrix(&j).unwrap();
        for a in 0..c.nrows() {
            assert_eq!(c[(a, a)], 1.0);
            for b in 0..c.ncols() {
                assert_eq!(c[(a, b)], c[(b, a)]);
                assert!(c[(a, b)].abs() <= 1.0);
            }
        }
    }
}

#[test]
fn inactive_thresholds_are_reported_as_zero_columns() {
    // the preset OW-I thresholds are never reached by these tests
    let p = MaterialParams::vt6_ow1(3).unwrap();
    let prob = synthetic_problem(&p, 30);
    let j = jacobian_fd(&prob, &prob.layout.extract(&p).unwrap(), &JacobianOptions::default()).unwrap();
    let r1 = prob.layout.names().iter().position(|n| n == "r1_MPa").unwrap();
    assert!(matches!(correlation_matrix(&j), Err(SensitivityError::ZeroColumn(c)) if c == r1));
}
