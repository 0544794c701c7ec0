use crate::constitutive::{hooke_stress, MaterialParams, MaterialState, MPA};
use crate::tensors::{deviator, SymTensor};

use super::local::{local_update, LocalFailure, StepOutcome};
use super::thermal::temperature_step;
use super::{LoadingProgram, SimulationError, SimulationTrace, SolverOptions};

/// Fixed-point passes coupling θ̇ into the volumetric strain rate.
const THERMAL_PASSES: usize = 4;

struct Accumulated {
    state: MaterialState,
    work: f64,
    plastic_cosine: f64,
    branch_cosine: f64,
    splits: usize,
}

/// Advances over one grid step, halving on local failure.
fn advance(
    params: &MaterialParams,
    state: &MaterialState,
    sigma_a: f64,
    sigma_b: f64,
    dt: f64,
    depth: u32,
    opts: &SolverOptions,
    time: f64,
) -> Result<Accumulated, SimulationError> {
    let n = params.c.len();
    match local_update(params, state, &SymTensor::uniaxial(sigma_a), &SymTensor::uniaxial(sigma_b), dt) {
        Ok(StepOutcome { state, plastic_work, branch_work, plastic_cosine, branch_cosine, delta_lambda }) => {
            let plastic = delta_lambda > 0.0;
            Ok(Accumulated {
                state,
                work: plastic_work + branch_work[..n].iter().sum::<f64>(),
                plastic_cosine: if plastic { plastic_cosine } else { 1.0 },
                branch_cosine: if plastic { branch_cosine[..n].iter().copied().fold(1.0, f64::min) } else { 1.0 },
                splits: 0,
            })
        }
        Err(LocalFailure::YieldRadiusCollapsed(radius)) => Err(SimulationError::YieldRadiusCollapsed { time, radius }),
        Err(failure) => {
            if depth >= opts.max_substep_depth {
                return Err(match failure {
                    LocalFailure::NoBracket => SimulationError::LimitLoad { time, stress: sigma_b },
                    other => SimulationError::LocalSolveFailed { time, depth, reason: format!("{other:?}") },
                });
            }
            let mid = 0.5 * (sigma_a + sigma_b);
            let first = advance(params, state, sigma_a, mid, 0.5 * dt, depth + 1, opts, time)?;
            let second = advance(params, &first.state, mid, sigma_b, 0.5 * dt, depth + 1, opts, time + 0.5 * dt)?;
            Ok(Accumulated {
                state: second.state,
                work: first.work + second.work,
                plastic_cosine: first.plastic_cosine.min(second.plastic_cosine),
                branch_cosine: first.branch_cosine.min(second.branch_cosine),
                splits: 1 + first.splits + second.splits,
            })
        }
    }
}

/// Total strain `ε = ε_θ + C⁻¹σ + ε_i` under the prescribed stress.
fn total_strain(sigma: &SymTensor, state: &MaterialState, params: &MaterialParams, thermal: bool) -> SymTensor {
    let et = &params.elastic_thermal;
    let eps_theta = if thermal { et.alpha / 3.0 * (state.theta - et.theta0) } else { 0.0 };
    let eps_e = (sigma.trace() / (9.0 * et.k)) * SymTensor::IDENTITY + (0.5 / et.mu) * deviator(sigma);
    eps_theta * SymTensor::IDENTITY + eps_e + state.eps_i
}

fn stress_error(eps: &SymTensor, sigma: &SymTensor, state: &MaterialState, params: &MaterialParams, thermal: bool) -> f64 {
    let et = &params.elastic_thermal;
    let eps_theta = if thermal { et.alpha / 3.0 * (state.theta - et.theta0) } else { 0.0 };
    let recovered = hooke_stress(&(*eps - eps_theta * SymTensor::IDENTITY), &state.eps_i, et);
    (recovered - *sigma).max_abs()
}

/// Integrates `program` from the virgin state at θ₀.
pub fn integrate(
    params: &MaterialParams,
    program: &LoadingProgram,
    opts: &SolverOptions,
) -> Result<SimulationTrace, SimulationError> {
    params.validate()?;
    if program.is_empty() {
        return Err(SimulationError::InvalidProgram("program has no segments".into()));
    }
    let grid = program.discretize(opts)?;
    let et = &params.elastic_thermal;
    let nodes = grid.times.len();
    let mut state = MaterialState::initial(params.n_branches(), et.theta0);

    let mut strain = Vec::with_capacity(nodes);
    let mut theta = Vec::with_capacity(nodes);
    let mut dissipation = Vec::with_capacity(nodes);
    let mut dissipation_rate = Vec::with_capacity(nodes);
    let mut s = Vec::with_capacity(nodes);
    let mut snapshots = Vec::new();
    let mut max_stress_error = 0.0_f64;
    let mut min_plastic_cosine = 1.0_f64;
    let mut min_branch_cosine = 1.0_f64;
    let mut substepped = 0;
    let mut cumulative = 0.0;

    let sigma0 = SymTensor::uniaxial(grid.stress[0]);
    let eps0 = total_strain(&sigma0, &state, params, opts.thermal);
    max_stress_error = max_stress_error.max(stress_error(&eps0, &sigma0, &state, params, opts.thermal));
    strain.push(eps0.0[0]);
    theta.push(state.theta);
    dissipation.push(0.0);
    dissipation_rate.push(0.0);
    s.push(state.s);
    let stride = opts.snapshot_stride;
    if stride > 0 {
        snapshots.push((0, state.clone()));
    }

    for k in 1..nodes {
        let (t_a, t_b) = (grid.times[k - 1], grid.times[k]);
        let (sig_a, sig_b) = (grid.stress[k - 1], grid.stress[k]);
        let dt = t_b - t_a;
        let step = advance(params, &state, sig_a, sig_b, dt, 0, opts, t_a)?;
        min_plastic_cosine = min_plastic_cosine.min(step.plastic_cosine);
        min_branch_cosine = min_branch_cosine.min(step.branch_cosine);
        if step.splits > 0 {
            substepped += 1;
        }
        let work_per_mass = step.work * MPA / et.rho;
        let delta_i = if dt > 0.0 { work_per_mass / dt } else { 0.0 };
        let mut next = step.state;
        next.theta = state.theta;
        if opts.thermal && dt > 0.0 {
            let tr_sigma_rate = (sig_b - sig_a) / dt;
            let mut theta_rate = 0.0;
            let mut theta_next = state.theta;
            for _ in 0..THERMAL_PASSES {
                let tr_eps_rate = et.alpha * theta_rate + tr_sigma_rate / (3.0 * et.k);
                theta_next = temperature_step(state.theta, tr_eps_rate, delta_i, et, dt)?;
                theta_rate = (theta_next - state.theta) / dt;
            }
            next.theta = theta_next;
        }
        state = next;
        cumulative += work_per_mass;

        let sigma = SymTensor::uniaxial(sig_b);
        let eps = total_strain(&sigma, &state, params, opts.thermal);
        max_stress_error = max_stress_error.max(stress_error(&eps, &sigma, &state, params, opts.thermal));
        strain.push(eps.0[0]);
        theta.push(state.theta);
        dissipation.push(cumulative);
        dissipation_rate.push(delta_i);
        s.push(state.s);
        if stride > 0 && (k % stride == 0 || k == nodes - 1) {
            snapshots.push((k, state.clone()));
        }
    }

    Ok(SimulationTrace {
        times: grid.times,
        stress: grid.stress,
        strain,
        theta,
        dissipation,
        dissipation_rate,
        s,
        snapshots,
        final_state: state,
        max_stress_error,
        min_plastic_cosine,
        min_branch_cosine,
        substepped,
        options: opts.clone(),
    })
}
