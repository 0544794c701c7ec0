//! Backward-Euler update of the internal variables over one step of
//! prescribed stress.
//!
//! With the full stress tensor prescribed, Hooke's law gives the elastic
//! strain directly, so the only unknowns are the inelastic multiplier Δλ and
//! the flow direction N. Each branch is updated in closed form (AF), by radial
//! return (OW-I) or by a scalar solve on the backstress norm (OW-II); the
//! consistency condition is then one scalar equation in Δλ solved by Brent's
//! method, with N found by fixed-point iteration inside each evaluation.

use crate::constitutive::{
    isotropic_hardening, Kinematic, MaterialParams, MaterialState, MicroYield, Viscosity, PERZYNA_F0, SQRT_2_3,
};
use crate::numerics::brent;
use crate::tensors::{deviator, double_contract, frobenius_norm, SymTensor};

const MAX_BRANCHES: usize = 4;
const DIRECTION_TOL: f64 = 1e-14;
const DIRECTION_ITERS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LocalFailure {
    /// No multiplier restores consistency: the stress exceeds the limit load.
    NoBracket,
    /// The root finder or the direction iteration did not converge.
    NotConverged,
    /// K + R dropped to zero or below.
    YieldRadiusCollapsed(f64),
}

/// Result of one accepted local step.
#[derive(Debug, Clone)]
pub(crate) struct StepOutcome {
    pub state: MaterialState,
    pub delta_lambda: f64,
    /// `σ_eff : Δε_i`, MPa.
    pub plastic_work: f64,
    /// `X_l : Δε_li` per branch, MPa.
    pub branch_work: [f64; MAX_BRANCHES],
    /// Cauchy-Schwarz normalised versions of the work terms, in [−1, 1].
    pub plastic_cosine: f64,
    pub branch_cosine: [f64; MAX_BRANCHES],
}

#[derive(Clone, Copy)]
struct Branches {
    x: [SymTensor; MAX_BRANCHES],
    d_eps_li: [SymTensor; MAX_BRANCHES],
}

struct Context<'a> {
    params: &'a MaterialParams,
    n: usize,
    x_n: [SymTensor; MAX_BRANCHES],
    s_next: SymTensor,
    d_eps_e_dev: SymTensor,
    s_n: f64,
    s_eps_n: f64,
    dt: f64,
}

impl Context<'_> {
    fn branch_update(&self, dl: f64, dir: &SymTensor) -> Branches {
        let mut out = Branches { x: [SymTensor::ZERO; MAX_BRANCHES], d_eps_li: [SymTensor::ZERO; MAX_BRANCHES] };
        let c = &self.params.c;
        for l in 0..self.n {
            let trial = self.x_n[l] + (c[l] * dl) * *dir;
            let (x, d_eps) = match &self.params.kinematic {
                Kinematic::ArmstrongFrederick { kappa } => {
                    // exact solution of dX/dλ = c (N − ϰ X) for a fixed direction
                    let b = c[l] * kappa[l] * dl;
                    let decay = -(-b).exp_m1();
                    let reach = if kappa[l] > 0.0 { decay / kappa[l] } else { c[l] * dl };
                    let x = (1.0 - decay) * self.x_n[l] + reach * *dir;
                    (x, dl * *dir - (1.0 / c[l]) * (x - self.x_n[l]))
                }
                Kinematic::OhnoWangI { r } => match r[l] {
                    MicroYield::Unbounded => (trial, SymTensor::ZERO),
                    MicroYield::Finite(r) => {
                        let limit = SQRT_2_3 * r;
                        let a = frobenius_norm(&trial);
                        if a > limit {
                            let n = (1.0 / a) * trial;
                            (limit * n, ((a - limit) / c[l]) * n)
                        } else {
                            (trial, SymTensor::ZERO)
                        }
                    }
                },
                Kinematic::OhnoWangII { r, m } => {
                    let a = frobenius_norm(&trial);
                    if a == 0.0 {
                        (trial, SymTensor::ZERO)
                    } else {
                        let n = (1.0 / a) * trial;
                        let drive = (dl * double_contract(dir, &n)).max(0.0);
                        let x = ow2_norm(a, c[l] * drive, r[l], *m);
                        (x * n, ((a - x) / c[l]) * n)
                    }
                }
            };
            out.x[l] = x;
            out.d_eps_li[l] = d_eps;
        }
        out
    }

    fn effective(&self, b: &Branches) -> SymTensor {
        b.x[..self.n].iter().fold(self.s_next, |acc, x| acc - *x)
    }

    /// Flow direction consistent with Δλ, starting from `guess`.
    fn direction(&self, dl: f64, guess: SymTensor) -> Result<(SymTensor, Branches), LocalFailure> {
        let mut dir = guess;
        for _ in 0..DIRECTION_ITERS {
            let b = self.branch_update(dl, &dir);
            let eff = self.effective(&b);
            if double_contract(&eff, &dir) <= 0.0 {
                // overshoot: σ_eff reversed, the consistency residual is negative
                return Ok((dir, b));
            }
            let norm = frobenius_norm(&eff);
            let next = (1.0 / norm) * eff;
            let change = frobenius_norm(&(next - dir));
            dir = next;
            if change <= DIRECTION_TOL {
                let b = self.branch_update(dl, &dir);
                return Ok((dir, b));
            }
        }
        Err(LocalFailure::NotConverged)
    }

    fn hardening(&self, dl: f64, dir: &SymTensor) -> (f64, f64) {
        let s = self.s_n + SQRT_2_3 * dl;
        let s_eps = self.s_eps_n + SQRT_2_3 * frobenius_norm(&(self.d_eps_e_dev + dl * *dir));
        (s, s_eps)
    }

    fn radius(&self, s: f64, s_eps: f64) -> f64 {
        self.params.yield_stress + isotropic_hardening(s, s_eps, &self.params.hardening)
    }

    fn viscous_overstress(&self, dl: f64) -> f64 {
        match self.params.viscosity {
            Viscosity::RateIndependent => 0.0,
            Viscosity::Perzyna { eta, m_perzyna } => {
                if dl <= 0.0 {
                    0.0
                } else if self.dt <= 0.0 {
                    f64::INFINITY
                } else {
                    PERZYNA_F0 * (eta * dl / self.dt).powf(1.0 / m_perzyna)
                }
            }
        }
    }

    /// Consistency residual at Δλ and the direction it converged to.
    fn residual(&self, dl: f64, guess: SymTensor) -> Result<(f64, SymTensor), LocalFailure> {
        let (dir, b) = self.direction(dl, guess)?;
        let eff = self.effective(&b);
        let (s, s_eps) = self.hardening(dl, &dir);
        let g = double_contract(&eff, &dir) - SQRT_2_3 * self.radius(s, s_eps) - self.viscous_overstress(dl);
        Ok((g, dir))
    }
}

/// Norm `x` of an updated OW-II backstress: `x + drive (√(2/3) x / r)^m = a`.
fn ow2_norm(a: f64, drive: f64, r: f64, m: f64) -> f64 {
    if drive == 0.0 {
        return a;
    }
    let k = drive * (SQRT_2_3 / r).powf(m);
    let h = |x: f64| x + k * x.powf(m) - a;
    if m >= 1.0 {
        // h is convex and increasing: Newton from the right is monotone
        let mut x = a;
        for _ in 0..100 {
            let hx = h(x);
            let dh = 1.0 + k * m * x.powf(m - 1.0);
            let next = (x - hx / dh).max(0.0);
            if (x - next).abs() <= 4.0 * f64::EPSILON * x || next == x {
                return next;
            }
            x = next;
        }
        x
    } else {
        brent(h, 0.0, a, -a, h(a), 0.0, 300).unwrap_or(a)
    }
}

fn cosine(work: f64, a: &SymTensor, b: &SymTensor) -> f64 {
    let scale = frobenius_norm(a) * frobenius_norm(b);
    if scale > 0.0 {
        work / scale
    } else {
        0.0
    }
}

/// Advances `state` from stress `sigma_n` to `sigma_next` over `dt`.
///
/// A step that starts elastic and ends beyond the yield surface is split at
/// the crossing: the first part is purely elastic and the inelastic update
/// starts from the yield point. This keeps the response continuously
/// differentiable in the material constants.
pub(crate) fn local_update(
    params: &MaterialParams,
    state: &MaterialState,
    sigma_n: &SymTensor,
    sigma_next: &SymTensor,
    dt: f64,
) -> Result<StepOutcome, LocalFailure> {
    let n = params.c.len();
    let mu = params.elastic_thermal.mu;
    let x_sum = (0..n).fold(SymTensor::ZERO, |acc, l| acc + params.c[l] * deviator(&(state.eps_i - state.eps_li[l])));
    let s0 = deviator(sigma_n) - x_sum;
    let ds = deviator(sigma_next) - deviator(sigma_n);
    let de = SQRT_2_3 * (0.5 / mu) * frobenius_norm(&ds);
    let f = |a: f64| {
        let r = params.yield_stress + isotropic_hardening(state.s, state.s_eps + a * de, &params.hardening);
        frobenius_norm(&(s0 + a * ds)) - SQRT_2_3 * r
    };
    let (f0, f1) = (f(0.0), f(1.0));
    if !(f0 < 0.0 && f1 > 0.0) {
        return local_update_single(params, state, sigma_n, sigma_next, dt);
    }
    let alpha = brent(f, 0.0, 1.0, f0, f1, 0.0, 200).ok_or(LocalFailure::NotConverged)?;
    // the elastic part only accumulates s_ε
    let mut at_yield = state.clone();
    at_yield.s_eps += alpha * de;
    let sigma_y = *sigma_n + alpha * (*sigma_next - *sigma_n);
    local_update_single(params, &at_yield, &sigma_y, sigma_next, (1.0 - alpha) * dt)
}

fn local_update_single(
    params: &MaterialParams,
    state: &MaterialState,
    sigma_n: &SymTensor,
    sigma_next: &SymTensor,
    dt: f64,
) -> Result<StepOutcome, LocalFailure> {
    let n = params.c.len();
    let mu = params.elastic_thermal.mu;
    let mut x_n = [SymTensor::ZERO; MAX_BRANCHES];
    for l in 0..n {
        x_n[l] = params.c[l] * deviator(&(state.eps_i - state.eps_li[l]));
    }
    let s_next = deviator(sigma_next);
    let ctx = Context {
        params,
        n,
        x_n,
        s_next,
        d_eps_e_dev: (0.5 / mu) * (s_next - deviator(sigma_n)),
        s_n: state.s,
        s_eps_n: state.s_eps,
        dt,
    };

    let trial_eff = x_n[..n].iter().fold(s_next, |acc, x| acc - *x);
    let (s0, s_eps0) = ctx.hardening(0.0, &SymTensor::ZERO);
    let radius0 = ctx.radius(s0, s_eps0);
    if radius0 <= 0.0 {
        return Err(LocalFailure::YieldRadiusCollapsed(radius0));
    }
    let trial_norm = frobenius_norm(&trial_eff);
    let f_trial = trial_norm - SQRT_2_3 * radius0;
    if f_trial <= 0.0 {
        let mut next = state.clone();
        next.s_eps = s_eps0;
        return Ok(StepOutcome {
            state: next,
            delta_lambda: 0.0,
            plastic_work: 0.0,
            branch_work: [0.0; MAX_BRANCHES],
            plastic_cosine: 0.0,
            branch_cosine: [0.0; MAX_BRANCHES],
        });
    }

    let guess = (1.0 / trial_norm) * trial_eff;
    // bracket the multiplier; the linearised stiffness gives the first probe
    let stiffness: f64 = params.c.iter().sum::<f64>() + 2.0 / 3.0 * f64::max(0.0, hardening_slope(params));
    let mut lo = 0.0;
    let mut g_lo = f_trial;
    let mut hi = (f_trial / stiffness.max(1.0)).max(1e-300);
    let mut g_hi;
    let mut dir_hi = guess;
    let mut found = false;
    for _ in 0..400 {
        let (g, dir) = ctx.residual(hi, dir_hi)?;
        g_hi = g;
        dir_hi = dir;
        if g_hi <= 0.0 {
            found = true;
            break;
        }
        lo = hi;
        g_lo = g_hi;
        hi *= 4.0;
        if !hi.is_finite() {
            break;
        }
    }
    if !found {
        return Err(LocalFailure::NoBracket);
    }
    let (_, dir_probe) = ctx.residual(hi, guess)?;
    let g_hi = ctx.residual(hi, dir_probe)?.0;
    let mut failure = None;
    let dl = brent(
        |x| match ctx.residual(x, guess) {
            Ok((g, _)) => g,
            Err(e) => {
                failure = Some(e);
                f64::NAN
            }
        },
        lo,
        hi,
        g_lo,
        g_hi,
        0.0,
        400,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let dl = dl.ok_or(LocalFailure::NotConverged)?;

    let (dir, branches) = ctx.direction(dl, guess)?;
    let eff = ctx.effective(&branches);
    let (s, s_eps) = ctx.hardening(dl, &dir);
    let radius = ctx.radius(s, s_eps);
    if radius <= 0.0 {
        return Err(LocalFailure::YieldRadiusCollapsed(radius));
    }
    let d_eps_i = dl * dir;
    let mut next = state.clone();
    next.eps_i += d_eps_i;
    let mut branch_work = [0.0; MAX_BRANCHES];
    let mut branch_cosine = [0.0; MAX_BRANCHES];
    for l in 0..n {
        next.eps_li[l] += branches.d_eps_li[l];
        (branch_work[l], branch_cosine[l]) = match &params.kinematic {
            Kinematic::ArmstrongFrederick { kappa } => {
                // rate ϰ λ X at the end of the step; work ∫ ϰ |X|² dλ by Simpson's rule
                let x1 = branches.x[l];
                let half = ctx.branch_update(0.5 * dl, &dir).x[l];
                let sq = |x: &SymTensor| double_contract(x, x);
                let work = kappa[l] * dl / 6.0 * (sq(&x_n[l]) + 4.0 * sq(&half) + sq(&x1));
                (work, cosine(kappa[l] * sq(&x1), &x1, &(kappa[l] * x1)))
            }
            _ => {
                let work = double_contract(&branches.x[l], &branches.d_eps_li[l]);
                (work, cosine(work, &branches.x[l], &branches.d_eps_li[l]))
            }
        };
    }
    next.s = s;
    next.s_eps = s_eps;
    let plastic_work = double_contract(&eff, &d_eps_i);
    Ok(StepOutcome {
        state: next,
        delta_lambda: dl,
        plastic_work,
        branch_work,
        plastic_cosine: cosine(plastic_work, &eff, &d_eps_i),
        branch_cosine,
    })
}

fn hardening_slope(params: &MaterialParams) -> f64 {
    match params.hardening {
        crate::constitutive::HardeningRule::NewRule { gamma, .. } => gamma,
        crate::constitutive::HardeningRule::Voce { p1, .. } => p1,
    }
}
