use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::numerics::LeastSquaresQr;

use super::{jacobian_fd, IdentifyError, JacobianOptions, LeastSquaresModel, Transform};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RefineOptions {
    /// Stop when the scaled gradient satisfies `||g||_∞ ≤ grad_tol · Exp·W·Exp`.
    pub grad_tol: f64,
    pub max_iterations: usize,
    pub initial_damping: f64,
    pub damping_factor: f64,
    /// Damping above which the iteration is declared stalled.
    pub max_damping: f64,
    /// Longest step, max norm in optimiser coordinates. Linear slots are
    /// measured relative to the largest of their current, starting and
    /// typical magnitude.
    pub max_step: f64,
    /// Typical magnitude of each parameter, used to scale linear slots.
    pub typical: Option<Vec<f64>>,
    /// Add the second-order (geodesic) correction to each damped step.
    pub geodesic_acceleration: bool,
    /// Relative probe length of the second directional derivative.
    pub acceleration_probe: f64,
    /// Largest admissible `2||a||/||v||` of acceleration to velocity.
    pub acceleration_ratio: f64,
    pub jacobian: JacobianOptions,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            grad_tol: 1e-8,
            max_iterations: 60,
            initial_damping: 1e-3,
            damping_factor: 10.0,
            max_damping: 1e12,
            max_step: 0.5,
            typical: None,
            geodesic_acceleration: true,
            acceleration_probe: 0.1,
            acceleration_ratio: 0.75,
            jacobian: JacobianOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RefineOutcome {
    pub p: Vec<f64>,
    pub phi: f64,
    /// `∂Mod/∂p` at `p`.
    pub jacobian: DMatrix<f64>,
    /// `Mod(p)`.
    pub model: Vec<f64>,
    /// `||g||_∞` of the scaled gradient at `p`.
    pub gradient_inf: f64,
    /// The tolerance it was compared against.
    pub gradient_tol: f64,
    pub iterations: usize,
    pub converged: bool,
    pub stop: RefineStop,
}

/// Why the iteration ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RefineStop {
    /// The scaled gradient met the tolerance.
    Gradient,
    /// No damped step lowered Φ. Φ is only piecewise smooth (a cycle whose
    /// peak just reaches the yield surface adds a kink), so this can happen
    /// at a minimum whose finite-difference gradient stays above tolerance.
    NoDescent,
    MaxIterations,
}

/// Gradient of Φ with respect to relative parameter changes,
/// `g_i = −2 (Jᵀ W r)_i · max(|p_i|, floor)`.
pub fn scaled_gradient<M: LeastSquaresModel + ?Sized>(
    model: &M,
    j: &DMatrix<f64>,
    residual: &[f64],
    p: &[f64],
    floor: f64,
) -> DVector<f64> {
    let wr = model.weighting().apply(residual);
    let mut g = j.tr_mul(&wr) * -2.0;
    for (i, gi) in g.iter_mut().enumerate() {
        *gi *= p[i].abs().max(floor);
    }
    g
}

/// One undamped Gauss-Newton increment: the least-squares solution of
/// `U J δ ≈ U r` by QR, with `W = UᵀU`.
pub fn gauss_newton_step<M: LeastSquaresModel + ?Sized>(
    model: &M,
    j: &DMatrix<f64>,
    residual: &[f64],
) -> Result<DVector<f64>, IdentifyError> {
    let w = model.weighting();
    let qr = LeastSquaresQr::new(&w.whiten_matrix(j))
        .map_err(|e| IdentifyError::RankDeficient { column: e.column, ratio: e.ratio })?;
    Ok(qr.solve(&w.whiten(residual)))
}

/// Levenberg-Marquardt iterations in optimiser coordinates with Marquardt's
/// diagonal scaling. The Jacobian is rebuilt by central differences at every
/// accepted point, and the returned one belongs to the returned `p`.
pub fn gauss_newton_refine<M: LeastSquaresModel + ?Sized>(
    model: &M,
    p0: &[f64],
    opts: &RefineOptions,
) -> Result<RefineOutcome, IdentifyError> {
    let n = model.n_params();
    let transforms = model.transforms();
    let tol = opts.grad_tol * model.data_scale();
    let w = model.weighting();

    let mut p = p0.to_vec();
    let mut pred = model.predict(&p)?;
    let mut residual: Vec<f64> = model.observed().iter().zip(&pred).map(|(e, m)| e - m).collect();
    let mut phi = w.quadratic_form(&residual);
    if !phi.is_finite() {
        return Err(IdentifyError::NonFiniteStart);
    }
    let mut damping = opts.initial_damping;
    let mut iterations = 0;
    loop {
        let j = jacobian_fd(model, &p, &opts.jacobian)?;
        let g = scaled_gradient(model, &j, &residual, &p, opts.jacobian.floor);
        let g_inf = g.amax();
        macro_rules! finish {
            ($stop:expr) => {
                RefineOutcome {
                    p,
                    phi,
                    jacobian: j,
                    model: pred,
                    gradient_inf: g_inf,
                    gradient_tol: tol,
                    iterations,
                    converged: $stop == RefineStop::Gradient,
                    stop: $stop,
                }
            };
        }
        if g_inf <= tol {
            return Ok(finish!(RefineStop::Gradient));
        }
        if iterations >= opts.max_iterations {
            return Ok(finish!(RefineStop::MaxIterations));
        }
        iterations += 1;

        // chain rule to optimiser coordinates
        let mut jq = w.whiten_matrix(&j);
        for (i, t) in transforms.iter().enumerate() {
            jq.column_mut(i).scale_mut(t.derivative(p[i]));
        }
        let rw = w.whiten(&residual);
        let scale: Vec<f64> = (0..n)
            .map(|i| {
                let typ = opts.typical.as_ref().and_then(|t| t.get(i)).map_or(0.0, |t| t.abs());
                p[i].abs().max(p0[i].abs()).max(typ).max(opts.jacobian.floor)
            })
            .collect();
        let col_norms: Vec<f64> = jq.column_iter().map(|c| c.norm()).collect();
        let norm_floor = 1e-15 * col_norms.iter().copied().fold(f64::MIN_POSITIVE, f64::max);
        let q: Vec<f64> = transforms.iter().zip(&p).map(|(t, p)| t.forward(*p)).collect();
        let rows = jq.nrows();

        let mut accepted = false;
        while damping <= opts.max_damping {
            // damped steps are least-squares solutions of [Jq; √μ D] δ ≈ [b; 0]
            let mut aug = DMatrix::zeros(rows + n, n);
            aug.rows_mut(0, rows).copy_from(&jq);
            for i in 0..n {
                aug[(rows + i, i)] = damping.sqrt() * col_norms[i].max(norm_floor);
            }
            let qr = aug.qr();
            let solve = |top: &DVector<f64>| {
                let mut rhs = DVector::zeros(rows + n);
                rhs.rows_mut(0, rows).copy_from(top);
                qr.r().solve_upper_triangular(&qr.q().tr_mul(&rhs)).filter(|d| d.iter().all(|x| x.is_finite()))
            };
            let Some(mut dq) = solve(&rw) else {
                damping *= opts.damping_factor;
                continue;
            };
            if opts.geodesic_acceleration {
                if let Some(acc) = geodesic_correction(model, &transforms, &q, &pred, &jq, &dq, opts.acceleration_probe, &solve) {
                    // a correction large against the step means the quadratic model is not trusted
                    let scaled_norm = |v: &DVector<f64>| v.iter().zip(&col_norms).map(|(v, c)| (v * c).powi(2)).sum::<f64>().sqrt();
                    if 2.0 * scaled_norm(&acc) <= opts.acceleration_ratio * scaled_norm(&dq) {
                        dq += acc * 0.5;
                    }
                }
            }
            let reach = dq
                .iter()
                .zip(&transforms)
                .zip(&scale)
                .map(|((d, t), s)| match t {
                    Transform::Log => d.abs(),
                    Transform::Linear => d.abs() / s,
                })
                .fold(0.0, f64::max);
            if reach > opts.max_step {
                dq *= opts.max_step / reach;
            }
            let p_new: Vec<f64> = transforms.iter().zip(&q).zip(dq.iter()).map(|((t, q), d)| t.inverse(q + d)).collect();
            let trial = model.predict(&p_new).map(|m| {
                let r: Vec<f64> = model.observed().iter().zip(&m).map(|(e, m)| e - m).collect();
                (w.quadratic_form(&r), m, r)
            });
            match trial {
                Ok((phi_new, m, r)) if phi_new < phi => {
                    p = p_new;
                    pred = m;
                    residual = r;
                    phi = phi_new;
                    damping = (damping / opts.damping_factor).max(1e-15);
                    accepted = true;
                    break;
                }
                _ => damping *= opts.damping_factor,
            }
        }
        if !accepted {
            // no descent left at this Jacobian's accuracy
            return Ok(finish!(RefineStop::NoDescent));
        }
    }
}

/// Acceleration `a` of the geodesic step: the damped least-squares solution
/// of `Jq a ≈ −M_vv`, with the second directional derivative `M_vv` of the
/// whitened model along `v` taken by a finite difference of length `h`.
#[allow(clippy::too_many_arguments)]
fn geodesic_correction<M: LeastSquaresModel + ?Sized>(
    model: &M,
    transforms: &[Transform],
    q: &[f64],
    pred: &[f64],
    jq: &DMatrix<f64>,
    v: &DVector<f64>,
    h: f64,
    solve: &dyn Fn(&DVector<f64>) -> Option<DVector<f64>>,
) -> Option<DVector<f64>> {
    let p_h: Vec<f64> = transforms.iter().zip(q).zip(v.iter()).map(|((t, q), d)| t.inverse(q + h * d)).collect();
    let m_h = model.predict(&p_h).ok()?;
    let diff: Vec<f64> = m_h.iter().zip(pred).map(|(a, b)| a - b).collect();
    let mvv = (model.weighting().whiten(&diff) / h - jq * v) * (2.0 / h);
    solve(&-mvv)
}
