use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{nelder_mead, IdentifyError, LeastSquaresModel, NelderMeadOptions, Transform};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NestedOptions {
    /// Search over the conservative group at fixed dissipative constants.
    pub inner: NelderMeadOptions,
    /// Search over the dissipative group.
    pub outer: NelderMeadOptions,
    /// Initial simplex edge as a relative change of each natural parameter.
    pub relative_step: f64,
    /// Search box around `p0`: positive slots stay within `[p0/f, p0·f]`,
    /// linear ones within `p0 ± (f − 1)|p0|`. Infinite disables it.
    pub box_factor: f64,
}

impl Default for NestedOptions {
    fn default() -> Self {
        NestedOptions {
            inner: NelderMeadOptions { xtol: 1e-7, max_evals: 600, parallel: true, ..Default::default() },
            outer: NelderMeadOptions { xtol: 1e-6, max_evals: 200, ..Default::default() },
            relative_step: 0.05,
            box_factor: 2.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NestedOutcome {
    pub p: Vec<f64>,
    pub phi: f64,
    /// Objective evaluations, inner and outer.
    pub evals: usize,
}

fn simplex_steps(transforms: &[Transform], q: &[f64], rel: f64) -> Vec<f64> {
    transforms
        .iter()
        .zip(q)
        .map(|(t, q)| match t {
            Transform::Log => (1.0 + rel).ln(),
            Transform::Linear if *q != 0.0 => rel * q,
            Transform::Linear => 0.00025,
        })
        .collect()
}

/// Two-level minimisation: for each trial of the dissipative constants the
/// conservative ones are optimised, and the outer search sees the inner
/// optimum. Both levels run Nelder-Mead in optimiser coordinates; failed
/// simulations count as +∞.
pub fn nested_identify<M: LeastSquaresModel + ?Sized>(
    model: &M,
    p0: &[f64],
    opts: &NestedOptions,
) -> Result<NestedOutcome, IdentifyError> {
    let n = model.n_params();
    if p0.len() != n {
        return Err(IdentifyError::Layout(format!("expected {n} values, got {}", p0.len())));
    }
    let transforms = model.transforms();
    let mask = model.conservative_mask();
    let q0: Vec<f64> = transforms.iter().zip(p0).map(|(t, p)| t.forward(*p)).collect();
    let inner_idx: Vec<usize> = (0..n).filter(|i| mask[*i]).collect();
    let outer_idx: Vec<usize> = (0..n).filter(|i| !mask[*i]).collect();

    let phi0 = model.objective(p0).map_err(|_| IdentifyError::NonFiniteStart)?;
    if !phi0.is_finite() {
        return Err(IdentifyError::NonFiniteStart);
    }

    let assemble = |qc: &[f64], qk: &[f64]| -> Vec<f64> {
        let mut q = q0.clone();
        for (k, i) in inner_idx.iter().enumerate() {
            q[*i] = qc[k];
        }
        for (k, i) in outer_idx.iter().enumerate() {
            q[*i] = qk[k];
        }
        transforms.iter().zip(&q).map(|(t, q)| t.inverse(*q)).collect()
    };
    let half_width: Vec<f64> = transforms
        .iter()
        .zip(p0)
        .map(|(t, p)| match t {
            Transform::Log => opts.box_factor.ln(),
            Transform::Linear if *p != 0.0 => (opts.box_factor - 1.0) * p.abs(),
            Transform::Linear => f64::INFINITY,
        })
        .collect();
    let inside = |p: &[f64]| {
        transforms.iter().zip(p).zip(&q0).zip(&half_width).all(|(((t, p), q0), w)| (t.forward(*p) - q0).abs() <= *w)
    };
    let phi = |p: &[f64]| if inside(p) { model.objective(p).unwrap_or(f64::INFINITY) } else { f64::INFINITY };

    let inner_t: Vec<Transform> = inner_idx.iter().map(|i| transforms[*i]).collect();
    let outer_t: Vec<Transform> = outer_idx.iter().map(|i| transforms[*i]).collect();
    let qc0: Vec<f64> = inner_idx.iter().map(|i| q0[*i]).collect();
    let qk0: Vec<f64> = outer_idx.iter().map(|i| q0[*i]).collect();

    // best (Φ, p) seen, and the inner optimum used to warm-start the next inner run
    let best = Mutex::new((phi0, p0.to_vec(), qc0.clone()));
    let evals = Mutex::new(1usize);

    let inner_solve = |qk: &[f64]| -> f64 {
        let start = best.lock().unwrap().2.clone();
        let mut inner = opts.inner.clone();
        inner.steps = Some(simplex_steps(&inner_t, &start, opts.relative_step));
        let r = nelder_mead(|qc: &[f64]| phi(&assemble(qc, qk)), &start, &inner);
        *evals.lock().unwrap() += r.evals;
        let mut b = best.lock().unwrap();
        if r.fx < b.0 {
            *b = (r.fx, assemble(&r.x, qk), r.x.clone());
        }
        r.fx
    };

    if outer_idx.is_empty() {
        inner_solve(&[]);
    } else {
        let mut outer = opts.outer.clone();
        outer.parallel = false;
        outer.steps = Some(simplex_steps(&outer_t, &qk0, opts.relative_step));
        let r = nelder_mead(
            |qk: &[f64]| if inner_idx.is_empty() { phi(&assemble(&[], qk)) } else { inner_solve(qk) },
            &qk0,
            &outer,
        );
        *evals.lock().unwrap() += r.evals;
        if inner_idx.is_empty() {
            let mut b = best.lock().unwrap();
            if r.fx < b.0 {
                *b = (r.fx, assemble(&[], &r.x), Vec::new());
            }
        }
    }
    let (phi_best, p_best, _) = best.into_inner().unwrap();
    Ok(NestedOutcome { p: p_best, phi: phi_best, evals: evals.into_inner().unwrap() })
}
