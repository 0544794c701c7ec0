use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{IdentifyError, LeastSquaresModel, Transform};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct JacobianOptions {
    /// Central-difference step relative to the parameter value.
    pub rel_step: f64,
    /// Lower bound of the reference magnitude for linear-coordinate slots.
    pub floor: f64,
}

impl Default for JacobianOptions {
    fn default() -> Self {
        JacobianOptions { rel_step: 1e-5, floor: 1e-6 }
    }
}

/// Step used for parameter `i`: positive slots are perturbed relative to
/// their value so the probes stay admissible.
pub(crate) fn fd_step(t: Transform, p: f64, opts: &JacobianOptions) -> f64 {
    match t {
        Transform::Log => opts.rel_step * p.abs(),
        Transform::Linear => opts.rel_step * p.abs().max(opts.floor),
    }
}

/// `∂Mod/∂p` by central differences, one column per parameter in layout
/// order. Columns are computed in parallel.
pub fn jacobian_fd<M: LeastSquaresModel + ?Sized>(
    model: &M,
    p: &[f64],
    opts: &JacobianOptions,
) -> Result<DMatrix<f64>, IdentifyError> {
    let n = model.n_params();
    let rows = model.observed().len();
    let transforms = model.transforms();
    let columns: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let h = fd_step(transforms[i], p[i], opts);
            let mut plus = p.to_vec();
            let mut minus = p.to_vec();
            plus[i] += h;
            minus[i] -= h;
            let fp = model.predict(&plus)?;
            let fm = model.predict(&minus)?;
            Ok(fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect())
        })
        .collect::<Result<_, IdentifyError>>()?;
    let mut j = DMatrix::zeros(rows, n);
    for (i, col) in columns.iter().enumerate() {
        if col.len() != rows {
            return Err(IdentifyError::InvalidProblem("model output length changed".into()));
        }
        j.column_mut(i).copy_from_slice(col);
    }
    Ok(j)
}
