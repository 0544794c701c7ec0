use nalgebra::{DMatrix, DVector};

use super::IdentifyError;

/// Symmetric positive-definite weighting matrix `W` of the error functional.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum Weighting {
    #[default]
    Identity,
    Diagonal(Vec<f64>),
    /// Full matrix with its upper Cholesky factor `U` (`W = Uᵀ U`).
    Full { matrix: DMatrix<f64>, upper: DMatrix<f64> },
}

impl Weighting {
    pub fn diagonal(w: Vec<f64>) -> Result<Self, IdentifyError> {
        if w.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(IdentifyError::InvalidProblem("diagonal weights must be positive".into()));
        }
        Ok(Weighting::Diagonal(w))
    }

    pub fn full(matrix: DMatrix<f64>) -> Result<Self, IdentifyError> {
        if !matrix.is_square() || (&matrix - matrix.transpose()).amax() > 1e-12 * matrix.amax() {
            return Err(IdentifyError::InvalidProblem("weighting matrix must be square and symmetric".into()));
        }
        let chol = matrix
            .clone()
            .cholesky()
            .ok_or_else(|| IdentifyError::InvalidProblem("weighting matrix is not positive definite".into()))?;
        let upper = chol.l().transpose();
        Ok(Weighting::Full { matrix, upper })
    }

    /// Checks the dimension against the data length.
    pub fn check_len(&self, n: usize) -> Result<(), IdentifyError> {
        let len = match self {
            Weighting::Identity => return Ok(()),
            Weighting::Diagonal(w) => w.len(),
            Weighting::Full { matrix, .. } => matrix.nrows(),
        };
        if len != n {
            return Err(IdentifyError::InvalidProblem(format!("weighting has size {len}, data has {n} values")));
        }
        Ok(())
    }

    /// `rᵀ W r`.
    pub fn quadratic_form(&self, r: &[f64]) -> f64 {
        match self {
            Weighting::Identity => r.iter().map(|v| v * v).sum(),
            Weighting::Diagonal(w) => r.iter().zip(w).map(|(v, w)| w * v * v).sum(),
            Weighting::Full { matrix, .. } => {
                let v = DVector::from_column_slice(r);
                v.dot(&(matrix * &v))
            }
        }
    }

    /// `W r`.
    pub fn apply(&self, r: &[f64]) -> DVector<f64> {
        match self {
            Weighting::Identity => DVector::from_column_slice(r),
            Weighting::Diagonal(w) => DVector::from_iterator(r.len(), r.iter().zip(w).map(|(v, w)| v * w)),
            Weighting::Full { matrix, .. } => matrix * DVector::from_column_slice(r),
        }
    }

    /// `U r` with `UᵀU = W`, so that `||U r||² = rᵀ W r`.
    pub fn whiten(&self, r: &[f64]) -> DVector<f64> {
        match self {
            Weighting::Identity => DVector::from_column_slice(r),
            Weighting::Diagonal(w) => DVector::from_iterator(r.len(), r.iter().zip(w).map(|(v, w)| v * w.sqrt())),
            Weighting::Full { upper, .. } => upper * DVector::from_column_slice(r),
        }
    }

    /// `U J` column by column.
    pub fn whiten_matrix(&self, j: &DMatrix<f64>) -> DMatrix<f64> {
        match self {
            Weighting::Identity => j.clone(),
            Weighting::Diagonal(w) => {
                let mut out = j.clone();
                for (i, wi) in w.iter().enumerate() {
                    out.row_mut(i).scale_mut(wi.sqrt());
                }
                out
            }
            Weighting::Full { upper, .. } => upper * j,
        }
    }
}
