use nalgebra::DMatrix;

use crate::identify::Weighting;
use crate::numerics::LeastSquaresQr;

use super::SensitivityError;

/// Linearised refit around a zero-gradient optimum `p*`: the minimiser of
/// `||U(Exp + Noise − Mod(p*) − J(p − p*))||²` with `W = UᵀU` is
/// `p* + G·U·Noise` once `Jᵀ W (Exp − Mod(p*)) = 0`, where `G = (UJ)⁺` comes
/// from one QR factorisation.
#[derive(Clone, Debug)]
pub struct FastRefit {
    p_star: Vec<f64>,
    weighting: Weighting,
    /// Column scale `D`; the QR is taken of `U J D`.
    scale: Vec<f64>,
    /// `R⁻¹Qᵀ` of `U J D`.
    gain: DMatrix<f64>,
    qr: LeastSquaresQr,
}

impl FastRefit {
    /// Columns are scaled by `max(|p*_i|, floor)` before the factorisation so
    /// the rank test does not depend on parameter units.
    pub fn new(j: &DMatrix<f64>, weighting: &Weighting, p_star: &[f64], floor: f64) -> Result<Self, SensitivityError> {
        if j.ncols() != p_star.len() {
            return Err(SensitivityError::Shape(format!("J has {} columns for {} parameters", j.ncols(), p_star.len())));
        }
        weighting.check_len(j.nrows()).map_err(|e| SensitivityError::Shape(e.to_string()))?;
        let scale: Vec<f64> = p_star.iter().map(|p| p.abs().max(floor)).collect();
        let mut a = weighting.whiten_matrix(j);
        for (i, s) in scale.iter().enumerate() {
            a.column_mut(i).scale_mut(*s);
        }
        let qr = LeastSquaresQr::new(&a).map_err(|e| SensitivityError::RankDeficient { column: e.column, ratio: e.ratio })?;
        let gain = qr.gain();
        Ok(FastRefit { p_star: p_star.to_vec(), weighting: weighting.clone(), scale, gain, qr })
    }

    pub fn p_star(&self) -> &[f64] {
        &self.p_star
    }

    /// `|R_ii| / max_j |R_jj|` of the scaled, whitened Jacobian.
    pub fn diagonal_ratios(&self) -> Vec<f64> {
        self.qr.diagonal_ratios()
    }

    /// Parameter shift `p^(j) − p*` caused by `noise`.
    pub fn shift(&self, noise: &[f64]) -> Result<Vec<f64>, SensitivityError> {
        if noise.len() != self.gain.ncols() {
            return Err(SensitivityError::Shape(format!("noise has {} values, data has {}", noise.len(), self.gain.ncols())));
        }
        let d = &self.gain * self.weighting.whiten(noise);
        Ok(d.iter().zip(&self.scale).map(|(d, s)| d * s).collect())
    }

    /// Refitted parameters `p^(j)` for one noise realisation.
    pub fn refit(&self, noise: &[f64]) -> Result<Vec<f64>, SensitivityError> {
        Ok(self.shift(noise)?.iter().zip(&self.p_star).map(|(d, p)| p + d).collect())
    }
}

/// QR-path refit without the zero-gradient simplification: the linearised
/// minimiser for `Exp + Noise` given `Mod(p*)`, i.e. `p* + G·U(Exp − Mod(p*) + Noise)`.
pub fn fast_refit(
    refit: &FastRefit,
    model_at_star: &[f64],
    exp: &[f64],
    noise: &[f64],
) -> Result<Vec<f64>, SensitivityError> {
    if model_at_star.len() != exp.len() || exp.len() != noise.len() {
        return Err(SensitivityError::Shape("Mod(p*), Exp and noise differ in length".into()));
    }
    let a: Vec<f64> = exp.iter().zip(model_at_star).zip(noise).map(|((e, m), n)| e - m + n).collect();
    refit.refit(&a)
}

/// The same linearised minimiser from the weighted normal equations
/// `JᵀWJ δ = JᵀW(Exp − Mod(p*) + Noise)`, solved by Cholesky.
pub fn fast_refit_normal_equations(
    j: &DMatrix<f64>,
    weighting: &Weighting,
    p_star: &[f64],
    model_at_star: &[f64],
    exp: &[f64],
    noise: &[f64],
) -> Result<Vec<f64>, SensitivityError> {
    let a: Vec<f64> = exp.iter().zip(model_at_star).zip(noise).map(|((e, m), n)| e - m + n).collect();
    let uj = weighting.whiten_matrix(j);
    let lhs = uj.tr_mul(&uj);
    let rhs = uj.tr_mul(&weighting.whiten(&a));
    let chol = lhs.cholesky().ok_or(SensitivityError::Singular)?;
    let d = chol.solve(&rhs);
    Ok(d.iter().zip(p_star).map(|(d, p)| p + d).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_j() -> DMatrix<f64> {
        DMatrix::from_fn(30, 4, |i, j| ((i as f64 + 1.0) * (j as f64 + 0.7)).sin() + if i == j { 2.0 } else { 0.0 })
    }

    #[test]
    fn zero_noise_is_a_fixed_point() {
        let j = sample_j();
        let p = [1.0, -2.0, 0.5, 3.0];
        let f = FastRefit::new(&j, &Weighting::Identity, &p, 1e-6).unwrap();
        assert_eq!(f.refit(&[0.0; 30]).unwrap(), p.to_vec());
    }

    #[test]
    fn qr_and_normal_equations_agree() {
        let j = sample_j();
        let p = [1.0, -2.0, 0.5, 3.0];
        let noise: Vec<f64> = (0..30).map(|i| (i as f64 * 0.37).cos() * 1e-3).collect();
        let exp = vec![0.0; 30];
        let w = Weighting::diagonal((0..30).map(|i| 1.0 + (i % 3) as f64).collect()).unwrap();
        let f = FastRefit::new(&j, &w, &p, 1e-6).unwrap();
        let a = fast_refit(&f, &exp, &exp, &noise).unwrap();
        let b = fast_refit_normal_equations(&j, &w, &p, &exp, &exp, &noise).unwrap();
        for (a, b) in a.iter().zip(&b) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{a} {b}");
        }
    }

    #[test]
    fn dependent_columns_are_reported() {
        let mut j = sample_j();
        let c = j.column(1) * 2.0;
        j.set_column(3, &c);
        match FastRefit::new(&j, &Weighting::Identity, &[1.0; 4], 1e-6) {
            Err(SensitivityError::RankDeficient { column, .. }) => assert_eq!(column, 3),
            other => panic!("{other:?}"),
        }
    }
}
