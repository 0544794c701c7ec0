//! Scalar root finding and QR least squares shared across modules.

use nalgebra::{DMatrix, DVector};

/// Brent's method on a bracket `[a, b]` with `f(a)` and `f(b)` of opposite
/// sign. Iterates until the bracket shrinks to `xtol` (plus a few ulps of the
/// iterate) or `f` hits zero. Returns `None` when the bracket is invalid or the
/// iteration budget runs out.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, xtol: f64, max_iter: usize) -> Option<f64> {
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return None;
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Some(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return None;
        }
    }
    None
}

/// Rank test threshold on the diagonal of R relative to its largest entry.
pub const RANK_TOL: f64 = 1e-12;

/// `J` has (numerically) dependent columns.
#[derive(Debug, Clone, PartialEq)]
pub struct RankDeficiency {
    /// First column whose R diagonal falls below the threshold.
    pub column: usize,
    /// `|R_ii| / max_j |R_jj|`.
    pub ratio: f64,
}

/// Thin QR factorisation `J = Q R` of a tall matrix, for repeated
/// least-squares solves `min ||J x − b||`.
#[derive(Debug, Clone)]
pub struct LeastSquaresQr {
    q: DMatrix<f64>,
    r: DMatrix<f64>,
}

impl LeastSquaresQr {
    pub fn new(j: &DMatrix<f64>) -> Result<Self, RankDeficiency> {
        let (rows, cols) = j.shape();
        if rows < cols || cols == 0 {
            return Err(RankDeficiency { column: rows.min(cols), ratio: 0.0 });
        }
        let qr = j.clone().qr();
        let r = qr.r();
        let q = qr.q();
        let largest = (0..cols).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
        for i in 0..cols {
            let ratio = if largest > 0.0 { r[(i, i)].abs() / largest } else { 0.0 };
            if !(ratio > RANK_TOL) {
                return Err(RankDeficiency { column: i, ratio });
            }
        }
        Ok(LeastSquaresQr { q, r })
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn r(&self) -> &DMatrix<f64> {
        &self.r
    }

    /// Least-squares solution `R⁻¹ Qᵀ b`.
    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let qtb = self.q.tr_mul(b);
        self.r.solve_upper_triangular(&qtb).expect("R checked non-singular")
    }

    /// The gain matrix `G = R⁻¹ Qᵀ`, so that `solve(b) = G b`.
    pub fn gain(&self) -> DMatrix<f64> {
        let qt = self.q.transpose();
        self.r.solve_upper_triangular(&qt).expect("R checked non-singular")
    }

    /// `|R_ii| / max_j |R_jj|`, smallest first column order preserved.
    pub fn diagonal_ratios(&self) -> Vec<f64> {
        let n = self.r.ncols();
        let largest = (0..n).map(|i| self.r[(i, i)].abs()).fold(0.0, f64::max);
        (0..n).map(|i| self.r[(i, i)].abs() / largest).collect()
    }
}
