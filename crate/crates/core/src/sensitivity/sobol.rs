use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sobol_table::{MAX_DIMENSIONS, SEEDS};
use super::SensitivityError;

const BITS: usize = 32;

/// Uniforms are clamped to `[UNIFORM_CLAMP, 1 − UNIFORM_CLAMP]` before the
/// normal transform.
pub const UNIFORM_CLAMP: f64 = 1e-12;

/// Unscrambled Sobol' sequence in standard (binary) order.
#[derive(Clone, Debug)]
pub struct Sobol {
    /// `v[d][k]`: direction number of bit `k` in dimension `d`, 32-bit fixed point.
    v: Vec<[u32; BITS]>,
}

impl Sobol {
    pub fn new(dimensions: usize) -> Result<Self, SensitivityError> {
        if dimensions == 0 || dimensions > MAX_DIMENSIONS {
            return Err(SensitivityError::InvalidConfig(format!(
                "Sobol' dimensions must be in 1..={MAX_DIMENSIONS}, got {dimensions}"
            )));
        }
        let v = SEEDS[..dimensions]
            .iter()
            .enumerate()
            .map(|(d, seed)| {
                let mut m = [0u32; BITS];
                if d == 0 {
                    m = [1; BITS];
                } else {
                    let s = (32 - seed.poly.leading_zeros() - 1) as usize;
                    m[..s].copy_from_slice(seed.init);
                    for k in s..BITS {
                        let mut x = m[k - s] ^ (m[k - s] << s);
                        for j in 1..s {
                            if (seed.poly >> (s - j)) & 1 == 1 {
                                x ^= m[k - j] << j;
                            }
                        }
                        m[k] = x;
                    }
                }
                let mut out = [0u32; BITS];
                for k in 0..BITS {
                    out[k] = m[k] << (BITS - 1 - k);
                }
                out
            })
            .collect();
        Ok(Sobol { v })
    }

    pub fn dimensions(&self) -> usize {
        self.v.len()
    }

    /// Point `index` of the sequence (index 0 is the origin).
    pub fn point(&self, index: u32) -> Vec<f64> {
        self.v
            .iter()
            .map(|dir| {
                let mut x = 0u32;
                let mut i = index;
                let mut k = 0;
                while i != 0 {
                    if i & 1 == 1 {
                        x ^= dir[k];
                    }
                    i >>= 1;
                    k += 1;
                }
                x as f64 / 4_294_967_296.0
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SobolConfig {
    /// Normal variates per draw.
    pub dimensions: usize,
    /// Leading points of the sequence that are discarded.
    pub skip: u32,
    /// Points discarded between two consecutive draws.
    pub leap: u32,
    pub n_draws: usize,
    /// Fill odd rows with the negated previous row.
    pub antithetic: bool,
}

impl Default for SobolConfig {
    fn default() -> Self {
        SobolConfig { dimensions: 40, skip: 1000, leap: 300, n_draws: 10_000, antithetic: false }
    }
}

impl SobolConfig {
    pub fn validate(&self) -> Result<(), SensitivityError> {
        let bad = |m: String| Err(SensitivityError::InvalidConfig(m));
        if self.dimensions == 0 || self.n_draws == 0 {
            return bad("Sobol' dimensions and draw count must be positive".into());
        }
        let uniforms = self.dimensions + self.dimensions % 2;
        if uniforms > MAX_DIMENSIONS {
            return bad(format!("{} normal variates need {uniforms} Sobol' dimensions, at most {MAX_DIMENSIONS} are supported", self.dimensions));
        }
        if self.antithetic && self.n_draws % 2 == 1 {
            return bad("antithetic sampling needs an even number of draws".into());
        }
        let last = self.skip as u64 + (self.base_points() as u64 - 1) * (self.leap as u64 + 1);
        if last >= 1u64 << BITS {
            return bad("skip and leap run past the end of the 32-bit sequence".into());
        }
        Ok(())
    }

    fn base_points(&self) -> usize {
        if self.antithetic {
            self.n_draws / 2
        } else {
            self.n_draws
        }
    }

    /// Sequence index of base point `j`.
    pub fn index(&self, j: usize) -> u32 {
        self.skip + j as u32 * (self.leap + 1)
    }
}

/// Box-Muller transform of the uniform pair `(u1, u2)`.
pub fn box_muller(u1: f64, u2: f64) -> (f64, f64) {
    let u1 = u1.clamp(UNIFORM_CLAMP, 1.0 - UNIFORM_CLAMP);
    let u2 = u2.clamp(UNIFORM_CLAMP, 1.0 - UNIFORM_CLAMP);
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (2.0 * PI * u2).sin_cos();
    (r * c, r * s)
}

/// `n_draws × dimensions` standard normal variates: row `j` pairs Sobol'
/// coordinates `(2i, 2i+1)` of point `skip + j·(leap + 1)` through Box-Muller.
pub fn sobol_normals(cfg: &SobolConfig) -> Result<DMatrix<f64>, SensitivityError> {
    cfg.validate()?;
    let uniforms = cfg.dimensions + cfg.dimensions % 2;
    let sobol = Sobol::new(uniforms)?;
    let base: Vec<Vec<f64>> = (0..cfg.base_points())
        .into_par_iter()
        .map(|j| {
            let u = sobol.point(cfg.index(j));
            let mut z = Vec::with_capacity(uniforms);
            for pair in u.chunks_exact(2) {
                let (a, b) = box_muller(pair[0], pair[1]);
                z.push(a);
                z.push(b);
            }
            z.truncate(cfg.dimensions);
            z
        })
        .collect();
    Ok(DMatrix::from_fn(cfg.n_draws, cfg.dimensions, |r, c| {
        if cfg.antithetic {
            let z = base[r / 2][c];
            if r % 2 == 0 {
                z
            } else {
                -z
            }
        } else {
            base[r][c]
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_points_match_the_reference_sequence() {
        // standard-order points of the unscrambled sequence in 3 dimensions
        let s = Sobol::new(3).unwrap();
        let expected = [
            [0.0, 0.0, 0.0],
            [0.5, 0.5, 0.5],
            [0.25, 0.75, 0.75],
            [0.75, 0.25, 0.25],
            [0.125, 0.625, 0.375],
            [0.625, 0.125, 0.875],
        ];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(s.point(i as u32), e.to_vec(), "point {i}");
        }
    }

    #[test]
    fn deep_points_match_scipy() {
        // scipy.stats.qmc.Sobol(d=40, scramble=False), reordered from Gray code
        let s = Sobol::new(40).unwrap();
        let cases: [(u32, [f64; 6]); 4] = [
            (1000, [0.0927734375, 0.1611328125, 0.4501953125, 0.4501953125, 0.7236328125, 0.4423828125]),
            (1301, [0.65869140625, 0.53173828125, 0.55810546875, 0.94091796875, 0.34814453125, 0.41259765625]),
            (1602, [0.25927734375, 0.04052734375, 0.23681640625, 0.33837890625, 0.52099609375, 0.27294921875]),
            (12345, [0.60955810546875, 0.43853759765625, 0.89434814453125, 0.78472900390625, 0.89434814453125, 0.53546142578125]),
        ];
        for (i, e) in cases {
            let x = s.point(i);
            assert_eq!([x[0], x[1], x[2], x[19], x[38], x[39]], e, "point {i}");
        }
    }

    #[test]
    fn first_rows_of_default_normals() {
        // Box-Muller of the points above, computed with numpy
        let z = sobol_normals(&SobolConfig { n_draws: 2, ..Default::default() }).unwrap();
        let expected = [
            [1.1553108568919346, 1.849444957803678, 1.0632098891982509, 0.28486338227061514],
            [-0.8956742494507746, -0.1810190563837879, 0.6299772999738409, 0.7582623407594915],
        ];
        for (r, e) in expected.iter().enumerate() {
            let got = [z[(r, 0)], z[(r, 1)], z[(r, 2)], z[(r, 39)]];
            for (g, e) in got.iter().zip(e) {
                assert!((g - e).abs() < 1e-14, "row {r}: {got:?}");
            }
        }
    }

    #[test]
    fn rejects_too_many_dimensions() {
        assert!(Sobol::new(MAX_DIMENSIONS + 1).is_err());
        let cfg = SobolConfig { dimensions: MAX_DIMENSIONS, ..Default::default() };
        assert!(sobol_normals(&cfg).is_ok() || cfg.validate().is_err());
        let cfg = SobolConfig { dimensions: MAX_DIMENSIONS + 1, ..Default::default() };
        assert!(sobol_normals(&cfg).is_err());
    }

    #[test]
    fn box_muller_clamps_zero() {
        let (a, b) = box_muller(0.0, 0.25);
        assert!(a.is_finite() && b.is_finite());
        assert!((b - (-2.0 * UNIFORM_CLAMP.ln()).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn antithetic_rows_cancel() {
        let cfg = SobolConfig { n_draws: 64, dimensions: 6, antithetic: true, ..Default::default() };
        let z = sobol_normals(&cfg).unwrap();
        for c in 0..6 {
            assert_eq!(z.column(c).iter().sum::<f64>(), 0.0);
        }
        assert!(sobol_normals(&SobolConfig { n_draws: 63, antithetic: true, ..Default::default() }).is_err());
    }
}
