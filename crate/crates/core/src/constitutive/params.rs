use serde::{Deserialize, Serialize};

use super::ConstitutiveError;

/// Elastic and thermal constants. Moduli in MPa; thermal quantities in SI.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElasticThermalParams {
    /// Bulk modulus, MPa.
    pub k: f64,
    /// Shear modulus, MPa.
    pub mu: f64,
    /// Volumetric thermal expansion coefficient, 1/K.
    pub alpha: f64,
    /// Reference temperature, K.
    pub theta0: f64,
    /// Heat capacity per unit mass, J/(kg K).
    pub c_theta0_over_rho: f64,
    /// Mass density, kg/m³.
    pub rho: f64,
    /// Heat-exchange coefficient, J/(s kg K).
    pub omega: f64,
}

impl ElasticThermalParams {
    /// VT6 elastic constants with the thermal constants used for the
    /// heating simulations. The heat capacity is a handbook value for
    /// Ti-6Al-4V.
    pub fn vt6() -> Self {
        ElasticThermalParams {
            k: 98_037.0,
            mu: 37_593.0,
            alpha: 1.59e-5,
            theta0: 293.15,
            c_theta0_over_rho: 526.0,
            rho: 4550.0,
            omega: 2.5e-2,
        }
    }

    /// Uniaxial Young's modulus `9kμ / (3k + μ)`.
    pub fn youngs_modulus(&self) -> f64 {
        9.0 * self.k * self.mu / (3.0 * self.k + self.mu)
    }

    pub fn validate(&self) -> Result<(), ConstitutiveError> {
        let checks = [
            (self.k > 0.0, "bulk modulus k must be positive"),
            (self.mu > 0.0, "shear modulus mu must be positive"),
            (self.rho > 0.0, "density rho must be positive"),
            (self.theta0 > 0.0, "reference temperature theta0 must be positive"),
            (self.omega >= 0.0, "heat-exchange coefficient omega must be non-negative"),
            (self.alpha.is_finite(), "thermal expansion alpha must be finite"),
            (self.c_theta0_over_rho.is_finite(), "heat capacity must be finite"),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(ConstitutiveError::InvalidParams(msg.into()));
            }
        }
        Ok(())
    }
}

/// Kinematic hardening family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelFamily {
    #[serde(rename = "AF")]
    ArmstrongFrederick,
    #[serde(rename = "OW1")]
    OhnoWangI,
    #[serde(rename = "OW2")]
    OhnoWangII,
}

impl ModelFamily {
    pub fn label(&self) -> &'static str {
        match self {
            ModelFamily::ArmstrongFrederick => "AF",
            ModelFamily::OhnoWangI => "OW1",
            ModelFamily::OhnoWangII => "OW2",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().replace(['-', '_'], "").as_str() {
            "AF" => Some(ModelFamily::ArmstrongFrederick),
            "OW1" | "OWI" => Some(ModelFamily::OhnoWangI),
            "OW2" | "OWII" => Some(ModelFamily::OhnoWangII),
            _ => None,
        }
    }
}

impl std::fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelKind {
    pub family: ModelFamily,
    pub n_branches: usize,
}

impl ModelKind {
    pub const MIN_BRANCHES: usize = 2;
    pub const MAX_BRANCHES: usize = 4;

    pub fn new(family: ModelFamily, n_branches: usize) -> Result<Self, ConstitutiveError> {
        if !(Self::MIN_BRANCHES..=Self::MAX_BRANCHES).contains(&n_branches) {
            return Err(ConstitutiveError::InvalidParams(format!(
                "n_branches must be between 2 and 4, got {n_branches}"
            )));
        }
        Ok(ModelKind { family, n_branches })
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", self.family, self.n_branches)
    }
}

/// Isotropic hardening law.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum HardeningRule {
    /// `R = γ s − β s_ε`. Both constants in MPa.
    NewRule { gamma: f64, beta: f64 },
    /// `R = p1/p2 (1 − exp(−p2 s))`; p1 in MPa, p2 dimensionless.
    Voce { p1: f64, p2: f64 },
}

impl HardeningRule {
    pub fn label(&self) -> &'static str {
        match self {
            HardeningRule::NewRule { .. } => "new",
            HardeningRule::Voce { .. } => "voce",
        }
    }
}

/// Perzyna viscosity or its rate-independent limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Viscosity {
    RateIndependent,
    Perzyna { eta: f64, m_perzyna: f64 },
}

/// Micro-yield radius of an Ohno-Wang I branch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum MicroYield {
    Finite(f64),
    /// The branch never yields; it is a linear (Prager) spring.
    Unbounded,
}

impl MicroYield {
    pub fn radius(&self) -> Option<f64> {
        match self {
            MicroYield::Finite(r) => Some(*r),
            MicroYield::Unbounded => None,
        }
    }
}

/// Branch-specific dissipative constants of the three families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Kinematic {
    /// Saturation constants ϰ_l, 1/MPa.
    ArmstrongFrederick { kappa: Vec<f64> },
    /// Micro-yield stresses r_l, MPa; exactly one branch is unbounded.
    OhnoWangI { r: Vec<MicroYield> },
    /// Micro-yield stresses r_l, MPa, and the global exponent m.
    OhnoWangII { r: Vec<f64>, m: f64 },
}

impl Kinematic {
    pub fn family(&self) -> ModelFamily {
        match self {
            Kinematic::ArmstrongFrederick { .. } => ModelFamily::ArmstrongFrederick,
            Kinematic::OhnoWangI { .. } => ModelFamily::OhnoWangI,
            Kinematic::OhnoWangII { .. } => ModelFamily::OhnoWangII,
        }
    }

    fn len(&self) -> usize {
        match self {
            Kinematic::ArmstrongFrederick { kappa } => kappa.len(),
            Kinematic::OhnoWangI { r } => r.len(),
            Kinematic::OhnoWangII { r, .. } => r.len(),
        }
    }
}

/// Complete parameter set of one model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub elastic_thermal: ElasticThermalParams,
    pub hardening: HardeningRule,
    /// Initial uniaxial yield stress K, MPa.
    pub yield_stress: f64,
    pub viscosity: Viscosity,
    /// Branch stiffnesses c_l, MPa.
    pub c: Vec<f64>,
    pub kinematic: Kinematic,
}

impl MaterialParams {
    pub fn kind(&self) -> ModelKind {
        ModelKind { family: self.kinematic.family(), n_branches: self.c.len() }
    }

    pub fn n_branches(&self) -> usize {
        self.c.len()
    }

    pub fn validate(&self) -> Result<(), ConstitutiveError> {
        self.elastic_thermal.validate()?;
        let bad = |msg: String| Err(ConstitutiveError::InvalidParams(msg));
        let n = self.c.len();
        ModelKind::new(self.kinematic.family(), n)?;
        if self.kinematic.len() != n {
            return bad(format!(
                "{} branch constants given for {n} stiffnesses",
                self.kinematic.len()
            ));
        }
        if !(self.yield_stress > 0.0 && self.yield_stress.is_finite()) {
            return bad(format!("yield stress K must be positive, got {}", self.yield_stress));
        }
        if let Some((l, c)) = self.c.iter().enumerate().find(|(_, c)| !(**c > 0.0 && c.is_finite())) {
            return bad(format!("c{} must be positive, got {c}", l + 1));
        }
        match &self.hardening {
            HardeningRule::NewRule { gamma, beta } => {
                if !(gamma.is_finite() && beta.is_finite()) {
                    return bad("gamma and beta must be finite".into());
                }
            }
            HardeningRule::Voce { p1, p2 } => {
                if !(p1.is_finite() && *p2 > 0.0 && p2.is_finite()) {
                    return bad(format!("Voce rule needs finite p1 and p2 > 0, got p2 = {p2}"));
                }
            }
        }
        if let Viscosity::Perzyna { eta, m_perzyna } = self.viscosity {
            if !(eta > 0.0 && m_perzyna > 0.0) {
                return bad(format!("Perzyna law needs eta > 0 and m > 0, got {eta}, {m_perzyna}"));
            }
        }
        match &self.kinematic {
            Kinematic::ArmstrongFrederick { kappa } => {
                if let Some((l, k)) = kappa.iter().enumerate().find(|(_, k)| !(**k >= 0.0 && k.is_finite())) {
                    return bad(format!("kappa{} must be non-negative, got {k}", l + 1));
                }
            }
            Kinematic::OhnoWangI { r } => {
                let unbounded = r.iter().filter(|x| matches!(x, MicroYield::Unbounded)).count();
                if unbounded != 1 {
                    return bad(format!(
                        "OW-I needs exactly one unbounded branch, found {unbounded}"
                    ));
                }
                for (l, ry) in r.iter().enumerate() {
                    if let MicroYield::Finite(v) = ry {
                        if !(*v > 0.0 && v.is_finite()) {
                            return bad(format!("r{} must be positive, got {v}", l + 1));
                        }
                    }
                }
            }
            Kinematic::OhnoWangII { r, m } => {
                if let Some((l, v)) = r.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
                    return bad(format!("r{} must be positive, got {v}", l + 1));
                }
                if !(*m > 0.0 && m.is_finite()) {
                    return bad(format!("exponent m must be positive, got {m}"));
                }
            }
        }
        Ok(())
    }

    /// AF constants identified for VT6 with `n_branches` Maxwell branches.
    pub fn vt6_af(n_branches: usize) -> Result<Self, ConstitutiveError> {
        let (gamma, beta, c, kappa, k): (f64, f64, &[f64], &[f64], f64) = match n_branches {
            2 => (8094.2, 3.7978, &[12005.0, 143832.0], &[0.0360, 0.0906], 862.86),
            3 => (5736.0, 3.5277, &[7777.4, 18789.0, 109793.0], &[0.0352, 0.0527, 0.0866], 847.26),
            4 => (
                4176.2,
                4.0121,
                &[4294.6, 8232.5, 21724.0, 117736.0],
                &[0.0227, 0.0366, 0.0646, 0.0797],
                846.73,
            ),
            n => return Err(ModelKind::new(ModelFamily::ArmstrongFrederick, n).unwrap_err()),
        };
        Ok(MaterialParams {
            elastic_thermal: ElasticThermalParams::vt6(),
            hardening: HardeningRule::NewRule { gamma, beta },
            yield_stress: k,
            viscosity: Viscosity::RateIndependent,
            c: c.to_vec(),
            kinematic: Kinematic::ArmstrongFrederick { kappa: kappa.to_vec() },
        })
    }

    /// OW-I constants identified for VT6; the last branch is unbounded.
    pub fn vt6_ow1(n_branches: usize) -> Result<Self, ConstitutiveError> {
        let (gamma, beta, c, r, k): (f64, f64, &[f64], &[f64], f64) = match n_branches {
            2 => (4527.7, 4.0919, &[7329.5, 4714.3], &[30.702], 884.69),
            3 => (2109.3, 3.7940, &[10004.0, 17306.0, 7962.7], &[22.206, 31.518], 852.41),
            4 => (
                6475.8,
                3.8239,
                &[14915.0, 19164.0, 9673.5, 3765.9],
                &[7.6188, 17.099, 29.030],
                856.30,
            ),
            n => return Err(ModelKind::new(ModelFamily::OhnoWangI, n).unwrap_err()),
        };
        let mut radii: Vec<MicroYield> = r.iter().map(|v| MicroYield::Finite(*v)).collect();
        radii.push(MicroYield::Unbounded);
        Ok(MaterialParams {
            elastic_thermal: ElasticThermalParams::vt6(),
            hardening: HardeningRule::NewRule { gamma, beta },
            yield_stress: k,
            viscosity: Viscosity::RateIndependent,
            c: c.to_vec(),
            kinematic: Kinematic::OhnoWangI { r: radii },
        })
    }

    /// OW-II constants identified for VT6.
    pub fn vt6_ow2(n_branches: usize) -> Result<Self, ConstitutiveError> {
        let (gamma, beta, c, r, k, m): (f64, f64, &[f64], &[f64], f64, f64) = match n_branches {
            2 => (8957.3, 3.6190, &[214914.0, 18441.0], &[101.26, 39.032], 757.30, 2.9817),
            3 => (
                8785.4,
                3.6194,
                &[498547.0, 10857.0, 70184.0],
                &[99.053, 27.750, 58.154],
                713.53,
                3.0173,
            ),
            4 => (
                8805.0,
                3.6195,
                &[140688.0, 11377.0, 443284.0, 74932.0],
                &[18.853, 28.665, 86.949, 59.896],
                704.02,
                3.0490,
            ),
            n => return Err(ModelKind::new(ModelFamily::OhnoWangII, n).unwrap_err()),
        };
        Ok(MaterialParams {
            elastic_thermal: ElasticThermalParams::vt6(),
            hardening: HardeningRule::NewRule { gamma, beta },
            yield_stress: k,
            viscosity: Viscosity::RateIndependent,
            c: c.to_vec(),
            kinematic: Kinematic::OhnoWangII { r: r.to_vec(), m },
        })
    }

    pub fn vt6(kind: ModelKind) -> Result<Self, ConstitutiveError> {
        match kind.family {
            ModelFamily::ArmstrongFrederick => Self::vt6_af(kind.n_branches),
            ModelFamily::OhnoWangI => Self::vt6_ow1(kind.n_branches),
            ModelFamily::OhnoWangII => Self::vt6_ow2(kind.n_branches),
        }
    }
}
