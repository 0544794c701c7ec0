use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constitutive::{HardeningRule, Kinematic, MaterialParams, MicroYield, ModelKind};

use super::IdentifyError;

/// One identified material constant. Branch indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slot {
    Gamma,
    Beta,
    VoceP1,
    VoceP2,
    C(usize),
    Kappa(usize),
    R(usize),
    YieldStress,
    Exponent,
}

/// Coordinate used by the optimisers for a slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transform {
    Linear,
    Log,
}

impl Transform {
    pub fn forward(self, p: f64) -> f64 {
        match self {
            Transform::Linear => p,
            Transform::Log => p.ln(),
        }
    }

    pub fn inverse(self, q: f64) -> f64 {
        match self {
            Transform::Linear => q,
            Transform::Log => q.exp(),
        }
    }

    /// `dp/dq` at `p`.
    pub fn derivative(self, p: f64) -> f64 {
        match self {
            Transform::Linear => 1.0,
            Transform::Log => p,
        }
    }
}

impl Slot {
    /// JSON key with the unit in its name, e.g. `c1_MPa`.
    pub fn key(&self) -> String {
        match *self {
            Slot::Gamma => "gamma_MPa".into(),
            Slot::Beta => "beta_MPa".into(),
            Slot::VoceP1 => "p1_MPa".into(),
            Slot::VoceP2 => "p2".into(),
            Slot::C(l) => format!("c{}_MPa", l + 1),
            Slot::Kappa(l) => format!("kappa{}_per_MPa", l + 1),
            Slot::R(l) => format!("r{}_MPa", l + 1),
            Slot::YieldStress => "K_MPa".into(),
            Slot::Exponent => "m".into(),
        }
    }

    pub fn from_key(key: &str) -> Option<Slot> {
        let fixed = match key {
            "gamma_MPa" => Some(Slot::Gamma),
            "beta_MPa" => Some(Slot::Beta),
            "p1_MPa" => Some(Slot::VoceP1),
            "p2" => Some(Slot::VoceP2),
            "K_MPa" => Some(Slot::YieldStress),
            "m" => Some(Slot::Exponent),
            _ => None,
        };
        if fixed.is_some() {
            return fixed;
        }
        let branch = |prefix: &str, suffix: &str| -> Option<usize> {
            let n: usize = key.strip_prefix(prefix)?.strip_suffix(suffix)?.parse().ok()?;
            n.checked_sub(1)
        };
        branch("c", "_MPa")
            .map(Slot::C)
            .or_else(|| branch("kappa", "_per_MPa").map(Slot::Kappa))
            .or_else(|| branch("r", "_MPa").map(Slot::R))
    }

    pub fn transform(&self) -> Transform {
        match self {
            Slot::Gamma | Slot::Beta | Slot::VoceP1 => Transform::Linear,
            _ => Transform::Log,
        }
    }

    /// Member of the conservative group p_c (isotropic hardening and the
    /// branch stiffnesses); the rest form p_K.
    pub fn is_conservative(&self) -> bool {
        matches!(self, Slot::Gamma | Slot::Beta | Slot::VoceP1 | Slot::VoceP2 | Slot::C(_))
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Binds the entries of a parameter vector to fields of a template
/// [`MaterialParams`]; everything not listed (elastic constants, viscosity,
/// the unbounded OW-I branch) stays fixed at the template value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterLayout {
    pub slots: Vec<Slot>,
    pub template: MaterialParams,
}

impl ParameterLayout {
    /// Standard layout for the model family and hardening rule of `template`:
    /// hardening constants, c₁..c_N, then the dissipative constants.
    pub fn for_model(template: &MaterialParams) -> Result<Self, IdentifyError> {
        template.validate().map_err(|e| IdentifyError::Layout(e.to_string()))?;
        let n = template.n_branches();
        let mut slots = match template.hardening {
            HardeningRule::NewRule { .. } => vec![Slot::Gamma, Slot::Beta],
            HardeningRule::Voce { .. } => vec![Slot::VoceP1, Slot::VoceP2],
        };
        slots.extend((0..n).map(Slot::C));
        match &template.kinematic {
            Kinematic::ArmstrongFrederick { .. } => slots.extend((0..n).map(Slot::Kappa)),
            Kinematic::OhnoWangI { r } => {
                slots.extend(r.iter().enumerate().filter(|(_, r)| **r != MicroYield::Unbounded).map(|(l, _)| Slot::R(l)))
            }
            Kinematic::OhnoWangII { .. } => slots.extend((0..n).map(Slot::R)),
        }
        slots.push(Slot::YieldStress);
        if matches!(template.kinematic, Kinematic::OhnoWangII { .. }) {
            slots.push(Slot::Exponent);
        }
        Ok(ParameterLayout { slots, template: template.clone() })
    }

    pub fn kind(&self) -> ModelKind {
        self.template.kind()
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.slots.iter().map(Slot::key).collect()
    }

    pub fn index_of(&self, slot: Slot) -> Option<usize> {
        self.slots.iter().position(|s| *s == slot)
    }

    pub fn transforms(&self) -> Vec<Transform> {
        self.slots.iter().map(Slot::transform).collect()
    }

    pub fn conservative_mask(&self) -> Vec<bool> {
        self.slots.iter().map(Slot::is_conservative).collect()
    }

    fn read(slot: Slot, mp: &MaterialParams) -> Result<f64, IdentifyError> {
        let missing = || IdentifyError::Layout(format!("slot {slot} does not exist in a {} model", mp.kind()));
        let v = match (slot, &mp.hardening, &mp.kinematic) {
            (Slot::Gamma, HardeningRule::NewRule { gamma, .. }, _) => *gamma,
            (Slot::Beta, HardeningRule::NewRule { beta, .. }, _) => *beta,
            (Slot::VoceP1, HardeningRule::Voce { p1, .. }, _) => *p1,
            (Slot::VoceP2, HardeningRule::Voce { p2, .. }, _) => *p2,
            (Slot::C(l), ..) => *mp.c.get(l).ok_or_else(missing)?,
            (Slot::Kappa(l), _, Kinematic::ArmstrongFrederick { kappa }) => *kappa.get(l).ok_or_else(missing)?,
            (Slot::R(l), _, Kinematic::OhnoWangI { r }) => r.get(l).and_then(MicroYield::radius).ok_or_else(missing)?,
            (Slot::R(l), _, Kinematic::OhnoWangII { r, .. }) => *r.get(l).ok_or_else(missing)?,
            (Slot::YieldStress, ..) => mp.yield_stress,
            (Slot::Exponent, _, Kinematic::OhnoWangII { m, .. }) => *m,
            _ => return Err(missing()),
        };
        Ok(v)
    }

    fn write(slot: Slot, mp: &mut MaterialParams, v: f64) {
        match (slot, &mut mp.hardening, &mut mp.kinematic) {
            (Slot::Gamma, HardeningRule::NewRule { gamma, .. }, _) => *gamma = v,
            (Slot::Beta, HardeningRule::NewRule { beta, .. }, _) => *beta = v,
            (Slot::VoceP1, HardeningRule::Voce { p1, .. }, _) => *p1 = v,
            (Slot::VoceP2, HardeningRule::Voce { p2, .. }, _) => *p2 = v,
            (Slot::C(l), ..) => mp.c[l] = v,
            (Slot::Kappa(l), _, Kinematic::ArmstrongFrederick { kappa }) => kappa[l] = v,
            (Slot::R(l), _, Kinematic::OhnoWangI { r }) => r[l] = MicroYield::Finite(v),
            (Slot::R(l), _, Kinematic::OhnoWangII { r, .. }) => r[l] = v,
            (Slot::YieldStress, ..) => mp.yield_stress = v,
            (Slot::Exponent, _, Kinematic::OhnoWangII { m, .. }) => *m = v,
            _ => unreachable!("layout slots are checked against the template"),
        }
    }

    /// Values of the layout slots in `mp`, which must share the template's model.
    pub fn extract(&self, mp: &MaterialParams) -> Result<Vec<f64>, IdentifyError> {
        if mp.kind() != self.kind() || mp.hardening.label() != self.template.hardening.label() {
            return Err(IdentifyError::Layout(format!(
                "parameters describe a {} model with {} hardening, layout expects {} with {}",
                mp.kind(),
                mp.hardening.label(),
                self.kind(),
                self.template.hardening.label()
            )));
        }
        self.slots.iter().map(|s| Self::read(*s, mp)).collect()
    }

    /// Template with the layout slots overwritten by `values`.
    pub fn to_material_params(&self, values: &[f64]) -> Result<MaterialParams, IdentifyError> {
        if values.len() != self.len() {
            return Err(IdentifyError::Layout(format!("expected {} values, got {}", self.len(), values.len())));
        }
        let mut mp = self.template.clone();
        for (slot, v) in self.slots.iter().zip(values) {
            Self::write(*slot, &mut mp, *v);
        }
        mp.validate().map_err(|e| IdentifyError::Inadmissible { params: values.to_vec(), reason: e.to_string() })?;
        Ok(mp)
    }
}

/// Identified constants with their layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterVector {
    pub layout: ParameterLayout,
    pub values: Vec<f64>,
}

impl ParameterVector {
    /// Standard layout of `mp` filled with its values.
    pub fn from_material_params(mp: &MaterialParams) -> Result<Self, IdentifyError> {
        let layout = ParameterLayout::for_model(mp)?;
        let values = layout.extract(mp)?;
        Ok(ParameterVector { layout, values })
    }

    pub fn to_material_params(&self) -> Result<MaterialParams, IdentifyError> {
        self.layout.to_material_params(&self.values)
    }

    pub fn with_values(&self, values: Vec<f64>) -> Result<Self, IdentifyError> {
        if values.len() != self.layout.len() {
            return Err(IdentifyError::Layout(format!("expected {} values, got {}", self.layout.len(), values.len())));
        }
        Ok(ParameterVector { layout: self.layout.clone(), values })
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        let slot = Slot::from_key(key)?;
        self.layout.index_of(slot).map(|i| self.values[i])
    }

    /// Sets an identified slot; keys of fixed constants are rejected.
    pub fn set(&mut self, key: &str, value: f64) -> Result<(), IdentifyError> {
        let idx = Slot::from_key(key)
            .and_then(|s| self.layout.index_of(s))
            .ok_or_else(|| IdentifyError::FixedSlot(key.to_string()))?;
        self.values[idx] = value;
        Ok(())
    }

    /// Values in optimiser coordinates.
    pub fn to_coordinates(&self) -> Vec<f64> {
        self.layout.transforms().iter().zip(&self.values).map(|(t, v)| t.forward(*v)).collect()
    }

    pub fn from_coordinates(&self, q: &[f64]) -> Vec<f64> {
        self.layout.transforms().iter().zip(q).map(|(t, v)| t.inverse(*v)).collect()
    }
}
