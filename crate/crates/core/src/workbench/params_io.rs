use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::constitutive::{ElasticThermalParams, Kinematic, MaterialParams, MicroYield, ModelFamily, Viscosity};
use crate::identify::ParameterLayout;

use super::config::{HardeningChoice, ModelSpec};
use super::{read_json, write_json, WorkbenchError};

/// On-disk form of a parameter set: identified constants under keys that
/// carry their unit, plus the fixed constants of the model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterFile {
    pub model: ModelFamily,
    pub n_branches: usize,
    pub hardening: HardeningChoice,
    /// Identified constants in layout order.
    pub parameters: Map<String, Value>,
    #[serde(default = "ElasticThermalParams::vt6")]
    pub elastic_thermal: ElasticThermalParams,
    #[serde(default = "rate_independent")]
    pub viscosity: Viscosity,
    /// One-based index of the unbounded Ohno-Wang I branch (default: last).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unbounded_branch: Option<usize>,
}

fn rate_independent() -> Viscosity {
    Viscosity::RateIndependent
}

impl ParameterFile {
    pub fn from_params(mp: &MaterialParams) -> Result<Self, WorkbenchError> {
        let layout = ParameterLayout::for_model(mp)?;
        let values = layout.extract(mp)?;
        let parameters = layout.names().into_iter().zip(values).map(|(k, v)| (k, Value::from(v))).collect();
        let unbounded_branch = match &mp.kinematic {
            Kinematic::OhnoWangI { r } => r.iter().position(|r| *r == MicroYield::Unbounded).map(|i| i + 1),
            _ => None,
        };
        let kind = mp.kind();
        Ok(ParameterFile {
            model: kind.family,
            n_branches: kind.n_branches,
            hardening: match mp.hardening.label() {
                "voce" => HardeningChoice::Voce,
                _ => HardeningChoice::New,
            },
            parameters,
            elastic_thermal: mp.elastic_thermal,
            viscosity: mp.viscosity,
            unbounded_branch,
        })
    }

    pub fn spec(&self) -> ModelSpec {
        ModelSpec { family: self.model, n_branches: self.n_branches, hardening: self.hardening }
    }

    /// Rebuilds the parameter set; every identified constant of the model
    /// must be present and no other key is accepted.
    pub fn to_params(&self) -> Result<MaterialParams, WorkbenchError> {
        let bad = |m: String| Err(WorkbenchError::Config(m));
        let mut template = self.spec().preset()?;
        template.elastic_thermal = self.elastic_thermal;
        template.viscosity = self.viscosity;
        if let Kinematic::OhnoWangI { r } = &mut template.kinematic {
            let n = r.len();
            let u = self.unbounded_branch.unwrap_or(n);
            if !(1..=n).contains(&u) {
                return bad(format!("unbounded_branch must lie in 1..={n}, got {u}"));
            }
            *r = (0..n).map(|l| if l + 1 == u { MicroYield::Unbounded } else { MicroYield::Finite(1.0) }).collect();
        } else if self.unbounded_branch.is_some() {
            return bad("unbounded_branch only applies to OW1 models".into());
        }
        let layout = ParameterLayout::for_model(&template)?;
        let names = layout.names();
        if let Some(extra) = self.parameters.keys().find(|k| !names.contains(k)) {
            return bad(format!("`{extra}` is not an identified constant of a {} model", self.spec().label()));
        }
        let values = names
            .iter()
            .map(|k| match self.parameters.get(k) {
                Some(v) => v.as_f64().ok_or_else(|| WorkbenchError::Config(format!("`{k}` must be a number"))),
                None => Err(WorkbenchError::Config(format!("missing parameter `{k}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(layout.to_material_params(&values)?)
    }
}

pub fn write_params(path: &Path, mp: &MaterialParams) -> Result<(), WorkbenchError> {
    write_json(path, &ParameterFile::from_params(mp)?)
}

pub fn read_params(path: &Path) -> Result<MaterialParams, WorkbenchError> {
    let file: ParameterFile = read_json(path)?;
    file.to_params().map_err(|e| match e {
        WorkbenchError::Config(m) => WorkbenchError::Format { path: path.to_path_buf(), message: m },
        other => other,
    })
}
