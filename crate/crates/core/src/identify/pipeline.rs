use serde::{Deserialize, Serialize};

use super::{gauss_newton_refine, nested_identify, IdentifyError, LeastSquaresModel, NestedOptions, NestedOutcome, RefineOptions, RefineOutcome};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IdentifyOptions {
    pub nested: NestedOptions,
    pub refine: RefineOptions,
}

#[derive(Clone, Debug)]
pub struct IdentifyOutcome {
    pub nested: NestedOutcome,
    pub refined: RefineOutcome,
}

/// Nested Nelder-Mead from `p0` followed by Levenberg-Marquardt refinement of
/// its result. Unless set, the refinement's typical magnitudes are `|p0|`.
pub fn identify<M: LeastSquaresModel + ?Sized>(
    model: &M,
    p0: &[f64],
    opts: &IdentifyOptions,
) -> Result<IdentifyOutcome, IdentifyError> {
    let nested = nested_identify(model, p0, &opts.nested)?;
    let mut refine = opts.refine.clone();
    if refine.typical.is_none() {
        refine.typical = Some(p0.iter().map(|p| p.abs()).collect());
    }
    let refined = gauss_newton_refine(model, &nested.p, &refine)?;
    Ok(IdentifyOutcome { nested, refined })
}
