use serde::{Deserialize, Serialize};

use super::linear::LinearFirstOrderProblem;
use super::problem::{CauchyProblem, Centering};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::SeriesJson;

/// Problem file. `f` may be omitted when `linear` is given, in which case
/// the order-one right-hand side is built from `a` and `b`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemJson {
    pub m: u32,
    pub x_vars: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<SeriesJson>,
    pub phi: Vec<SeriesJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<LinearJson>,
    #[serde(default)]
    pub centering: Centering,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinearJson {
    pub a: Vec<SeriesJson>,
    pub b: SeriesJson,
    #[serde(default)]
    pub time_dependent: bool,
}

#[derive(Clone, Debug)]
pub struct LoadedProblem<C: Scalar = f64> {
    pub cauchy: CauchyProblem<C>,
    pub linear: Option<LinearFirstOrderProblem<C>>,
}

/// Parses a problem file into a general problem and, when present, its
/// linear first-order form.
pub fn load_problem<C: Scalar>(v: &serde_json::Value) -> Result<LoadedProblem<C>> {
    let pj: ProblemJson = serde_json::from_value(v.clone()).map_err(|e| Error::parse("problem", e.to_string()))?;
    let phi = pj.phi.iter().map(SeriesJson::to_series::<C>).collect::<Result<Vec<_>>>()?;
    let linear = match &pj.linear {
        Some(l) => {
            if pj.m != 1 {
                return Err(Error::parse("linear", "a linear first-order problem needs m = 1"));
            }
            if l.a.len() != pj.x_vars {
                return Err(Error::parse("linear.a", format!("expected {} coefficients", pj.x_vars)));
            }
            let a = l.a.iter().map(SeriesJson::to_series::<C>).collect::<Result<Vec<_>>>()?;
            let first = phi.first().ok_or_else(|| Error::parse("phi", "missing initial datum"))?;
            Some(LinearFirstOrderProblem::new(&a, &l.b.to_series::<C>()?, first, l.time_dependent)?)
        }
        None => None,
    };
    let cauchy = match (&pj.f, &linear) {
        (Some(f), _) => CauchyProblem::new(pj.m, pj.x_vars, &f.to_series::<C>()?, &phi, pj.centering)?,
        (None, Some(l)) => l.to_cauchy()?,
        (None, None) => return Err(Error::parse("f", "either `f` or `linear` is required")),
    };
    Ok(LoadedProblem { cauchy, linear })
}
