//! Series interchange format:
//! `{ "space": [...], "terms": [{ "alpha": [[i, e], ...], "c": number }], "cap": int|null }`
//! with terms in graded-lex order. Exact rationals are written as `"p/q"`.

use serde::{Deserialize, Serialize};

use super::{MonomialSeries, MultiIndex, VariableSpace};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub alpha: Vec<[u32; 2]>,
    pub c: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub space: Vec<String>,
    pub terms: Vec<TermJson>,
    #[serde(default)]
    pub cap: Option<u32>,
}

impl<C: Scalar> From<&MonomialSeries<C>> for SeriesJson {
    fn from(s: &MonomialSeries<C>) -> Self {
        SeriesJson {
            space: s.space().names().to_vec(),
            terms: s
                .sorted_terms()
                .into_iter()
                .map(|(a, c)| TermJson {
                    alpha: a.entries().iter().map(|&(v, e)| [v, e]).collect(),
                    c: c.to_json(),
                })
                .collect(),
            cap: s.cap(),
        }
    }
}

impl SeriesJson {
    pub fn to_series<C: Scalar>(&self) -> Result<MonomialSeries<C>> {
        let space = VariableSpace::new(self.space.iter().cloned());
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, t) in self.terms.iter().enumerate() {
            let alpha = MultiIndex::new(t.alpha.iter().map(|&[v, e]| (v, e)).collect())
                .map_err(|e| Error::parse(format!("terms[{k}].alpha"), e.to_string()))?;
            if alpha.max_var().is_some_and(|v| v as usize >= space.len()) {
                return Err(Error::parse(
                    format!("terms[{k}].alpha"),
                    format!("variable index outside space of {} names", space.len()),
                ));
            }
            let c = C::from_json(&t.c)
                .ok_or_else(|| Error::parse(format!("terms[{k}].c"), format!("not a coefficient: {}", t.c)))?;
            if let Some(cap) = self.cap {
                if alpha.degree() > cap {
                    return Err(Error::parse(format!("terms[{k}]"), "degree exceeds cap"));
                }
            }
            terms.push((alpha, c));
        }
        Ok(MonomialSeries::from_terms(space, terms, self.cap))
    }
}

pub fn series_to_json<C: Scalar>(s: &MonomialSeries<C>) -> serde_json::Value {
    serde_json::to_value(SeriesJson::from(s)).expect("series JSON is always serialisable")
}

pub fn series_from_json<C: Scalar>(v: &serde_json::Value) -> Result<MonomialSeries<C>> {
    let sj: SeriesJson = serde_json::from_value(v.clone())?;
    sj.to_series()
}
