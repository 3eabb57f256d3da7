use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::SparsePoly;
use crate::json::{parse_rational, rational_to_string};
use crate::Result;

/// Canonical wire form: `{"vars": [...], "terms": [{"e": [...], "c": "num/den"}]}`,
/// terms sorted lexicographically by exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub e: Vec<u32>,
    pub c: String,
}

impl From<&SparsePoly> for PolyJson {
    fn from(p: &SparsePoly) -> Self {
        PolyJson {
            vars: p.vars.clone(),
            terms: p
                .terms
                .iter()
                .map(|(e, c)| TermJson { e: e.clone(), c: rational_to_string(c) })
                .collect(),
        }
    }
}

impl PolyJson {
    pub fn to_poly(&self) -> Result<SparsePoly> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.e.clone(), parse_rational(&t.c)?)))
            .collect::<Result<Vec<(Vec<u32>, BigRational)>>>()?;
        SparsePoly::from_terms(&self.vars, terms)
    }
}

impl Serialize for SparsePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparsePoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        PolyJson::deserialize(d)?
            .to_poly()
            .map_err(serde::de::Error::custom)
    }
}
