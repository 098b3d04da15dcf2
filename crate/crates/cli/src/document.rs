//! JSON form of a finitely supported rational function.

use std::collections::BTreeSet;

use hlvar::{format_rational, parse_rational, BigRational, GridFunction, LatticePoint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// `{"dim": 2, "support": [{"point": [0, 1], "value": "3/4"}, ...]}`.
///
/// Values are strings so that no rational passes through a float.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFunctionDocument {
    pub dim: usize,
    pub support: Vec<SupportEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportEntry {
    pub point: Vec<i64>,
    pub value: String,
}

impl GridFunctionDocument {
    /// Canonical form: points in lexicographic order, values as reduced `p/q`.
    pub fn from_function(f: &GridFunction<BigRational>) -> Self {
        GridFunctionDocument {
            dim: f.dim(),
            support: f
                .iter()
                .map(|(p, v)| SupportEntry { point: p.coords().to_vec(), value: format_rational(v) })
                .collect(),
        }
    }

    /// Validates the document: `dim ≥ 1`, every point of length `dim`, points
    /// distinct, values nonzero rationals.
    pub fn to_function(&self) -> Result<GridFunction<BigRational>, String> {
        if self.dim == 0 {
            return Err("dim must be at least 1".into());
        }
        let mut seen = BTreeSet::new();
        let mut entries = Vec::with_capacity(self.support.len());
        for (i, e) in self.support.iter().enumerate() {
            if e.point.len() != self.dim {
                return Err(format!("support[{i}]: point has {} coordinates, dim is {}", e.point.len(), self.dim));
            }
            let v = parse_rational(&e.value).ok_or_else(|| format!("support[{i}]: cannot parse value {:?}", e.value))?;
            if v.is_zero() {
                return Err(format!("support[{i}]: value must be nonzero"));
            }
            let p = LatticePoint(e.point.clone());
            if !seen.insert(p.clone()) {
                return Err(format!("support[{i}]: point {p} listed twice"));
            }
            entries.push((p, v));
        }
        GridFunction::from_entries(self.dim, entries).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("document serializes")
    }
}
