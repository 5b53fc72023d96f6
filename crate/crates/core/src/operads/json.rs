//! JSON forms of arity presheaves and operad candidates.
//!
//! Presheaf:
//! ```json
//! {"variant": "sigma", "truncation": 2, "support": "finite",
//!  "sets": {"1": ["x"], "2": ["m", "n"]},
//!  "actions": {"1 0": {"m": "n", "n": "m"}}}
//! ```
//! An action key is the table of a shape; its codomain is the domain
//! unless written after an arrow, as in `"0 0 -> 1"` or `"-> 2"`. The
//! given actions generate the rest by composition. Missing arities hold
//! no elements.
//!
//! Candidate:
//! ```json
//! {"carrier": {…}, "unit": "x",
//!  "multiplication": [{"op": [2, "m"], "args": [[1, "x"], [1, "x"]], "value": "m"}]}
//! ```
//! An entry may carry a `"shape"` key in the action syntax; without it the
//! shape is the identity of the summed arity.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ArityPresheaf, OperadCandidate, SubstRaw, Support};
use crate::diagrams::{FiniteFunction, Variant};
use crate::fincat::json::{parse, read};
use crate::{Error, Result};

fn default_support() -> Support {
    Support::Finite
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArityFile {
    pub variant: Variant,
    pub truncation: usize,
    #[serde(default = "default_support")]
    pub support: Support,
    #[serde(default)]
    pub sets: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub actions: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MultEntry {
    pub op: (usize, String),
    #[serde(default)]
    pub args: Vec<(usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<String>,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CandidateFile {
    pub carrier: ArityFile,
    pub unit: String,
    #[serde(default)]
    pub multiplication: Vec<MultEntry>,
}

/// Parses `"1 0"`, `"0 0 -> 1"` or `"-> 2"`.
pub fn parse_shape(text: &str) -> Result<FiniteFunction> {
    let bad = || Error::InvalidInput(format!("cannot read shape {text:?}"));
    let (table, cod) = match text.split_once("->") {
        Some((t, c)) => (t, Some(c.trim().parse::<usize>().map_err(|_| bad())?)),
        None => (text, None),
    };
    let table: Vec<usize> = table.split_whitespace().map(|d| d.parse().map_err(|_| bad())).collect::<Result<_>>()?;
    let cod = cod.unwrap_or(table.len());
    FiniteFunction::new(table.len(), cod, table)
}

pub fn shape_to_string(f: &FiniteFunction) -> String {
    let t = f.table.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
    if f.dom == f.cod {
        t
    } else if t.is_empty() {
        format!("-> {}", f.cod)
    } else {
        format!("{t} -> {}", f.cod)
    }
}

impl ArityFile {
    pub fn build(&self) -> Result<ArityPresheaf> {
        let n = self.truncation;
        let mut labels: Vec<Vec<String>> = vec![Vec::new(); n + 1];
        for (k, set) in &self.sets {
            let k: usize = k.parse().map_err(|_| Error::InvalidInput(format!("arity {k:?} is not a number")))?;
            if k > n {
                return Err(Error::InvalidInput(format!("arity {k} lies above the truncation {n}")));
            }
            labels[k] = set.clone();
        }
        let index = |k: usize, l: &str| {
            labels[k]
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::InvalidInput(format!("no element {l:?} in arity {k}")))
        };
        let mut generators = Vec::new();
        for (key, map) in &self.actions {
            let f = parse_shape(key)?;
            if f.dom > n || f.cod > n {
                return Err(Error::InvalidInput(format!("shape {key:?} leaves the supplied arities")));
            }
            let table = labels[f.dom]
                .iter()
                .map(|x| match map.get(x) {
                    Some(y) => index(f.cod, y),
                    None => Err(Error::InvalidInput(format!("shape {key:?} is not defined at {x:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            generators.push((f, table));
        }
        let sizes = labels.iter().map(Vec::len).collect();
        Ok(ArityPresheaf::from_generators(self.variant, n, self.support, sizes, generators)?.with_labels(labels))
    }

    /// Every non-identity action, written out.
    pub fn from_presheaf(x: &ArityPresheaf) -> Self {
        let sets = (0..=x.truncation())
            .filter(|&k| x.size(k) > 0)
            .map(|k| (k.to_string(), (0..x.size(k)).map(|e| x.label(k, e)).collect()))
            .collect();
        let actions = x
            .actions()
            .iter()
            .filter(|(_, t)| !t.is_empty())
            .map(|(f, t)| {
                let map = t.iter().enumerate().map(|(e, &v)| (x.label(f.dom, e), x.label(f.cod, v))).collect();
                (shape_to_string(f), map)
            })
            .collect();
        ArityFile { variant: x.variant(), truncation: x.truncation(), support: x.support(), sets, actions }
    }
}

impl CandidateFile {
    pub fn build(&self) -> Result<OperadCandidate> {
        let carrier = self.carrier.build()?;
        let look = |k: usize, l: &str| {
            if k > carrier.truncation() {
                return Err(Error::InvalidInput(format!("arity {k} lies above the truncation")));
            }
            carrier.index_of_label(k, l).ok_or_else(|| Error::InvalidInput(format!("no element {l:?} in arity {k}")))
        };
        let unit = look(1, &self.unit)?;
        let mut mult = BTreeMap::new();
        for e in &self.multiplication {
            let y = look(e.op.0, &e.op.1)?;
            if e.args.len() != e.op.0 {
                return Err(Error::InvalidInput(format!(
                    "{} takes {} arguments, not {}",
                    e.op.1,
                    e.op.0,
                    e.args.len()
                )));
            }
            let args = e.args.iter().map(|(k, l)| look(*k, l).map(|x| (*k, x))).collect::<Result<Vec<_>>>()?;
            let total = args.iter().map(|a| a.0).sum();
            let shape = match &e.shape {
                Some(s) => parse_shape(s)?,
                None => FiniteFunction::identity(total),
            };
            if shape.dom != total {
                return Err(Error::InvalidInput(format!(
                    "shape {} does not start at arity {total}",
                    shape_to_string(&shape)
                )));
            }
            if !carrier.variant().function_class().contains(&shape) {
                return Err(Error::OutsideClass(shape_to_string(&shape)));
            }
            let value = look(shape.cod, &e.value)?;
            let raw = SubstRaw { m: e.op.0, y, args, shape };
            if let Some(old) = mult.insert(raw, value) {
                if old != value {
                    return Err(Error::InvalidInput(format!("two values for the entry of {}", e.op.1)));
                }
            }
        }
        Ok(OperadCandidate { carrier, unit, mult })
    }

    pub fn from_candidate(c: &OperadCandidate) -> Self {
        let x = &c.carrier;
        let multiplication = c
            .mult
            .iter()
            .map(|(r, &v)| MultEntry {
                op: (r.m, x.label(r.m, r.y)),
                args: r.args.iter().map(|&(k, e)| (k, x.label(k, e))).collect(),
                shape: if r.shape.is_identity() { None } else { Some(shape_to_string(&r.shape)) },
                value: x.label(r.shape.cod, v),
            })
            .collect();
        CandidateFile { carrier: ArityFile::from_presheaf(x), unit: x.label(1, c.unit), multiplication }
    }
}

pub fn arity_from_str(text: &str) -> Result<ArityPresheaf> {
    parse::<ArityFile>(text)?.build()
}

pub fn load_arity(path: &Path) -> Result<ArityPresheaf> {
    arity_from_str(&read(path)?)
}

pub fn candidate_from_str(text: &str) -> Result<OperadCandidate> {
    parse::<CandidateFile>(text)?.build()
}

pub fn load_candidate(path: &Path) -> Result<OperadCandidate> {
    candidate_from_str(&read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operads::{associative_operad, monoid_check};

    #[test]
    fn shapes_round_trip() {
        for s in ["1 0", "0 0 1 -> 2", "-> 2", ""] {
            assert_eq!(shape_to_string(&parse_shape(s).unwrap()), s);
        }
        assert!(parse_shape("0 2").is_err());
    }

    #[test]
    fn presheaf_from_generators() {
        let text = r#"{"variant": "sigma", "truncation": 2,
            "sets": {"2": ["m", "n"]}, "actions": {"1 0": {"m": "n", "n": "m"}}}"#;
        let x = arity_from_str(text).unwrap();
        assert_eq!(x.sizes(), &[0, 0, 2]);
        assert_eq!(x.act(&parse_shape("1 0").unwrap(), 0), 1);
        let back = ArityFile::from_presheaf(&x).build().unwrap();
        assert_eq!(back.sizes(), x.sizes());
    }

    #[test]
    fn candidates_round_trip() {
        let c = associative_operad(Variant::SIGMA, 3).unwrap();
        let text = serde_json::to_string(&CandidateFile::from_candidate(&c)).unwrap();
        let d = candidate_from_str(&text).unwrap();
        assert_eq!(d.mult, c.mult);
        assert!(monoid_check(&d, 3).unwrap().passed());
    }
}
