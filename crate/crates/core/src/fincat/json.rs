//! JSON formats for categories and set-valued functors. All ids are
//! strings.
//!
//! Category:
//! ```json
//! {"objects": ["A", "B"],
//!  "morphisms": [{"id": "idA", "src": "A", "tgt": "A"}, {"id": "f", "src": "A", "tgt": "B"}, …],
//!  "identity": {"A": "idA", "B": "idB"},
//!  "compose": [["f", "idA", "f"], …]}
//! ```
//! Entries `[g, f, g∘f]` involving an identity may be omitted. An object
//! missing from `identity` gets a fresh morphism `id_<object>`.
//!
//! Functor:
//! ```json
//! {"category": "arrow.json", "variance": "contravariant",
//!  "sets": {"A": ["a1", "a2"], "B": ["b"]},
//!  "maps": {"f": {"b": "a1"}}}
//! ```
//! The category path is relative to the functor file. Identity maps may
//! be omitted.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FinCategory, Morphism, SetFunctor, Variance};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MorphismEntry {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CategoryFile {
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<MorphismEntry>,
    #[serde(default)]
    pub identity: BTreeMap<String, String>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FunctorFile {
    pub category: String,
    pub variance: Variance,
    #[serde(default)]
    pub sets: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

pub(crate) fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub(crate) fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
}

fn dup_check<'a>(what: &str, names: impl Iterator<Item = &'a String>) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::InvalidCategory(format!("duplicate {what} id {n}")));
        }
    }
    Ok(())
}

impl CategoryFile {
    /// Builds the category and validates it.
    pub fn build(&self) -> Result<FinCategory> {
        let c = self.build_unchecked()?;
        c.validated()
    }

    /// Builds the category without checking the axioms.
    pub fn build_unchecked(&self) -> Result<FinCategory> {
        dup_check("object", self.objects.iter())?;
        dup_check("morphism", self.morphisms.iter().map(|m| &m.id))?;
        let obj: HashMap<&str, usize> = self.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let find_obj =
            |o: &str| obj.get(o).copied().ok_or_else(|| Error::InvalidCategory(format!("unknown object {o}")));
        let mut morphisms = Vec::new();
        for m in &self.morphisms {
            morphisms.push(Morphism { name: m.id.clone(), src: find_obj(&m.src)?, tgt: find_obj(&m.tgt)? });
        }
        for o in self.identity.keys() {
            find_obj(o)?;
        }
        let mut identity = Vec::new();
        for (i, o) in self.objects.iter().enumerate() {
            match self.identity.get(o) {
                Some(id) => {
                    let m = morphisms
                        .iter()
                        .position(|m| &m.name == id)
                        .ok_or_else(|| Error::InvalidCategory(format!("unknown identity morphism {id}")))?;
                    identity.push(m);
                }
                None => {
                    identity.push(morphisms.len());
                    morphisms.push(Morphism { name: format!("id_{o}"), src: i, tgt: i });
                }
            }
        }
        let mor: HashMap<&str, usize> = morphisms.iter().enumerate().map(|(i, m)| (m.name.as_str(), i)).collect();
        let find_mor =
            |m: &str| mor.get(m).copied().ok_or_else(|| Error::InvalidCategory(format!("unknown morphism {m}")));
        let mut entries = Vec::new();
        let mut given = HashSet::new();
        for [g, f, gf] in &self.compose {
            let e = (find_mor(g)?, find_mor(f)?, find_mor(gf)?);
            given.insert((e.0, e.1));
            entries.push(e);
        }
        for (f, mf) in morphisms.iter().enumerate() {
            let (id_src, id_tgt) = (identity[mf.src], identity[mf.tgt]);
            if !given.contains(&(id_tgt, f)) {
                entries.push((id_tgt, f, f));
            }
            if !given.contains(&(f, id_src)) && id_src != f {
                entries.push((f, id_src, f));
            }
        }
        FinCategory::from_table(self.objects.clone(), morphisms, identity, entries)
    }

    pub fn from_category(c: &FinCategory) -> Self {
        let name = |m: usize| c.morphism(m).name.clone();
        CategoryFile {
            objects: c.object_names().to_vec(),
            morphisms: c
                .morphisms()
                .iter()
                .map(|m| MorphismEntry {
                    id: m.name.clone(),
                    src: c.object_name(m.src).to_string(),
                    tgt: c.object_name(m.tgt).to_string(),
                })
                .collect(),
            identity: c.objects().map(|o| (c.object_name(o).to_string(), name(c.identity(o)))).collect(),
            compose: c
                .table_entries()
                .into_iter()
                .filter(|&(g, f, _)| !c.is_identity(g) && !c.is_identity(f))
                .map(|(g, f, gf)| [name(g), name(f), name(gf)])
                .collect(),
        }
    }
}

pub fn category_from_str(text: &str) -> Result<FinCategory> {
    parse::<CategoryFile>(text)?.build()
}

pub fn category_to_string(c: &FinCategory) -> String {
    serde_json::to_string_pretty(&CategoryFile::from_category(c)).expect("serializable")
}

pub fn load_category(path: &Path) -> Result<FinCategory> {
    category_from_str(&read(path)?)
}

impl FunctorFile {
    pub fn build(&self, base: Arc<FinCategory>) -> Result<SetFunctor> {
        let c = &base;
        for o in self.sets.keys() {
            if c.object_by_name(o).is_none() {
                return Err(Error::InvalidFunctor(format!("unknown object {o}")));
            }
        }
        let labels: Vec<Vec<String>> =
            c.objects().map(|o| self.sets.get(c.object_name(o)).cloned().unwrap_or_default()).collect();
        for (o, l) in labels.iter().enumerate() {
            let mut seen = HashSet::new();
            if let Some(x) = l.iter().find(|x| !seen.insert(*x)) {
                return Err(Error::InvalidFunctor(format!("duplicate element {x} in {}", c.object_name(o))));
            }
        }
        let index = |o: usize, x: &str| {
            labels[o]
                .iter()
                .position(|y| y == x)
                .ok_or_else(|| Error::InvalidFunctor(format!("unknown element {x} of {}", c.object_name(o))))
        };
        for m in self.maps.keys() {
            if c.morphism_by_name(m).is_none() {
                return Err(Error::InvalidFunctor(format!("unknown morphism {m}")));
            }
        }
        let mut maps = Vec::new();
        for m in 0..c.morphism_count() {
            let (from, to) = match self.variance {
                Variance::Covariant => (c.src(m), c.tgt(m)),
                Variance::Contravariant => (c.tgt(m), c.src(m)),
            };
            let given = self.maps.get(&c.morphism(m).name);
            let mut table = Vec::new();
            for x in &labels[from] {
                match given.and_then(|g| g.get(x)) {
                    Some(y) => table.push(index(to, y)?),
                    None if c.is_identity(m) => table.push(index(to, x)?),
                    None => {
                        return Err(Error::InvalidFunctor(format!(
                            "map of {} is not defined at {x}",
                            c.morphism(m).name
                        )))
                    }
                }
            }
            maps.push(table);
        }
        let sizes = labels.iter().map(|l| l.len()).collect();
        let f = SetFunctor { base, variance: self.variance, sizes, maps, labels: Some(labels) };
        f.checked()
    }
}

/// Loads a functor file and the category it references.
pub fn load_functor(path: &Path) -> Result<SetFunctor> {
    let file: FunctorFile = parse(&read(path)?)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let c = load_category(&dir.join(&file.category))?;
    file.build(Arc::new(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrow_round_trips() {
        let a = FinCategory::arrow();
        let text = category_to_string(&a);
        let b = category_from_str(&text).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn identities_are_filled_in() {
        let text = r#"{"objects":["A","B"],"morphisms":[{"id":"f","src":"A","tgt":"B"}]}"#;
        let c = category_from_str(text).unwrap();
        assert_eq!(c.morphism_count(), 3);
        assert_eq!(c.morphism(c.identity(1)).name, "id_B");
    }

    #[test]
    fn bad_composite_is_reported() {
        let text = r#"{"objects":["A","B"],
            "morphisms":[{"id":"f","src":"A","tgt":"B"},{"id":"g","src":"A","tgt":"B"}],
            "compose":[["f","f","g"]]}"#;
        let err = category_from_str(text).unwrap_err();
        assert!(err.to_string().contains("(f, f)"), "{err}");
    }

    #[test]
    fn functor_file_builds() {
        let c = Arc::new(FinCategory::arrow());
        let text = r#"{"category":"unused","variance":"contravariant",
            "sets":{"A":["a1","a2"],"B":["b"]},"maps":{"f":{"b":"a2"}}}"#;
        let f: FunctorFile = parse(text).unwrap();
        let x = f.build(c).unwrap();
        assert_eq!(x.sizes, vec![2, 1]);
        assert_eq!(x.maps[1], vec![1]);
    }
}
