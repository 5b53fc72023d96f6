//! Presheaves on `?1` (arity presheaves), the Day tensor, the substitution
//! product `Y•X`, analytic functors and operad law checks.
//!
//! A morphism `n → p` of `?1` is a function `{0..n-1} → {0..p-1}` in the
//! variant's class, and an arity presheaf acts covariantly along it:
//! `X(f): Xn → Xp`. Data is supplied for arities `0..=N`; a finitely
//! supported presheaf is empty above `N`, a truncated one is unknown there.

pub mod json;
mod monoid;
mod product;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagrams::{FiniteFunction, Variant};
use crate::{Error, Result};

pub use monoid::{
    associative_operad, end_clone, monoid_check, terminal_operad, trivial_operad, Multiplication, OperadCandidate,
};
pub use product::{
    analytic_comp_check, analytic_cost, analytic_eval, class_count, compare_with_cokleisli, day_tensor, day_unit,
    from_profunctor, subst, subst_assoc_check, subst_clone, subst_cost, subst_supplied, subst_unit, tensor,
    tensor_power, to_profunctor, unit_laws_check, AnalyticRaw, ArityQuotient, CloneRaw, SubstRaw, TensorRaw,
};

/// Whether the sets above the truncation are known to be empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Support {
    Finite,
    Truncated,
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Support::Finite => "finite",
            Support::Truncated => "truncated",
        })
    }
}

/// `X: ?1 → Set` given on arities `0..=truncation`. Elements of `Xn` are
/// `0..sizes[n]`; `actions` holds the table of every non-identity shape
/// of the class between supplied arities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArityPresheaf {
    variant: Variant,
    truncation: usize,
    support: Support,
    sizes: Vec<usize>,
    actions: BTreeMap<FiniteFunction, Vec<usize>>,
    labels: Option<Vec<Vec<String>>>,
}

impl ArityPresheaf {
    /// Tabulates `act(f, x)` on every non-identity shape of the class.
    pub fn from_fn(
        variant: Variant,
        truncation: usize,
        support: Support,
        sizes: Vec<usize>,
        act: impl Fn(&FiniteFunction, usize) -> usize,
    ) -> Result<Self> {
        if sizes.len() != truncation + 1 {
            return Err(Error::InvalidInput(format!("{} sets supplied for truncation {truncation}", sizes.len())));
        }
        let class = variant.function_class();
        let mut actions = BTreeMap::new();
        for n in 0..=truncation {
            for p in 0..=truncation {
                for f in class.functions(n, p) {
                    if !f.is_identity() {
                        let table = (0..sizes[n]).map(|x| act(&f, x)).collect();
                        actions.insert(f, table);
                    }
                }
            }
        }
        ArityPresheaf { variant, truncation, support, sizes, actions, labels: None }.checked()
    }

    /// Every action generated by composing the given ones. Each shape of
    /// the class must be reached, and two composites with the same shape
    /// must agree.
    pub fn from_generators(
        variant: Variant,
        truncation: usize,
        support: Support,
        sizes: Vec<usize>,
        generators: Vec<(FiniteFunction, Vec<usize>)>,
    ) -> Result<Self> {
        if sizes.len() != truncation + 1 {
            return Err(Error::InvalidInput(format!("{} sets supplied for truncation {truncation}", sizes.len())));
        }
        let class = variant.function_class();
        for (g, t) in &generators {
            if g.dom > truncation || g.cod > truncation {
                return Err(Error::InvalidInput(format!("action of {g} lies above the truncation {truncation}")));
            }
            if !class.contains(g) {
                return Err(Error::OutsideClass(format!("{g} is not among the {}", class.name())));
            }
            if t.len() != sizes[g.dom] || t.iter().any(|&y| y >= sizes[g.cod]) {
                return Err(Error::InvalidFunctor(format!("the table given for {g} has the wrong type")));
            }
        }
        let known = compose_generated(truncation, &sizes, &generators)?;
        for n in 0..=truncation {
            for p in 0..=truncation {
                for f in class.functions(n, p) {
                    if sizes[n] > 0 && !known.contains_key(&f) {
                        return Err(Error::InvalidFunctor(format!(
                            "the action of {f} is not determined by the given ones"
                        )));
                    }
                }
            }
        }
        let mut actions: BTreeMap<_, _> = known.into_iter().filter(|(f, _)| !f.is_identity()).collect();
        // shapes out of empty sets need no data
        for n in 0..=truncation {
            if sizes[n] == 0 {
                for p in 0..=truncation {
                    for f in class.functions(n, p) {
                        if !f.is_identity() {
                            actions.entry(f).or_insert_with(Vec::new);
                        }
                    }
                }
            }
        }
        ArityPresheaf { variant, truncation, support, sizes, actions, labels: None }.checked()
    }

    /// Builds from complete tables without re-checking in release builds;
    /// used for presheaves computed as quotients.
    pub(crate) fn from_tables(
        variant: Variant,
        truncation: usize,
        support: Support,
        sizes: Vec<usize>,
        actions: BTreeMap<FiniteFunction, Vec<usize>>,
    ) -> Result<Self> {
        let x = ArityPresheaf { variant, truncation, support, sizes, actions, labels: None };
        if cfg!(debug_assertions) {
            x.checked()
        } else {
            Ok(x)
        }
    }

    pub fn checked(self) -> Result<Self> {
        let p = self.validate();
        if p.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidFunctor(p.join("; ")))
        }
    }

    /// Every violation of typing or functoriality.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let class = self.variant.function_class();
        let n_max = self.truncation;
        if self.sizes.len() != n_max + 1 {
            out.push("the sets do not match the truncation".into());
            return out;
        }
        for n in 0..=n_max {
            for p in 0..=n_max {
                for f in class.functions(n, p) {
                    if f.is_identity() {
                        continue;
                    }
                    match self.actions.get(&f) {
                        None => out.push(format!("no action given for {f}")),
                        Some(t) if t.len() != self.sizes[n] || t.iter().any(|&y| y >= self.sizes[p]) => {
                            out.push(format!("the action of {f} has the wrong type"))
                        }
                        _ => {}
                    }
                }
            }
        }
        if self.actions.keys().any(|f| !class.contains(f) || f.dom > n_max || f.cod > n_max) {
            out.push(format!("actions are given outside the {} between arities ≤ {n_max}", class.name()));
        }
        if !out.is_empty() {
            return out;
        }
        for (f, tf) in &self.actions {
            for p2 in 0..=n_max {
                for g in class.functions(f.cod, p2) {
                    if g.is_identity() {
                        continue;
                    }
                    let gf = g.after(f).expect("composable");
                    let tg = &self.actions[&g];
                    let lhs = |x: usize| if gf.is_identity() { x } else { self.actions[&gf][x] };
                    if (0..self.sizes[f.dom]).any(|x| lhs(x) != tg[tf[x]]) {
                        out.push(format!("the action of ({g}) after ({f}) is not the composite"));
                        if out.len() >= 8 {
                            return out;
                        }
                    }
                }
            }
        }
        if self.support == Support::Finite {
            for n in 0..=n_max {
                if self.sizes[n] > 0 && class_count(class, n, n_max + 1) > 0 {
                    out.push(format!(
                        "arity {n} is inhabited and the {} reach arity {}, so the support cannot be finite",
                        class.name(),
                        n_max + 1
                    ));
                    break;
                }
            }
        }
        out
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn is_finite(&self) -> bool {
        self.support == Support::Finite
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// `|Xn|`; zero above the truncation.
    pub fn size(&self, n: usize) -> usize {
        self.sizes.get(n).copied().unwrap_or(0)
    }

    /// Largest inhabited arity, if any.
    pub fn max_arity(&self) -> Option<usize> {
        (0..=self.truncation).rev().find(|&n| self.sizes[n] > 0)
    }

    /// Inhabited arities up to `bound`.
    pub fn arities(&self, bound: usize) -> Vec<usize> {
        (0..=self.truncation.min(bound)).filter(|&n| self.sizes[n] > 0).collect()
    }

    /// `X(f)(x)` for a shape of the class between supplied arities.
    pub fn act(&self, f: &FiniteFunction, x: usize) -> usize {
        if f.is_identity() {
            return x;
        }
        match self.actions.get(f) {
            Some(t) => t[x],
            None => panic!("no action of {f} on {self}"),
        }
    }

    pub fn actions(&self) -> &BTreeMap<FiniteFunction, Vec<usize>> {
        &self.actions
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn label(&self, n: usize, x: usize) -> String {
        match &self.labels {
            Some(l) => l[n][x].clone(),
            None => format!("{n}.{x}"),
        }
    }

    pub fn index_of_label(&self, n: usize, label: &str) -> Option<usize> {
        (0..self.size(n)).find(|&x| self.label(n, x) == label)
    }

    /// The same data with support declared truncated.
    pub fn as_truncated(mut self) -> Self {
        self.support = Support::Truncated;
        self
    }

    /// The coproduct `X ⊕ X′`: elements of `X` first.
    pub fn sum(&self, other: &ArityPresheaf) -> Result<ArityPresheaf> {
        if self.variant != other.variant {
            return Err(Error::Mismatch(format!("variants {} and {} differ", self.variant, other.variant)));
        }
        let n = self.truncation.min(other.truncation);
        let support = if self.is_finite() && other.is_finite() && self.truncation == other.truncation {
            Support::Finite
        } else {
            Support::Truncated
        };
        let sizes: Vec<usize> = (0..=n).map(|k| self.size(k) + other.size(k)).collect();
        ArityPresheaf::from_fn(self.variant, n, support, sizes, |f, x| {
            let left = self.size(f.dom);
            if x < left {
                self.act(f, x)
            } else {
                self.size(f.cod) + other.act(f, x - left)
            }
        })
    }
}

impl fmt::Display for ArityPresheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} presheaf, sizes", self.variant)?;
        for (n, s) in self.sizes.iter().enumerate() {
            write!(f, " {n}:{s}")?;
        }
        write!(f, " ({} at {})", self.support, self.truncation)
    }
}

/// Closes generator tables under composition. Two composites with the same
/// shape must act alike.
pub(crate) fn compose_generated(
    truncation: usize,
    sizes: &[usize],
    generators: &[(FiniteFunction, Vec<usize>)],
) -> Result<BTreeMap<FiniteFunction, Vec<usize>>> {
    let mut known: BTreeMap<FiniteFunction, Vec<usize>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for n in 0..=truncation {
        let id = FiniteFunction::identity(n);
        known.insert(id.clone(), (0..sizes[n]).collect());
        queue.push_back(id);
    }
    while let Some(f) = queue.pop_front() {
        for (g, tg) in generators {
            if g.dom != f.cod {
                continue;
            }
            let h = g.after(&f)?;
            let table: Vec<usize> = known[&f].iter().map(|&x| tg[x]).collect();
            match known.get(&h) {
                Some(prev) if *prev != table => {
                    return Err(Error::InvalidFunctor(format!("two composites with shape {h} act differently")));
                }
                Some(_) => {}
                None => {
                    known.insert(h.clone(), table);
                    queue.push_back(h);
                }
            }
        }
    }
    Ok(known)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_sigma_action_validates() {
        let x = ArityPresheaf::from_fn(Variant::SIGMA, 2, Support::Finite, vec![0, 0, 1], |_, x| x).unwrap();
        assert_eq!(x.size(2), 1);
        assert_eq!(x.max_arity(), Some(2));
    }

    #[test]
    fn non_functorial_action_is_rejected() {
        // a transposition acting as a 3-cycle on three points
        let r = ArityPresheaf::from_fn(Variant::SIGMA, 2, Support::Finite, vec![0, 0, 3], |f, x| {
            if f.is_identity() {
                x
            } else {
                (x + 1) % 3
            }
        });
        assert!(r.is_err());
    }

    #[test]
    fn finite_support_is_impossible_with_injections() {
        let r = ArityPresheaf::from_fn(Variant::FULL, 1, Support::Finite, vec![0, 1], |_, x| x);
        assert!(r.is_err());
        let ok = ArityPresheaf::from_fn(Variant::FULL, 1, Support::Truncated, vec![1, 1], |_, _| 0);
        assert!(ok.is_ok());
    }

    #[test]
    fn generators_determine_the_symmetric_action() {
        // sign representation of S3 on two points
        let gens = (0..2).map(|i| (FiniteFunction::adjacent_swap(3, i), vec![1, 0])).collect::<Vec<_>>();
        let x = ArityPresheaf::from_generators(Variant::SIGMA, 3, Support::Finite, vec![0, 0, 0, 2], gens).unwrap();
        let cycle = FiniteFunction::new(3, 3, vec![1, 2, 0]).unwrap();
        assert_eq!(x.act(&cycle, 0), 0);
        let swap = FiniteFunction::new(3, 3, vec![2, 1, 0]).unwrap();
        assert_eq!(x.act(&swap, 0), 1);
    }

    #[test]
    fn inconsistent_generators_are_rejected() {
        let gens = vec![(FiniteFunction::adjacent_swap(2, 0), vec![1, 2, 0])];
        let r = ArityPresheaf::from_generators(Variant::SIGMA, 2, Support::Finite, vec![0, 0, 3], gens);
        assert!(r.is_err());
    }

    #[test]
    fn sum_adds_sizes() {
        let x = ArityPresheaf::from_fn(Variant::SIGMA, 2, Support::Finite, vec![0, 1, 1], |_, x| x).unwrap();
        let s = x.sum(&x).unwrap();
        assert_eq!(s.sizes(), &[0, 2, 2]);
    }
}
