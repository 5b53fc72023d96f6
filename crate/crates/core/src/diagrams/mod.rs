//! String diagrams over the combinators σ (swap), δ (duplicate) and ε
//! (discard), their semantics as finite functions, and normal forms.
//!
//! A diagram with `n` input wires and `m` output wires denotes a function
//! `{0..m-1} → {0..n-1}`: each output wire is traced up to the input it
//! comes from.

mod ast;
mod semantics;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

pub use ast::{parse, Diagram};
pub use semantics::{
    classify, diagrams_equal, diagrams_equal_over, normalize, normalize_over, synthesize, to_function, typecheck,
    Interface, NormalForm,
};

/// A subset of the combinators {σ, δ, ε}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variant {
    pub sigma: bool,
    pub delta: bool,
    pub epsilon: bool,
}

impl Variant {
    pub const EMPTY: Variant = Variant::new(false, false, false);
    pub const SIGMA: Variant = Variant::new(true, false, false);
    pub const DELTA: Variant = Variant::new(false, true, false);
    pub const EPSILON: Variant = Variant::new(false, false, true);
    pub const SIGMA_DELTA: Variant = Variant::new(true, true, false);
    pub const SIGMA_EPSILON: Variant = Variant::new(true, false, true);
    pub const DELTA_EPSILON: Variant = Variant::new(false, true, true);
    pub const FULL: Variant = Variant::new(true, true, true);

    /// The rows of the classification table.
    pub const TABLE: [Variant; 6] = [
        Variant::EMPTY,
        Variant::SIGMA,
        Variant::FULL,
        Variant::DELTA_EPSILON,
        Variant::SIGMA_DELTA,
        Variant::SIGMA_EPSILON,
    ];

    /// The variants whose free construction is a monad on categories.
    pub const MONAD: [Variant; 6] =
        [Variant::EMPTY, Variant::SIGMA, Variant::EPSILON, Variant::SIGMA_DELTA, Variant::SIGMA_EPSILON, Variant::FULL];

    pub const ALL: [Variant; 8] = [
        Variant::EMPTY,
        Variant::SIGMA,
        Variant::DELTA,
        Variant::EPSILON,
        Variant::SIGMA_DELTA,
        Variant::SIGMA_EPSILON,
        Variant::DELTA_EPSILON,
        Variant::FULL,
    ];

    pub const fn new(sigma: bool, delta: bool, epsilon: bool) -> Self {
        Variant { sigma, delta, epsilon }
    }

    /// δ without σ does not expand along flattening, so {δ} and {δ,ε}
    /// carry no monad.
    pub fn is_monad_enabled(self) -> bool {
        self.sigma || !self.delta
    }

    pub fn is_classified(self) -> bool {
        Variant::TABLE.contains(&self)
    }

    pub fn require_monad(self) -> Result<()> {
        if self.is_monad_enabled() {
            Ok(())
        } else {
            Err(Error::NotMonadEnabled(self.to_string()))
        }
    }

    /// The class of shape functions. Defined for all eight subsets; the
    /// two outside the table are monotone injections ({ε}) and monotone
    /// surjections ({δ}).
    pub fn function_class(self) -> FunctionClass {
        match (self.sigma, self.delta, self.epsilon) {
            (false, false, false) => FunctionClass::Identity,
            (true, false, false) => FunctionClass::Bijection,
            (true, true, true) => FunctionClass::All,
            (false, true, true) => FunctionClass::Monotone,
            (true, true, false) => FunctionClass::Surjection,
            (true, false, true) => FunctionClass::Injection,
            (false, false, true) => FunctionClass::MonotoneInjection,
            (false, true, false) => FunctionClass::MonotoneSurjection,
        }
    }

    /// Comma-separated ASCII names, as accepted by the parser.
    pub fn ascii(self) -> String {
        let mut parts = Vec::new();
        if self.sigma {
            parts.push("sigma");
        }
        if self.delta {
            parts.push("delta");
        }
        if self.epsilon {
            parts.push("eps");
        }
        if parts.is_empty() {
            "empty".into()
        } else {
            parts.join(",")
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.sigma {
            parts.push("σ");
        }
        if self.delta {
            parts.push("δ");
        }
        if self.epsilon {
            parts.push("ε");
        }
        if parts.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{{{}}}", parts.join(","))
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        match t.to_ascii_lowercase().as_str() {
            "" | "∅" | "empty" | "none" | "monoidal" => return Ok(Variant::EMPTY),
            "symmetric" => return Ok(Variant::SIGMA),
            "cartesian" | "clone" | "all" | "full" | "f" => return Ok(Variant::FULL),
            _ => {}
        }
        let mut v = Variant::EMPTY;
        for part in t.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()) {
            match part.to_ascii_lowercase().as_str() {
                "sigma" | "s" | "σ" => v.sigma = true,
                "delta" | "d" | "δ" => v.delta = true,
                "eps" | "epsilon" | "e" | "ε" => v.epsilon = true,
                other => return Err(Error::InvalidInput(format!("unknown combinator {other:?} in variant {s:?}"))),
            }
        }
        Ok(v)
    }
}

impl Serialize for Variant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.ascii())
    }
}

impl<'de> Deserialize<'de> for Variant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The classes of finite functions generated by a set of combinators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionClass {
    Identity,
    Bijection,
    All,
    Monotone,
    Surjection,
    Injection,
    MonotoneInjection,
    MonotoneSurjection,
}

impl FunctionClass {
    fn flags(self) -> (bool, bool, bool) {
        // (injective, monotone, surjective)
        match self {
            FunctionClass::Identity => (true, true, true),
            FunctionClass::Bijection => (true, false, true),
            FunctionClass::All => (false, false, false),
            FunctionClass::Monotone => (false, true, false),
            FunctionClass::Surjection => (false, false, true),
            FunctionClass::Injection => (true, false, false),
            FunctionClass::MonotoneInjection => (true, true, false),
            FunctionClass::MonotoneSurjection => (false, true, true),
        }
    }

    pub fn contains(self, f: &FiniteFunction) -> bool {
        let (inj, mono, surj) = self.flags();
        (!inj || f.is_injective()) && (!mono || f.is_monotone()) && (!surj || f.is_surjective())
    }

    /// All class members `{0..dom-1} → {0..cod-1}` in lexicographic order
    /// of their tables.
    pub fn functions(self, dom: usize, cod: usize) -> Vec<FiniteFunction> {
        let (inj, mono, surj) = self.flags();
        let mut out = Vec::new();
        if (inj && dom > cod) || (surj && cod > dom) {
            return out;
        }
        let mut table = Vec::with_capacity(dom);
        let mut hits = vec![0usize; cod];
        let mut uncovered = cod;
        fn go(
            dom: usize,
            cod: usize,
            flags: (bool, bool, bool),
            table: &mut Vec<usize>,
            hits: &mut Vec<usize>,
            uncovered: &mut usize,
            out: &mut Vec<FiniteFunction>,
        ) {
            let (inj, mono, surj) = flags;
            let pos = table.len();
            if surj && dom - pos < *uncovered {
                return;
            }
            if pos == dom {
                if *uncovered == 0 || !surj {
                    out.push(FiniteFunction { dom, cod, table: table.clone() });
                }
                return;
            }
            let start = if mono { table.last().map_or(0, |&v| if inj { v + 1 } else { v }) } else { 0 };
            for v in start..cod {
                if inj && hits[v] > 0 {
                    continue;
                }
                if mono && surj {
                    // Monotone surjections step by at most one.
                    let prev = table.last().map_or(0, |&p| p + 1);
                    if v > prev || (pos == 0 && v != 0) {
                        continue;
                    }
                }
                hits[v] += 1;
                if hits[v] == 1 {
                    *uncovered -= 1;
                }
                table.push(v);
                go(dom, cod, flags, table, hits, uncovered, out);
                table.pop();
                hits[v] -= 1;
                if hits[v] == 0 {
                    *uncovered += 1;
                }
            }
        }
        go(dom, cod, (inj, mono, surj), &mut table, &mut hits, &mut uncovered, &mut out);
        out
    }

    /// Adjacent transpositions, faces and degeneracies lying in the class,
    /// between arities up to `max`. Every member with domain and codomain
    /// at most `max` is a composite of these through arities at most `max`.
    pub fn generators(self, max: usize) -> Vec<FiniteFunction> {
        let (inj, mono, surj) = self.flags();
        let mut out = Vec::new();
        if self == FunctionClass::Identity {
            return out;
        }
        for n in 0..=max {
            if !mono {
                for i in 0..n.saturating_sub(1) {
                    let mut table: Vec<usize> = (0..n).collect();
                    table.swap(i, i + 1);
                    out.push(FiniteFunction { dom: n, cod: n, table });
                }
            }
            if !surj && n < max {
                for i in 0..=n {
                    let table = (0..n).map(|j| if j < i { j } else { j + 1 }).collect();
                    out.push(FiniteFunction { dom: n, cod: n + 1, table });
                }
            }
            if !inj && n >= 1 && n < max {
                for i in 0..n {
                    let table = (0..=n).map(|j| if j <= i { j } else { j - 1 }).collect();
                    out.push(FiniteFunction { dom: n + 1, cod: n, table });
                }
            }
        }
        out
    }

    pub fn name(self) -> &'static str {
        match self {
            FunctionClass::Identity => "identities",
            FunctionClass::Bijection => "bijections",
            FunctionClass::All => "all functions",
            FunctionClass::Monotone => "monotone functions",
            FunctionClass::Surjection => "surjections",
            FunctionClass::Injection => "injections",
            FunctionClass::MonotoneInjection => "monotone injections",
            FunctionClass::MonotoneSurjection => "monotone surjections",
        }
    }
}

/// A function `{0..dom-1} → {0..cod-1}` given by its table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteFunction {
    pub dom: usize,
    pub cod: usize,
    pub table: Vec<usize>,
}

impl FiniteFunction {
    pub fn new(dom: usize, cod: usize, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom || table.iter().any(|&v| v >= cod) {
            return Err(Error::InvalidInput(format!("table {table:?} is not a function {dom} → {cod}")));
        }
        Ok(FiniteFunction { dom, cod, table })
    }

    pub fn identity(n: usize) -> Self {
        FiniteFunction { dom: n, cod: n, table: (0..n).collect() }
    }

    /// The transposition of positions `i` and `i + 1` in `{0..n-1}`.
    pub fn adjacent_swap(n: usize, i: usize) -> Self {
        let mut table: Vec<usize> = (0..n).collect();
        table.swap(i, i + 1);
        FiniteFunction { dom: n, cod: n, table }
    }

    /// The inclusion of `{0..len-1}` into `{0..cod-1}` at `offset`.
    pub fn inclusion(len: usize, offset: usize, cod: usize) -> Self {
        FiniteFunction { dom: len, cod, table: (offset..offset + len).collect() }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &FiniteFunction) -> Result<FiniteFunction> {
        if f.cod != self.dom {
            return Err(Error::Mismatch(format!(
                "cannot compose {} → {} after {} → {}",
                self.dom, self.cod, f.dom, f.cod
            )));
        }
        Ok(FiniteFunction { dom: f.dom, cod: self.cod, table: f.table.iter().map(|&i| self.table[i]).collect() })
    }

    /// The categorical sum: `self` on the first block, `g` shifted on the
    /// second.
    pub fn sum(&self, g: &FiniteFunction) -> FiniteFunction {
        let mut table = self.table.clone();
        table.extend(g.table.iter().map(|&v| v + self.cod));
        FiniteFunction { dom: self.dom + g.dom, cod: self.cod + g.cod, table }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod];
        self.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod];
        for &v in &self.table {
            seen[v] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_monotone(&self) -> bool {
        self.table.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_bijection(&self) -> bool {
        self.dom == self.cod && self.is_injective()
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.table.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> Option<FiniteFunction> {
        if !self.is_bijection() {
            return None;
        }
        let mut table = vec![0; self.dom];
        for (i, &v) in self.table.iter().enumerate() {
            table[v] = i;
        }
        Some(FiniteFunction { dom: self.dom, cod: self.cod, table })
    }

    /// All functions `{0..dom-1} → {0..cod-1}`.
    pub fn all(dom: usize, cod: usize) -> Vec<FiniteFunction> {
        FunctionClass::All.functions(dom, cod)
    }
}

impl fmt::Display for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dom == 0 {
            return write!(f, "(empty function to {})", self.cod);
        }
        for (i, v) in self.table.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}↦{v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn generators_generate() {
        for v in Variant::ALL {
            let class = v.function_class();
            let gens = class.generators(4);
            assert!(gens.iter().all(|g| class.contains(g)));
            let mut seen: BTreeSet<FiniteFunction> = (0..=4).map(FiniteFunction::identity).collect();
            let mut frontier: Vec<FiniteFunction> = seen.iter().cloned().collect();
            while let Some(f) = frontier.pop() {
                for g in gens.iter().filter(|g| g.dom == f.cod) {
                    let h = g.after(&f).unwrap();
                    if seen.insert(h.clone()) {
                        frontier.push(h);
                    }
                }
            }
            let all: BTreeSet<_> = (0..=4).flat_map(|m| (0..=4).flat_map(move |n| class.functions(m, n))).collect();
            assert_eq!(seen, all, "{}", class.name());
        }
    }

    fn brute(class: FunctionClass, m: usize, n: usize) -> usize {
        let mut count = 0;
        let total = n.pow(m as u32);
        for code in 0..total {
            let mut c = code;
            let table: Vec<usize> = (0..m)
                .map(|_| {
                    let v = c % n;
                    c /= n;
                    v
                })
                .collect();
            if class.contains(&FiniteFunction { dom: m, cod: n, table }) {
                count += 1;
            }
        }
        if m == 0 {
            count = usize::from(class.contains(&FiniteFunction { dom: 0, cod: n, table: vec![] }));
        }
        count
    }

    #[test]
    fn enumeration_matches_filtering() {
        for v in Variant::ALL {
            let class = v.function_class();
            for m in 0..=4 {
                for n in 0..=4 {
                    let fs = class.functions(m, n);
                    assert_eq!(fs.len(), brute(class, m, n), "{v} {m} {n}");
                    assert!(fs.iter().all(|f| class.contains(f)));
                    assert!(fs.windows(2).all(|w| w[0].table < w[1].table));
                }
            }
        }
    }

    #[test]
    fn table_counts_at_three() {
        let counts: Vec<usize> = Variant::TABLE.iter().map(|v| v.function_class().functions(3, 3).len()).collect();
        assert_eq!(counts, vec![1, 6, 27, 10, 6, 6]);
    }

    #[test]
    fn variants_parse_and_print() {
        for v in Variant::ALL {
            assert_eq!(v.ascii().parse::<Variant>().unwrap(), v);
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
        assert_eq!("{s,d}".parse::<Variant>().unwrap(), Variant::SIGMA_DELTA);
        assert!("{x}".parse::<Variant>().is_err());
        assert!(!Variant::DELTA.is_monad_enabled());
        assert!(!Variant::DELTA_EPSILON.is_monad_enabled());
        assert!(Variant::EPSILON.is_monad_enabled());
    }

    #[test]
    fn sum_shifts_second_block() {
        let f = FiniteFunction::new(2, 1, vec![0, 0]).unwrap();
        let g = FiniteFunction::identity(1);
        assert_eq!(f.sum(&g).table, vec![0, 0, 1]);
    }
}
