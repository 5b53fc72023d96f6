//! Reports for law checks. A law is checked on a number of instances;
//! each failing instance contributes a witness.

use std::fmt;

use serde::Serialize;

use std::fmt::Debug;

use crate::fincat::{compare, Comparison, FunctorView, ObjId, QuotientFunctor, SetFunctor, Variance};
use crate::Result;

const MAX_WITNESSES: usize = 8;

/// Outcome of one law over all its instances.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub law: String,
    pub instances: usize,
    pub failures: usize,
    pub witnesses: Vec<String>,
}

impl LawCheck {
    pub fn new(law: impl Into<String>) -> Self {
        LawCheck { law: law.into(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Records one instance with its witnesses (none means it held).
    pub fn record(&mut self, context: &str, witnesses: Vec<String>) {
        self.instances += 1;
        if witnesses.is_empty() {
            return;
        }
        self.failures += 1;
        for w in witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(if context.is_empty() { w } else { format!("{context}: {w}") });
            }
        }
    }

    pub fn record_comparison(&mut self, context: &str, c: &Comparison) {
        self.record(context, c.failures.clone());
    }

    /// Records an instance whose evaluation may itself fail.
    pub fn record_result(&mut self, context: &str, r: Result<Vec<String>>) {
        match r {
            Ok(w) => self.record(context, w),
            Err(e) => self.record(context, vec![format!("could not evaluate: {e}")]),
        }
    }
}

/// A list of law checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<LawCheck>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: LawCheck) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn witnesses(&self) -> Vec<String> {
        self.checks.iter().flat_map(|c| c.witnesses.iter().map(move |w| format!("{}: {w}", c.law))).collect()
    }

    pub fn get(&self, law: &str) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.law == law)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "ok" } else { "FAILED" };
            writeln!(f, "{:<40} {:>6} instances  {status}", c.law, c.instances)?;
            for w in &c.witnesses {
                writeln!(f, "    {w}")?;
            }
        }
        Ok(())
    }
}

/// Naturality of a family of maps `maps[o]: S(o) → T(o)` between two
/// functors of the same variance on the same base, on every non-identity
/// morphism. Undefined entries count as failures.
pub fn naturality(s: &SetFunctor, t: &SetFunctor, maps: &[Vec<Option<usize>>]) -> Vec<String> {
    let c = &s.base;
    let mut out = Vec::new();
    for m in c.non_identity_morphisms() {
        let (from, to) = match s.variance {
            Variance::Covariant => (c.src(m), c.tgt(m)),
            Variance::Contravariant => (c.tgt(m), c.src(m)),
        };
        for x in 0..s.size(from) {
            let lhs = maps[to][s.act(m, x)];
            let rhs = maps[from][x].map(|y| t.act(m, y));
            if lhs.is_none() || lhs != rhs {
                out.push(format!("not natural along {} at element {x} of {}", c.morphism(m).name, c.object_name(from)));
                if out.len() >= MAX_WITNESSES {
                    return out;
                }
            }
        }
    }
    out
}

/// Compares two coend-valued functors on the same base fiber by fiber
/// along a map of raw elements, then checks naturality of the induced
/// bijections.
pub fn compare_functors<A, B>(
    lhs: &QuotientFunctor<A>,
    rhs: &QuotientFunctor<B>,
    map: impl Fn(ObjId, &A) -> Result<B>,
) -> Vec<String>
where
    A: Ord + Clone + Debug,
    B: Ord + Clone + Debug,
{
    let c = &lhs.functor.base;
    let mut out = Vec::new();
    let mut images = Vec::new();
    for o in c.objects() {
        let cmp = compare(&lhs.fibers[o], &rhs.fibers[o], |x| map(o, x));
        out.extend(cmp.failures.iter().map(|w| format!("at {}: {w}", c.object_name(o))));
        images.push(cmp.image);
    }
    if out.is_empty() {
        out.extend(naturality(&lhs.functor, &rhs.functor, &images));
    }
    out
}
