//! Monoids for the substitution product: candidate operads and clones,
//! and the check of their laws on supplied data.

use std::collections::BTreeMap;

use super::product::{
    clone_form, normalize_subst, subst_clone_supplied, subst_supplied, ArityQuotient, CloneRaw, SubstRaw,
};
use super::{ArityPresheaf, Support};
use crate::diagrams::{FiniteFunction, FunctionClass, Variant};
use crate::laws::{LawCheck, Report};
use crate::{limits, Error, Result};

/// A carrier with a unit in `X1` and a multiplication table. Keys are raw
/// elements of `X•X`; one entry per class is enough.
#[derive(Debug, Clone)]
pub struct OperadCandidate {
    pub carrier: ArityPresheaf,
    pub unit: usize,
    pub mult: BTreeMap<SubstRaw, usize>,
}

/// The codiagonal `m·p → p`, `j ↦ j mod p`, used to write clone-form
/// elements `(y; s_1 … s_m)` with `s_i ∈ Xp` as raw elements.
fn codiagonal(m: usize, p: usize) -> FiniteFunction {
    FiniteFunction { dom: m * p, cod: p, table: (0..m * p).map(|j| j % p.max(1)).collect() }
}

fn general_of_clone(r: &CloneRaw, p: usize) -> SubstRaw {
    SubstRaw { m: r.m, y: r.y, args: r.args.iter().map(|&s| (p, s)).collect(), shape: codiagonal(r.m, p) }
}

/// The coend used for the check: the clone form for all functions, the
/// general one otherwise.
enum Coend {
    Clone(ArityQuotient<CloneRaw>),
    General(ArityQuotient<SubstRaw>),
}

impl Coend {
    fn build(x: &ArityPresheaf, k: usize) -> Result<Coend> {
        if x.variant().function_class() == FunctionClass::All {
            subst_clone_supplied(x, x, k).map(Coend::Clone)
        } else {
            subst_supplied(x, x, k).map(Coend::General)
        }
    }

    fn class_of(&self, x: &ArityPresheaf, r: &SubstRaw) -> Option<usize> {
        let p = r.shape.cod;
        match self {
            Coend::Clone(q) => q.fibers.get(p)?.class_of_elem(&clone_form(x, r)),
            Coend::General(q) => q.fibers.get(p)?.class_of_elem(&normalize_subst(x, r)),
        }
    }

    fn quotient_sizes(&self) -> Vec<usize> {
        match self {
            Coend::Clone(q) => q.sizes().to_vec(),
            Coend::General(q) => q.sizes().to_vec(),
        }
    }

    fn actions(&self) -> &BTreeMap<FiniteFunction, Vec<usize>> {
        match self {
            Coend::Clone(q) => q.presheaf.actions(),
            Coend::General(q) => q.presheaf.actions(),
        }
    }

    fn representative(&self, p: usize, c: usize) -> String {
        match self {
            Coend::Clone(q) => q.fibers[p].representative(c).to_string(),
            Coend::General(q) => q.fibers[p].representative(c).to_string(),
        }
    }

    /// One general-form raw element per class.
    fn representatives(&self) -> Vec<Vec<SubstRaw>> {
        match self {
            Coend::Clone(q) => (0..q.fibers.len())
                .map(|p| q.fibers[p].representatives().map(|r| general_of_clone(r, p)).collect())
                .collect(),
            Coend::General(q) => q.fibers.iter().map(|f| f.representatives().cloned().collect()).collect(),
        }
    }
}

/// The multiplication of a candidate extended from its table to every raw
/// element of `X•X` up to an arity.
pub struct Multiplication {
    coend: Coend,
    values: Vec<Vec<Option<usize>>>,
}

impl Multiplication {
    /// The value on the class of `r`, when the table covers it.
    pub fn apply(&self, x: &ArityPresheaf, r: &SubstRaw) -> Option<usize> {
        self.coend.class_of(x, r).and_then(|c| self.values.get(r.shape.cod)?[c])
    }
}

impl OperadCandidate {
    /// Tabulates the multiplication on classes of arity at most `k`.
    pub fn multiplication(&self, k: usize) -> Result<Multiplication> {
        let (m, _) = tabulate(self, k)?;
        Ok(m)
    }
}

fn tabulate(cand: &OperadCandidate, k: usize) -> Result<(Multiplication, LawCheck)> {
    let x = &cand.carrier;
    let n = x.truncation();
    if k > n {
        return Err(Error::InvalidInput(format!("arity bound {k} exceeds the supplied arities 0..={n}")));
    }
    let coend = Coend::build(x, k)?;
    let sizes = coend.quotient_sizes();
    let mut values: Vec<Vec<Option<usize>>> = sizes.iter().map(|&s| vec![None; s]).collect();
    let mut defined = LawCheck::new("well-defined on classes");
    for (r, &v) in &cand.mult {
        let p = r.shape.cod;
        if p > k {
            continue;
        }
        let mut w = Vec::new();
        match coend.class_of(x, r) {
            None => w.push(format!("{r} is not a raw element of X•X")),
            Some(_) if v >= x.size(p) => w.push(format!("{r} ↦ {v}, outside arity {p}")),
            Some(c) => match values[p][c] {
                Some(old) if old != v => w.push(format!("{r} ↦ {v}, but its class already has value {old}")),
                _ => values[p][c] = Some(v),
            },
        }
        defined.record(&format!("arity {p}"), w);
    }
    for (p, vals) in values.iter().enumerate() {
        let missing: Vec<String> = vals
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_none())
            .map(|(c, _)| format!("no value on the class of {}", coend.representative(p, c)))
            .collect();
        defined.record(&format!("arity {p}"), missing);
    }
    Ok((Multiplication { coend, values }, defined))
}

/// Unit, associativity, well-definedness and naturality of the
/// multiplication, on all raw elements whose arities stay `≤ k`. Needs
/// `k` at most the truncation of the carrier.
pub fn monoid_check(cand: &OperadCandidate, k: usize) -> Result<Report> {
    let x = &cand.carrier;
    let n = x.truncation();
    if n < 1 || cand.unit >= x.size(1) {
        return Err(Error::InvalidInput(format!("unit {} is not an element of arity 1", cand.unit)));
    }
    let (table, defined) = tabulate(cand, k)?;
    let mut report = Report::new();
    report.push(defined);
    let (coend, values) = (&table.coend, &table.values);

    let mu = |r: &SubstRaw| -> Option<usize> { coend.class_of(x, r).and_then(|c| values[r.shape.cod][c]) };

    let mut natural = LawCheck::new("naturality");
    for (g, t) in coend.actions() {
        let mut w = Vec::new();
        for c in 0..t.len() {
            let (Some(a), Some(b)) = (values[g.dom][c], values[g.cod][t[c]]) else { continue };
            if x.act(g, a) != b {
                w.push(format!("along [{}] at {}", join(&g.table), coend.representative(g.dom, c)));
            }
        }
        natural.record(&format!("{} → {}", g.dom, g.cod), w);
    }
    report.push(natural);

    let e = cand.unit;
    let mut left = LawCheck::new("left unit");
    for p in 0..=k {
        let mut w = Vec::new();
        for a in 0..x.size(p) {
            let r = SubstRaw { m: 1, y: e, args: vec![(p, a)], shape: FiniteFunction::identity(p) };
            if mu(&r) != Some(a) {
                w.push(format!("e∘{} = {:?}", x.label(p, a), mu(&r).map(|v| x.label(p, v))));
            }
        }
        left.record(&format!("arity {p}"), w);
    }
    report.push(left);

    let mut right = LawCheck::new("right unit");
    for m in 0..=k {
        let mut w = Vec::new();
        for a in 0..x.size(m) {
            let r = SubstRaw { m, y: a, args: vec![(1, e); m], shape: FiniteFunction::identity(m) };
            if mu(&r) != Some(a) {
                w.push(format!("{}∘(e…e) = {:?}", x.label(m, a), mu(&r).map(|v| x.label(m, v))));
            }
        }
        right.record(&format!("arity {m}"), w);
    }
    report.push(right);

    report.push(associativity(x, k, &mu)?);
    if !x.is_finite() {
        report.push(LawCheck::new(format!("checked on arities ≤ {k}; data given up to arity {n}")));
    }
    Ok(report)
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// All `(arity, element)` lists of length `len` with arities summing to
/// at most `budget`.
fn arg_lists(x: &ArityPresheaf, len: usize, budget: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![(Vec::new(), 0usize)];
    for _ in 0..len {
        let mut next = Vec::new();
        for (args, used) in &out {
            for n in x.arities(budget - used) {
                for a in 0..x.size(n) {
                    let mut v: Vec<(usize, usize)> = args.clone();
                    v.push((n, a));
                    next.push((v, used + n));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(v, _)| v).collect()
}

/// `μ(μ(y; x⃗); w⃗) = μ(y; (μ(x_i; w⃗_i))_i)` with identity shapes; by
/// naturality this covers every outer shape.
fn associativity(x: &ArityPresheaf, k: usize, mu: &dyn Fn(&SubstRaw) -> Option<usize>) -> Result<LawCheck> {
    let mut check = LawCheck::new("associativity");
    let mut count: u128 = 0;
    let mut terms = Vec::new();
    for m in x.arities(k) {
        for xs in arg_lists(x, m, k) {
            let total: usize = xs.iter().map(|a| a.0).sum();
            let ws = arg_lists(x, total, k);
            count += (x.size(m) * ws.len()) as u128;
            limits::check("associativity terms", count)?;
            terms.push((m, xs, ws));
        }
    }
    for (m, xs, ws) in terms {
        let ns: Vec<usize> = xs.iter().map(|a| a.0).collect();
        let total: usize = ns.iter().sum();
        for y in 0..x.size(m) {
            let inner = mu(&SubstRaw { m, y, args: xs.clone(), shape: FiniteFunction::identity(total) });
            for w in &ws {
                let ks: usize = w.iter().map(|a| a.0).sum();
                let a = inner.and_then(|v| {
                    mu(&SubstRaw { m: total, y: v, args: w.clone(), shape: FiniteFunction::identity(ks) })
                });
                let mut start = 0;
                let mut blocks = Vec::with_capacity(m);
                for (i, &(ni, xi)) in xs.iter().enumerate() {
                    let part = w[start..start + ni].to_vec();
                    start += ni;
                    let q: usize = part.iter().map(|a| a.0).sum();
                    let v = mu(&SubstRaw { m: ni, y: xi, args: part, shape: FiniteFunction::identity(q) });
                    blocks.push(v.map(|v| (q, v)).ok_or(i));
                }
                let b = blocks
                    .into_iter()
                    .collect::<std::result::Result<Vec<_>, usize>>()
                    .ok()
                    .and_then(|args| mu(&SubstRaw { m, y, args, shape: FiniteFunction::identity(ks) }));
                let mut wit = Vec::new();
                if a.is_none() || a != b {
                    wit.push(format!(
                        "{}({}) then ({}): {:?} ≠ {:?}",
                        x.label(m, y),
                        xs.iter().map(|&(n, e)| x.label(n, e)).collect::<Vec<_>>().join(", "),
                        w.iter().map(|&(n, e)| x.label(n, e)).collect::<Vec<_>>().join(", "),
                        a.map(|v| x.label(ks, v)),
                        b.map(|v| x.label(ks, v)),
                    ));
                }
                check.record("", wit);
            }
        }
    }
    Ok(check)
}

/// Multiplication entries for every class of `X•X` up to arity `k`.
fn entries(x: &ArityPresheaf, k: usize, mu: impl Fn(&SubstRaw) -> usize) -> Result<BTreeMap<SubstRaw, usize>> {
    let coend = Coend::build(x, k)?;
    Ok(coend
        .representatives()
        .into_iter()
        .flatten()
        .map(|r| {
            let v = mu(&r);
            (r, v)
        })
        .collect())
}

/// The restriction of a shape to block `i` of the arities `ns`.
fn block_of(f: &FiniteFunction, ns: &[usize], i: usize) -> FiniteFunction {
    let off: usize = ns[..i].iter().sum();
    FiniteFunction { dom: ns[i], cod: f.cod, table: f.table[off..off + ns[i]].to_vec() }
}

/// The endomorphism clone of a set with `a` elements: `En` is the set of
/// functions `a^n → a`, truncated at `n`. Elements are base-`a` digit
/// strings of their value tables, tuples `v` indexed by `Σ v_i a^i`.
pub fn end_clone(a: usize, n: usize) -> Result<OperadCandidate> {
    if a == 0 {
        return Err(Error::InvalidInput("the endomorphism clone needs a non-empty set".into()));
    }
    let powers: Vec<usize> = (0..=n).map(|k| a.pow(k as u32)).collect();
    let mut sizes = Vec::with_capacity(n + 1);
    for &p in &powers {
        let s = (a as u128).checked_pow(p as u32).filter(|&s| s <= limits::element_cap() as u128);
        match s {
            Some(s) => sizes.push(s as usize),
            None => {
                return Err(Error::CapExceeded {
                    what: "endomorphism clone".into(),
                    count: u128::MAX,
                    cap: limits::element_cap(),
                })
            }
        }
    }
    let decode = |code: usize, arity: usize| -> Vec<usize> {
        let mut c = code;
        (0..powers[arity])
            .map(|_| {
                let d = c % a;
                c /= a;
                d
            })
            .collect()
    };
    let encode = |table: &[usize]| -> usize { table.iter().rev().fold(0, |acc, &d| acc * a + d) };
    let tuple = |code: usize, arity: usize| -> Vec<usize> {
        let mut c = code;
        (0..arity)
            .map(|_| {
                let d = c % a;
                c /= a;
                d
            })
            .collect()
    };
    let code = |v: &[usize]| -> usize { v.iter().rev().fold(0, |acc, &d| acc * a + d) };
    let act = |f: &FiniteFunction, g: usize| -> usize {
        let gt = decode(g, f.dom);
        let table: Vec<usize> = (0..powers[f.cod])
            .map(|v| {
                let vt = tuple(v, f.cod);
                let pulled: Vec<usize> = f.table.iter().map(|&i| vt[i]).collect();
                gt[code(&pulled)]
            })
            .collect();
        encode(&table)
    };
    let carrier = ArityPresheaf::from_fn(Variant::FULL, n, Support::Truncated, sizes, act)?.with_labels(
        (0..=n)
            .map(|k| {
                let size = a.pow(powers[k] as u32);
                (0..size).map(|g| decode(g, k).iter().map(|d| d.to_string()).collect::<String>()).collect()
            })
            .collect(),
    );
    let unit = encode(&(0..a).collect::<Vec<_>>());
    let mult = entries(&carrier, n, |r| {
        let p = r.shape.cod;
        let ns: Vec<usize> = r.args.iter().map(|x| x.0).collect();
        let yt = decode(r.y, r.m);
        let parts: Vec<Vec<usize>> =
            r.args.iter().enumerate().map(|(i, &(_, g))| decode(act(&block_of(&r.shape, &ns, i), g), p)).collect();
        let table: Vec<usize> =
            (0..powers[p]).map(|v| yt[code(&parts.iter().map(|t| t[v]).collect::<Vec<_>>())]).collect();
        encode(&table)
    })?;
    Ok(OperadCandidate { carrier, unit, mult })
}

/// The associative operad: one operation per arity without symmetries,
/// `Sn` with them. Other variants have no such presentation here.
pub fn associative_operad(variant: Variant, n: usize) -> Result<OperadCandidate> {
    match variant.function_class() {
        FunctionClass::Identity => {
            let carrier = ArityPresheaf::from_fn(variant, n, Support::Truncated, vec![1; n + 1], |_, _| 0)?;
            if n < 1 {
                return Err(Error::InvalidInput("the unit needs arity 1".into()));
            }
            let mult = entries(&carrier, n, |_| 0)?;
            Ok(OperadCandidate { carrier, unit: 0, mult })
        }
        FunctionClass::Bijection => {
            if n < 1 {
                return Err(Error::InvalidInput("the unit needs arity 1".into()));
            }
            let words: Vec<Vec<FiniteFunction>> = (0..=n).map(|k| FunctionClass::Bijection.functions(k, k)).collect();
            let index = |w: &FiniteFunction| words[w.dom].iter().position(|u| u == w).expect("a permutation");
            let sizes = words.iter().map(Vec::len).collect();
            let labels = words
                .iter()
                .map(|ws| ws.iter().map(|w| w.table.iter().map(|d| d.to_string()).collect::<String>()).collect())
                .collect();
            let carrier = ArityPresheaf::from_fn(variant, n, Support::Truncated, sizes, |f, w| {
                index(&f.after(&words[f.dom][w]).expect("composable"))
            })?
            .with_labels(labels);
            let mult = entries(&carrier, n, |r| {
                let ns: Vec<usize> = r.args.iter().map(|a| a.0).collect();
                let off: Vec<usize> = (0..ns.len()).map(|i| ns[..i].iter().sum()).collect();
                let order = &words[r.m][r.y];
                let mut table = Vec::new();
                for &b in &order.table {
                    let (nb, wb) = r.args[b];
                    table.extend(words[nb][wb].table.iter().map(|&l| off[b] + l));
                }
                let concat = FiniteFunction { dom: table.len(), cod: table.len(), table };
                index(&r.shape.after(&concat).expect("composable"))
            })?;
            Ok(OperadCandidate { carrier, unit: 0, mult })
        }
        _ => Err(Error::InvalidInput(format!("no associative operad is provided for variant {variant}"))),
    }
}

/// One operation in every arity up to `n`, all composites equal.
pub fn terminal_operad(variant: Variant, n: usize) -> Result<OperadCandidate> {
    if n < 1 {
        return Err(Error::InvalidInput("the unit needs arity 1".into()));
    }
    let carrier = ArityPresheaf::from_fn(variant, n, Support::Truncated, vec![1; n + 1], |_, _| 0)?;
    let mult = entries(&carrier, n, |_| 0)?;
    Ok(OperadCandidate { carrier, unit: 0, mult })
}

/// The initial operad: only the unit, in arity 1. It exists only when no
/// shape leaves arity 1 for a larger one.
pub fn trivial_operad(variant: Variant) -> Result<OperadCandidate> {
    let class = variant.function_class();
    if !class.functions(1, 2).is_empty() {
        return Err(Error::InvalidInput(format!(
            "variant {variant} maps arity 1 into arity 2, so the unit alone is not a presheaf"
        )));
    }
    let carrier = ArityPresheaf::from_fn(variant, 1, Support::Finite, vec![0, 1], |_, _| 0)?;
    let mult = entries(&carrier, 1, |_| 0)?;
    Ok(OperadCandidate { carrier, unit: 0, mult })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endomorphism_clone_sizes() {
        let e = end_clone(2, 2).unwrap();
        assert_eq!(e.carrier.sizes(), &[2, 4, 16]);
        // unary operations on a two-element set compose like maps 2 → 2
        let unary: Vec<usize> = (0..4).collect();
        let mut found = 0;
        for &f in &unary {
            for &g in &unary {
                let r = SubstRaw { m: 1, y: f, args: vec![(1, g)], shape: FiniteFunction::identity(1) };
                let c = e.mult.iter().find(|(k, _)| **k == r).map(|(_, &v)| v);
                if let Some(v) = c {
                    found += 1;
                    let ft = [f % 2, f / 2];
                    let gt = [g % 2, g / 2];
                    assert_eq!(v, ft[gt[0]] + 2 * ft[gt[1]]);
                }
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn known_operads_pass() {
        for cand in [
            associative_operad(Variant::EMPTY, 3).unwrap(),
            associative_operad(Variant::SIGMA, 3).unwrap(),
            terminal_operad(Variant::SIGMA_DELTA, 3).unwrap(),
            trivial_operad(Variant::SIGMA).unwrap(),
            end_clone(2, 2).unwrap(),
        ] {
            let k = cand.carrier.truncation();
            let r = monoid_check(&cand, k).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn corrupted_table_fails() {
        let mut cand = associative_operad(Variant::SIGMA, 3).unwrap();
        let key = cand.mult.keys().find(|r| r.shape.cod == 3 && r.m == 2).unwrap().clone();
        let v = cand.mult[&key];
        cand.mult.insert(key, (v + 1) % 6);
        assert!(!monoid_check(&cand, 3).unwrap().passed());
    }

    #[test]
    fn trivial_is_rejected_with_injections() {
        assert!(trivial_operad(Variant::EPSILON).is_err());
        assert!(trivial_operad(Variant::FULL).is_err());
    }
}
