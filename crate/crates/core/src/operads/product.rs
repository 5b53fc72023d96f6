//! Coends over arities: the Day tensor, the substitution product, its
//! clone form and analytic functors, each under the truncation policy.
//!
//! With finitely supported inputs every index range is finite and the
//! results are exact. With truncated inputs a coend is computed with index
//! arities bounded by `B` and by `B + 1`, and the two must agree classwise;
//! `B + 1` is the largest arity with supplied data.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Debug};
use std::sync::{Arc, RwLock};

use serde::Serialize;

use super::{compose_generated, ArityPresheaf, Support};
use crate::bang::ListCategory;
use crate::cokleisli::cokleisli_compose;
use crate::diagrams::{FiniteFunction, FunctionClass, Variant};
use crate::fincat::{compare, induced_map, tuples, FinCategory, QuotientBuilder, QuotientSet};
use crate::laws::{LawCheck, Report};
use crate::prof::FiniteProfunctor;
use crate::{limits, sweep, Error, Result};

/// Raw element of an iterated Day tensor: one `(arity, element)` per
/// factor and a shape from the summed arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TensorRaw {
    pub args: Vec<(usize, usize)>,
    pub shape: FiniteFunction,
}

/// Raw element `(y; (n_1, x_1), …, (n_m, x_m); f)` of `(Y•X)p` with
/// `y ∈ Ym`, `x_i ∈ Xn_i` and `f: n_1 + … + n_m → p`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SubstRaw {
    pub m: usize,
    pub y: usize,
    pub args: Vec<(usize, usize)>,
    pub shape: FiniteFunction,
}

/// Raw element `(y; s_1, …, s_m)` of the clone form `∫^m Ym × (Xp)^m`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CloneRaw {
    pub m: usize,
    pub y: usize,
    pub args: Vec<usize>,
}

/// Raw element `(s, x)` of `∫^m z^m × Xm` with `s ∈ z^m`, `x ∈ Xm`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AnalyticRaw {
    pub m: usize,
    pub tuple: Vec<usize>,
    pub elem: usize,
}

impl fmt::Display for SubstRaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}(", self.m, self.y)?;
        for (i, (n, x)) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}.{x}")?;
        }
        write!(f, ") then [{}] → {}", join(&self.shape.table), self.shape.cod)
    }
}

impl fmt::Display for CloneRaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}({})", self.m, self.y, join(&self.args))
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// A presheaf computed as a coend, with the fiber at each arity.
#[derive(Debug, Clone)]
pub struct ArityQuotient<T> {
    pub presheaf: ArityPresheaf,
    pub fibers: Vec<QuotientSet<T>>,
}

impl<T> ArityQuotient<T> {
    pub fn sizes(&self) -> &[usize] {
        self.presheaf.sizes()
    }
}

/// Number of class members `{0..n-1} → {0..p-1}`.
pub fn class_count(class: FunctionClass, n: usize, p: usize) -> u128 {
    let binom = |a: usize, b: usize| -> u128 {
        if b > a {
            return 0;
        }
        let mut r: u128 = 1;
        for i in 0..b {
            r = r * (a - i) as u128 / (i + 1) as u128;
        }
        r
    };
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    match class {
        FunctionClass::Identity => u128::from(n == p),
        FunctionClass::Bijection => {
            if n == p {
                fact(n)
            } else {
                0
            }
        }
        FunctionClass::All => (p as u128).saturating_pow(n as u32),
        FunctionClass::Monotone => {
            if p == 0 {
                u128::from(n == 0)
            } else {
                binom(n + p - 1, n)
            }
        }
        FunctionClass::Surjection => {
            // p! S(n, p)
            let mut s = vec![vec![0u128; p + 1]; n + 1];
            s[0][0] = 1;
            for i in 1..=n {
                for j in 1..=p.min(i) {
                    s[i][j] = (j as u128).saturating_mul(s[i - 1][j]).saturating_add(s[i - 1][j - 1]);
                }
            }
            fact(p).saturating_mul(s[n][p])
        }
        FunctionClass::Injection => {
            if n > p {
                0
            } else {
                ((p - n + 1)..=p).map(|k| k as u128).product()
            }
        }
        FunctionClass::MonotoneInjection => binom(p, n),
        FunctionClass::MonotoneSurjection => match (n, p) {
            (0, 0) => 1,
            (0, _) | (_, 0) => 0,
            _ => binom(n - 1, p - 1),
        },
    }
}

/// True when every shape `n → p` has `p ≤ n`, so finitely supported
/// inputs give finitely supported results.
fn shrinking(class: FunctionClass) -> bool {
    matches!(
        class,
        FunctionClass::Identity
            | FunctionClass::Bijection
            | FunctionClass::Surjection
            | FunctionClass::MonotoneSurjection
    )
}

/// Lazily enumerated shapes of a class.
pub(crate) struct Shapes {
    class: FunctionClass,
    cache: RwLock<HashMap<(usize, usize), Arc<Vec<FiniteFunction>>>>,
}

impl Shapes {
    pub(crate) fn new(v: Variant) -> Self {
        Shapes { class: v.function_class(), cache: RwLock::new(HashMap::new()) }
    }

    pub(crate) fn get(&self, n: usize, p: usize) -> Arc<Vec<FiniteFunction>> {
        if let Some(s) = self.cache.read().expect("shape cache").get(&(n, p)) {
            return Arc::clone(s);
        }
        let s = Arc::new(self.class.functions(n, p));
        Arc::clone(self.cache.write().expect("shape cache").entry((n, p)).or_insert(s))
    }
}

fn offsets(ns: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(ns.len());
    let mut acc = 0;
    for &n in ns {
        out.push(acc);
        acc += n;
    }
    out
}

/// `f ∘ (id + u + id)`, where `u` lands in block `slot` of the arities `ns`.
fn reslot(f: &FiniteFunction, ns: &[usize], slot: usize, u: &FiniteFunction) -> FiniteFunction {
    let off = offsets(ns);
    let mut table = Vec::new();
    for (i, &n) in ns.iter().enumerate() {
        if i == slot {
            table.extend(u.table.iter().map(|&k| f.table[off[i] + k]));
        } else {
            table.extend((0..n).map(|k| f.table[off[i] + k]));
        }
    }
    FiniteFunction { dom: table.len(), cod: f.cod, table }
}

/// `f ∘ block(t)`, where block `j` of the new domain is block `t(j)` of `ns`.
fn reblock(f: &FiniteFunction, ns: &[usize], t: &FiniteFunction) -> FiniteFunction {
    let off = offsets(ns);
    let mut table = Vec::new();
    for j in 0..t.dom {
        let b = t.apply(j);
        table.extend((0..ns[b]).map(|k| f.table[off[b] + k]));
    }
    FiniteFunction { dom: table.len(), cod: f.cod, table }
}

/// The restriction of `f` to block `i` of `ns`.
fn block(f: &FiniteFunction, ns: &[usize], i: usize) -> FiniteFunction {
    let off = offsets(ns)[i];
    FiniteFunction { dom: ns[i], cod: f.cod, table: f.table[off..off + ns[i]].to_vec() }
}

fn pairs(x: &ArityPresheaf, bound: usize) -> Vec<(usize, usize)> {
    x.arities(bound).into_iter().flat_map(|n| (0..x.size(n)).map(move |e| (n, e))).collect()
}

fn same_variant(xs: &[&ArityPresheaf]) -> Result<()> {
    if let Some(first) = xs.first() {
        if let Some(other) = xs.iter().find(|x| x.variant() != first.variant()) {
            return Err(Error::Mismatch(format!("variants {} and {} differ", first.variant(), other.variant())));
        }
    }
    Ok(())
}

/// Compares the coend at index bounds `lo` and `hi`; the raw elements at
/// `lo` are among those at `hi`.
fn stable<T, F>(what: &str, lo: Option<usize>, hi: usize, f: F) -> Result<QuotientSet<T>>
where
    T: Ord + Clone + Debug,
    F: Fn(usize) -> Result<QuotientSet<T>>,
{
    let top = f(hi)?;
    if let Some(lo) = lo.filter(|&l| l < hi) {
        let bottom = f(lo)?;
        if !compare(&bottom, &top, |r| Ok(r.clone())).is_bijection() {
            return Err(Error::NonStabilizing(format!(
                "{what}: {} classes with index arities ≤ {lo}, {} with index arities ≤ {hi}",
                bottom.len(),
                top.len()
            )));
        }
    }
    Ok(top)
}

/// The index bounds compared for truncated inputs: the largest supplied
/// arity and the one below it.
fn truncated_bounds(truncated: &[&ArityPresheaf]) -> Result<Option<(usize, usize)>> {
    let Some(hi) = truncated.iter().map(|x| x.truncation()).min() else { return Ok(None) };
    if hi == 0 {
        return Err(Error::NonStabilizing("data stops at arity 0, so there is nothing to compare".into()));
    }
    Ok(Some((hi - 1, hi)))
}

/// Tabulates the induced action of the generating shapes and composes.
fn assemble<T, A>(
    variant: Variant,
    k: usize,
    support: Support,
    fibers: Vec<QuotientSet<T>>,
    act: A,
) -> Result<ArityQuotient<T>>
where
    T: Ord + Clone + Debug,
    A: Fn(&FiniteFunction, &T) -> T,
{
    let mut generators = Vec::new();
    for g in variant.function_class().generators(k) {
        let t = induced_map(&fibers[g.dom], &fibers[g.cod], |r| Ok(act(&g, r)))?;
        generators.push((g, t));
    }
    let sizes: Vec<usize> = fibers.iter().map(QuotientSet::len).collect();
    let mut actions = compose_generated(k, &sizes, &generators)?;
    actions.retain(|f, _| !f.is_identity());
    let presheaf = ArityPresheaf::from_tables(variant, k, support, sizes, actions)?;
    Ok(ArityQuotient { presheaf, fibers })
}

/// Quotients `raw` by the relations `relate` generates from each raw
/// element.
fn finish<T: Ord + Clone + Debug>(
    what: &str,
    raw: Vec<T>,
    relate: impl Fn(&T, &mut Vec<(T, T)>),
) -> Result<QuotientSet<T>> {
    let mut b = QuotientBuilder::with_cap(what, raw)?;
    let mut rel = Vec::new();
    for i in 0..b.raw().len() {
        let r = b.raw()[i].clone();
        relate(&r, &mut rel);
        for (l, r) in rel.drain(..) {
            b.relate(&l, &r)?;
        }
    }
    Ok(b.finish())
}

/// Every shape factors through one of the class into an arity no larger
/// than its codomain, followed by one of the class.
fn factor_closed(class: FunctionClass) -> bool {
    !matches!(class, FunctionClass::Surjection | FunctionClass::MonotoneSurjection)
}

/// Shapes never lower arity.
fn injective_class(class: FunctionClass) -> bool {
    matches!(
        class,
        FunctionClass::Identity
            | FunctionClass::Bijection
            | FunctionClass::Injection
            | FunctionClass::MonotoneInjection
    )
}

/// `f = i ∘ s` through the sorted image of `f`; both factors lie in every
/// factor-closed class that contains `f`.
fn image_factor(f: &FiniteFunction) -> (FiniteFunction, FiniteFunction) {
    let mut image = f.table.clone();
    image.sort_unstable();
    image.dedup();
    let s = f.table.iter().map(|v| image.binary_search(v).expect("in the image")).collect();
    let r = image.len();
    (FiniteFunction { dom: f.dom, cod: r, table: s }, FiniteFunction { dom: r, cod: f.cod, table: image })
}

/// Replaces every argument of arity above the output arity by its image
/// under the surjective part of its block, so raw elements stay within
/// the index bounds of their fiber.
fn reduce_slots<'a>(
    slot_presheaf: impl Fn(usize) -> &'a ArityPresheaf,
    args: &[(usize, usize)],
    shape: &FiniteFunction,
) -> (Vec<(usize, usize)>, FiniteFunction) {
    let p = shape.cod;
    if args.iter().all(|a| a.0 <= p) {
        return (args.to_vec(), shape.clone());
    }
    let ns: Vec<usize> = args.iter().map(|a| a.0).collect();
    let mut out = Vec::with_capacity(args.len());
    let mut table = Vec::with_capacity(shape.dom);
    for (i, &(n, a)) in args.iter().enumerate() {
        let f = block(shape, &ns, i);
        if n <= p {
            out.push((n, a));
            table.extend(f.table);
        } else {
            let (s, inc) = image_factor(&f);
            out.push((s.cod, slot_presheaf(i).act(&s, a)));
            table.extend(inc.table);
        }
    }
    (out, FiniteFunction { dom: table.len(), cod: p, table })
}

/// The raw element of `Y•X` with arguments reduced to the index bounds
/// used by [`subst`] and [`subst_supplied`].
pub(crate) fn normalize_subst(x: &ArityPresheaf, r: &SubstRaw) -> SubstRaw {
    if !factor_closed(x.variant().function_class()) {
        return r.clone();
    }
    let (args, shape) = reduce_slots(|_| x, &r.args, &r.shape);
    SubstRaw { m: r.m, y: r.y, args, shape }
}

fn data_at(x: &ArityPresheaf, p: usize, what: &str) -> Result<()> {
    if !x.is_finite() && p > x.truncation() {
        return Err(Error::InvalidInput(format!(
            "{what} at arity {p} needs data above the truncation {}",
            x.truncation()
        )));
    }
    Ok(())
}

fn tensor_at(
    factors: &[&ArityPresheaf],
    bounds: &[usize],
    p: usize,
    shapes: &Shapes,
) -> Result<QuotientSet<TensorRaw>> {
    let slots: Vec<Vec<(usize, usize)>> = factors.iter().zip(bounds).map(|(x, &b)| pairs(x, b)).collect();
    let combos = tuples(&slots.iter().map(Vec::len).collect::<Vec<_>>());
    let mut count: u128 = 0;
    for c in &combos {
        let total: usize = c.iter().enumerate().map(|(i, &j)| slots[i][j].0).sum();
        count += class_count(shapes.class, total, p);
    }
    limits::check("Day tensor", count)?;
    let mut raw = Vec::new();
    for c in &combos {
        let args: Vec<(usize, usize)> = c.iter().enumerate().map(|(i, &j)| slots[i][j]).collect();
        let total = args.iter().map(|a| a.0).sum();
        for f in shapes.get(total, p).iter() {
            raw.push(TensorRaw { args: args.clone(), shape: f.clone() });
        }
    }
    finish("Day tensor", raw, |r, rel| {
        let ns: Vec<usize> = r.args.iter().map(|a| a.0).collect();
        for (i, &(n, e)) in r.args.iter().enumerate() {
            if e != 0 {
                continue;
            }
            let x = factors[i];
            for d in x.arities(bounds[i]) {
                for u in shapes.get(d, n).iter().filter(|u| !u.is_identity()) {
                    let shape = reslot(&r.shape, &ns, i, u);
                    for a in 0..x.size(d) {
                        let mut la = r.args.clone();
                        la[i] = (d, a);
                        let mut ra = r.args.clone();
                        ra[i] = (n, x.act(u, a));
                        rel.push((
                            TensorRaw { args: la, shape: shape.clone() },
                            TensorRaw { args: ra, shape: r.shape.clone() },
                        ));
                    }
                }
            }
        }
    })
}

/// `(X_1 ⊗ … ⊗ X_m)p = ∫^{n_1…n_m} X_1n_1 × … × X_mn_m × ?1[n_1+…+n_m, p]`
/// for `p ≤ k`; no factors gives the unit `J`.
pub fn tensor(variant: Variant, factors: &[&ArityPresheaf], k: usize) -> Result<ArityQuotient<TensorRaw>> {
    same_variant(factors)?;
    if let Some(x) = factors.first() {
        if x.variant() != variant {
            return Err(Error::Mismatch(format!("variants {variant} and {} differ", x.variant())));
        }
    }
    let shapes = Shapes::new(variant);
    let closed = factor_closed(variant.function_class());
    let truncated: Vec<&ArityPresheaf> = factors.iter().copied().filter(|x| !x.is_finite()).collect();
    let plan = if closed { None } else { truncated_bounds(&truncated)? };
    let bounds = |p: usize, b: usize| -> Vec<usize> {
        factors
            .iter()
            .map(|x| match (x.is_finite(), closed) {
                (_, true) => x.truncation().min(p),
                (true, false) => x.truncation(),
                (false, false) => b.min(x.truncation()),
            })
            .collect()
    };
    let arities: Vec<usize> = (0..=k).collect();
    let fibers = sweep::map(&arities, |&p| {
        if closed {
            for x in &truncated {
                data_at(x, p, "the Day tensor")?;
            }
        }
        match plan {
            None => tensor_at(factors, &bounds(p, usize::MAX), p, &shapes),
            Some((lo, hi)) => stable(&format!("Day tensor at arity {p}"), Some(lo), hi, |b| {
                tensor_at(factors, &bounds(p, b), p, &shapes)
            }),
        }
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let out_bound: usize = factors.iter().map(|x| x.max_arity().unwrap_or(0)).sum();
    let finite = factors.iter().all(|x| x.is_finite())
        && (shrinking(variant.function_class()) || factors.iter().any(|x| x.max_arity().is_none()))
        && k >= out_bound;
    let support = if finite { Support::Finite } else { Support::Truncated };
    assemble(variant, k, support, fibers, |g, r| {
        let shape = g.after(&r.shape).expect("composable");
        if closed {
            let (args, shape) = reduce_slots(|i| factors[i], &r.args, &shape);
            TensorRaw { args, shape }
        } else {
            TensorRaw { args: r.args.clone(), shape }
        }
    })
}

/// `X ⊗ Y`. Finitely supported inputs in a class without injections are
/// computed up to the sum of their top arities; otherwise up to the
/// smaller truncation.
pub fn day_tensor(x: &ArityPresheaf, y: &ArityPresheaf) -> Result<ArityQuotient<TensorRaw>> {
    same_variant(&[x, y])?;
    let k = if x.is_finite() && y.is_finite() && shrinking(x.variant().function_class()) {
        x.max_arity().unwrap_or(0) + y.max_arity().unwrap_or(0)
    } else {
        x.truncation().min(y.truncation())
    };
    tensor(x.variant(), &[x, y], k)
}

/// `X^{⊗m}` up to arity `k`.
pub fn tensor_power(x: &ArityPresheaf, m: usize, k: usize) -> Result<ArityQuotient<TensorRaw>> {
    let factors = vec![x; m];
    tensor(x.variant(), &factors, k)
}

/// The unit of the Day tensor, `Jp = ?1[0, p]`.
pub fn day_unit(variant: Variant, k: usize) -> ArityPresheaf {
    let class = variant.function_class();
    let sizes = (0..=k).map(|p| class_count(class, 0, p) as usize).collect();
    let support = if shrinking(class) { Support::Finite } else { Support::Truncated };
    ArityPresheaf::from_fn(variant, k, support, sizes, |_, _| 0).expect("the unit is functorial")
}

/// The substitution unit `In = ?1[1, n]`; element `i` of `In` is the
/// `i`-th shape `1 → n` of the class.
pub fn subst_unit(variant: Variant, k: usize) -> ArityPresheaf {
    let class = variant.function_class();
    let k = k.max(1);
    let shapes: Vec<Vec<FiniteFunction>> = (0..=k).map(|p| class.functions(1, p)).collect();
    let sizes = shapes.iter().map(Vec::len).collect();
    let support = if shrinking(class) { Support::Finite } else { Support::Truncated };
    ArityPresheaf::from_fn(variant, k, support, sizes, |g, i| {
        let h = g.after(&shapes[g.dom][i]).expect("composable");
        shapes[g.cod].iter().position(|s| *s == h).expect("class is closed under composition")
    })
    .expect("the unit is functorial")
}

fn subst_at(
    y: &ArityPresheaf,
    x: &ArityPresheaf,
    bm: usize,
    bn: usize,
    p: usize,
    shapes: &Shapes,
) -> Result<QuotientSet<SubstRaw>> {
    let slot = pairs(x, bn);
    let ms = y.arities(bm);
    let mut count: u128 = 0;
    for &m in &ms {
        for c in tuples(&vec![slot.len(); m]) {
            let total: usize = c.iter().map(|&j| slot[j].0).sum();
            count += y.size(m) as u128 * class_count(shapes.class, total, p);
        }
    }
    limits::check("substitution product", count)?;
    let mut raw = Vec::new();
    for &m in &ms {
        for c in tuples(&vec![slot.len(); m]) {
            let args: Vec<(usize, usize)> = c.iter().map(|&j| slot[j]).collect();
            let total = args.iter().map(|a| a.0).sum();
            let fs = shapes.get(total, p);
            for yy in 0..y.size(m) {
                for f in fs.iter() {
                    raw.push(SubstRaw { m, y: yy, args: args.clone(), shape: f.clone() });
                }
            }
        }
    }
    finish("substitution product", raw, |r, rel| {
        {
            let ns: Vec<usize> = r.args.iter().map(|a| a.0).collect();
            // X acting in one slot
            for (i, &(n, e)) in r.args.iter().enumerate() {
                if e != 0 {
                    continue;
                }
                for d in x.arities(bn) {
                    for u in shapes.get(d, n).iter().filter(|u| !u.is_identity()) {
                        let shape = reslot(&r.shape, &ns, i, u);
                        for a in 0..x.size(d) {
                            let mut la = r.args.clone();
                            la[i] = (d, a);
                            let mut ra = r.args.clone();
                            ra[i] = (n, x.act(u, a));
                            rel.push((
                                SubstRaw { m: r.m, y: r.y, args: la, shape: shape.clone() },
                                SubstRaw { m: r.m, y: r.y, args: ra, shape: r.shape.clone() },
                            ));
                        }
                    }
                }
            }
            // Y acting, the argument blocks reindexed
            if r.y != 0 {
                return;
            }
            for &m1 in &ms {
                for t in shapes.get(m1, r.m).iter().filter(|t| !t.is_identity()) {
                    let args: Vec<(usize, usize)> = (0..m1).map(|j| r.args[t.apply(j)]).collect();
                    let shape = reblock(&r.shape, &ns, t);
                    for y1 in 0..y.size(m1) {
                        rel.push((
                            SubstRaw { m: m1, y: y1, args: args.clone(), shape: shape.clone() },
                            SubstRaw { m: r.m, y: y.act(t, y1), args: r.args.clone(), shape: r.shape.clone() },
                        ));
                    }
                }
            }
        }
    })
}

fn subst_support(y: &ArityPresheaf, x: &ArityPresheaf, k: usize) -> Support {
    let empty = y.max_arity().is_none();
    let bound = y.max_arity().unwrap_or(0) * x.max_arity().unwrap_or(0);
    if y.is_finite() && x.is_finite() && (shrinking(y.variant().function_class()) || empty) && k >= bound {
        Support::Finite
    } else {
        Support::Truncated
    }
}

fn subst_quotient(
    y: &ArityPresheaf,
    x: &ArityPresheaf,
    k: usize,
    fibers: Vec<QuotientSet<SubstRaw>>,
) -> Result<ArityQuotient<SubstRaw>> {
    assemble(y.variant(), k, subst_support(y, x, k), fibers, |g, r| {
        normalize_subst(
            x,
            &SubstRaw { m: r.m, y: r.y, args: r.args.clone(), shape: g.after(&r.shape).expect("composable") },
        )
    })
}

/// `(Y•X)p = ∫^{m, n_1…n_m} Ym × Xn_1 × … × Xn_m × ?1[n_1+…+n_m, p]` for
/// `p ≤ k`, under the truncation policy. Reindexing the argument blocks
/// along a shape stays in the class only for monad-enabled variants.
pub fn subst(y: &ArityPresheaf, x: &ArityPresheaf, k: usize) -> Result<ArityQuotient<SubstRaw>> {
    same_variant(&[y, x])?;
    y.variant().require_monad()?;
    let class = y.variant().function_class();
    let (inj, closed) = (injective_class(class), factor_closed(class));
    if !y.is_finite() && inj && x.size(0) > 0 {
        return Err(Error::Unbounded(
            "nullary elements of X with truncated data leave the number of arguments unbounded".into(),
        ));
    }
    // bounds that hold exactly, and those that must stabilize
    let m_stable = !y.is_finite() && !inj;
    let n_stable = !x.is_finite() && !closed;
    let mut moving = Vec::new();
    if m_stable {
        moving.push(y);
    }
    if n_stable {
        moving.push(x);
    }
    let plan = truncated_bounds(&moving)?;
    let shapes = Shapes::new(y.variant());
    let bm = |p: usize, b: usize| if m_stable { b } else { index_bound_m(y, x, p) };
    let bn = |p: usize, b: usize| if n_stable { b } else { index_bound_n(x, p) };
    let arities: Vec<usize> = (0..=k).collect();
    let fibers = sweep::map(&arities, |&p| {
        if inj && !y.is_finite() {
            data_at(y, p, "substitution")?;
        }
        if closed && !x.is_finite() {
            data_at(x, p, "substitution")?;
        }
        match plan {
            None => subst_at(y, x, bm(p, 0), bn(p, 0), p, &shapes),
            Some((lo, hi)) => stable(&format!("substitution at arity {p}"), Some(lo), hi, |b| {
                subst_at(y, x, bm(p, b), bn(p, b), p, &shapes)
            }),
        }
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    subst_quotient(y, x, k, fibers)
}

/// Largest operation arity that can occur at output arity `p`: without
/// nullary arguments, injective shapes allow at most `p` arguments.
fn index_bound_m(y: &ArityPresheaf, x: &ArityPresheaf, p: usize) -> usize {
    if injective_class(y.variant().function_class()) && x.size(0) == 0 {
        y.truncation().min(p)
    } else {
        y.truncation()
    }
}

/// Largest argument arity needed at output arity `p`: with image
/// factorizations every class has a representative with arguments of
/// arity at most `p`.
fn index_bound_n(x: &ArityPresheaf, p: usize) -> usize {
    if factor_closed(x.variant().function_class()) {
        x.truncation().min(p)
    } else {
        x.truncation()
    }
}

/// The coend over exactly the supplied arities, with no claim about data
/// above the truncations. Exact for finitely supported inputs.
pub fn subst_supplied(y: &ArityPresheaf, x: &ArityPresheaf, k: usize) -> Result<ArityQuotient<SubstRaw>> {
    same_variant(&[y, x])?;
    y.variant().require_monad()?;
    let shapes = Shapes::new(y.variant());
    let arities: Vec<usize> = (0..=k).collect();
    let fibers = sweep::map(&arities, |&p| subst_at(y, x, index_bound_m(y, x, p), index_bound_n(x, p), p, &shapes))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    subst_quotient(y, x, k, fibers)
}

fn clone_at(
    y: &ArityPresheaf,
    x: &ArityPresheaf,
    bm: usize,
    p: usize,
    shapes: &Shapes,
) -> Result<QuotientSet<CloneRaw>> {
    let s = x.size(p);
    let ms = y.arities(bm);
    let count: u128 = ms.iter().map(|&m| y.size(m) as u128 * (s as u128).saturating_pow(m as u32)).sum();
    limits::check("clone substitution", count)?;
    let mut raw = Vec::new();
    for &m in &ms {
        for args in tuples(&vec![s; m]) {
            for yy in 0..y.size(m) {
                raw.push(CloneRaw { m, y: yy, args: args.clone() });
            }
        }
    }
    finish("clone substitution", raw, |r, rel| {
        if r.y == 0 {
            for &m1 in &ms {
                for t in shapes.get(m1, r.m).iter().filter(|t| !t.is_identity()) {
                    let args: Vec<usize> = (0..m1).map(|j| r.args[t.apply(j)]).collect();
                    for y1 in 0..y.size(m1) {
                        rel.push((
                            CloneRaw { m: m1, y: y1, args: args.clone() },
                            CloneRaw { m: r.m, y: y.act(t, y1), args: r.args.clone() },
                        ));
                    }
                }
            }
        }
    })
}

fn clone_quotient(
    y: &ArityPresheaf,
    x: &ArityPresheaf,
    k: usize,
    fibers: Vec<QuotientSet<CloneRaw>>,
) -> Result<ArityQuotient<CloneRaw>> {
    assemble(y.variant(), k, Support::Truncated, fibers, |g, r| CloneRaw {
        m: r.m,
        y: r.y,
        args: r.args.iter().map(|&s| x.act(g, s)).collect(),
    })
}

fn require_clone(v: Variant) -> Result<()> {
    if v.function_class() != FunctionClass::All {
        return Err(Error::InvalidInput(format!("the clone form needs all functions as shapes, not variant {v}")));
    }
    Ok(())
}

fn require_data(x: &ArityPresheaf, k: usize) -> Result<()> {
    if !x.is_finite() && k > x.truncation() {
        return Err(Error::InvalidInput(format!(
            "arity {k} lies above the truncation {} of the arguments",
            x.truncation()
        )));
    }
    Ok(())
}

/// The clone form `(Y•X)p = ∫^m Ym × (Xp)^m`. With `Y` truncated at `N`
/// the index bound is `|Xp|` when `N ≥ |Xp|` (every element has a
/// representative with an injective tuple), compared against `N`;
/// otherwise `N − 1` is compared against `N`.
pub fn subst_clone(y: &ArityPresheaf, x: &ArityPresheaf, k: usize) -> Result<ArityQuotient<CloneRaw>> {
    same_variant(&[y, x])?;
    require_clone(y.variant())?;
    require_data(x, k)?;
    let shapes = Shapes::new(y.variant());
    let arities: Vec<usize> = (0..=k).collect();
    let n = y.truncation();
    let fibers = sweep::map(&arities, |&p| {
        if y.is_finite() {
            return clone_at(y, x, n, p, &shapes);
        }
        let s = x.size(p);
        let (lo, hi) = if n >= s {
            (Some(s), n)
        } else if n == 0 {
            return Err(Error::NonStabilizing("data stops at arity 0, so there is nothing to compare".into()));
        } else {
            (Some(n - 1), n)
        };
        stable(&format!("clone substitution at arity {p}"), lo, hi, |b| clone_at(y, x, b, p, &shapes))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    clone_quotient(y, x, k, fibers)
}

/// The clone form over the supplied arities of `Y`, without stabilization.
pub(crate) fn subst_clone_supplied(y: &ArityPresheaf, x: &ArityPresheaf, k: usize) -> Result<ArityQuotient<CloneRaw>> {
    same_variant(&[y, x])?;
    require_clone(y.variant())?;
    require_data(x, k)?;
    let shapes = Shapes::new(y.variant());
    let arities: Vec<usize> = (0..=k).collect();
    let fibers = sweep::map(&arities, |&p| clone_at(y, x, y.truncation(), p, &shapes))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    clone_quotient(y, x, k, fibers)
}

/// The clone-form raw element of a general one: `(a_i, f) ↦ X(f_i)(a_i)`.
pub(crate) fn clone_form(x: &ArityPresheaf, r: &SubstRaw) -> CloneRaw {
    let ns: Vec<usize> = r.args.iter().map(|a| a.0).collect();
    CloneRaw {
        m: r.m,
        y: r.y,
        args: r.args.iter().enumerate().map(|(i, &(_, a))| x.act(&block(&r.shape, &ns, i), a)).collect(),
    }
}

fn analytic_at(x: &ArityPresheaf, z: usize, bound: usize) -> Result<QuotientSet<AnalyticRaw>> {
    let ms = x.arities(bound);
    let count: u128 = ms.iter().map(|&m| x.size(m) as u128 * (z as u128).saturating_pow(m as u32)).sum();
    limits::check("analytic functor", count)?;
    let mut raw = Vec::new();
    for &m in &ms {
        for tuple in tuples(&vec![z; m]) {
            for e in 0..x.size(m) {
                raw.push(AnalyticRaw { m, tuple: tuple.clone(), elem: e });
            }
        }
    }
    let gens = x.variant().function_class().generators(bound);
    finish("analytic functor", raw, |r, rel| {
        if r.elem != 0 {
            return;
        }
        let (m2, s) = (r.m, &r.tuple);
        for u in gens.iter().filter(|u| u.cod == m2) {
            let (m, pulled): (usize, Vec<usize>) = (u.dom, u.table.iter().map(|&i| s[i]).collect());
            for e in 0..x.size(m) {
                rel.push((
                    AnalyticRaw { m, tuple: pulled.clone(), elem: e },
                    AnalyticRaw { m: m2, tuple: s.clone(), elem: x.act(u, e) },
                ));
            }
        }
    })
}

/// `Lan_⊆ X z = ∫^m z^m × Xm` for a set `z` of the given size. With
/// truncated data the clone and surjection classes use the index bound
/// `|z|` when the data reaches it; otherwise the two top bounds are
/// compared.
pub fn analytic_eval(x: &ArityPresheaf, z: usize) -> Result<QuotientSet<AnalyticRaw>> {
    let n = x.truncation();
    if x.is_finite() {
        return analytic_at(x, z, n);
    }
    let factorizes = matches!(x.variant().function_class(), FunctionClass::All | FunctionClass::Surjection);
    let (lo, hi) = if factorizes && n >= z {
        (Some(z), n)
    } else if n == 0 {
        return Err(Error::NonStabilizing("data stops at arity 0, so there is nothing to compare".into()));
    } else {
        (Some(n - 1), n)
    };
    stable("analytic functor", lo, hi, |b| analytic_at(x, z, b))
}

/// Raw-element estimate for `subst(y, x, k)` over the supplied arities.
pub fn subst_cost(y: &ArityPresheaf, x: &ArityPresheaf, k: usize) -> u128 {
    let class = y.variant().function_class();
    let mut total: u128 = 0;
    for p in 0..=k {
        let nx = index_bound_n(x, p);
        for m in y.arities(index_bound_m(y, x, p)) {
            // ways[t]: argument lists of m elements with total arity t
            let mut ways: Vec<u128> = vec![1];
            for _ in 0..m {
                let mut next = vec![0u128; ways.len() + nx];
                for (t, &w) in ways.iter().enumerate() {
                    for n in x.arities(nx) {
                        next[t + n] = next[t + n].saturating_add(w.saturating_mul(x.size(n) as u128));
                    }
                }
                ways = next;
            }
            for (t, &w) in ways.iter().enumerate() {
                total = total
                    .saturating_add((y.size(m) as u128).saturating_mul(w).saturating_mul(class_count(class, t, p)));
            }
        }
    }
    total
}

/// Relation-count estimate for `analytic_eval(x, z)`.
pub fn analytic_cost(x: &ArityPresheaf, z: usize) -> u128 {
    let class = x.variant().function_class();
    let ms = x.arities(x.truncation());
    let mut total: u128 = 0;
    for &m in &ms {
        for &m2 in &ms {
            total = total.saturating_add(
                (x.size(m) as u128)
                    .saturating_mul(class_count(class, m, m2))
                    .saturating_mul((z as u128).saturating_pow(m2 as u32)),
            );
        }
    }
    total
}

/// `X` as a profunctor `?1 ⇸ 1` on the lists of `q1`.
pub fn to_profunctor(x: &ArityPresheaf, q1: &ListCategory) -> Result<FiniteProfunctor> {
    if q1.base().object_count() != 1 {
        return Err(Error::Mismatch("arity presheaves live over lists of the one-object category".into()));
    }
    let longest = q1.lists().iter().map(Vec::len).max().unwrap_or(0);
    if !x.is_finite() && longest > x.truncation() {
        return Err(Error::InvalidInput(format!("lists of length {longest} exceed the truncation {}", x.truncation())));
    }
    FiniteProfunctor::from_fn(
        Arc::clone(q1.category()),
        Arc::clone(q1.base()),
        |a, _| x.size(q1.list(a).len()),
        |u, _, e| x.act(&q1.morphism(u).shape, e),
        |_, _, e| e,
    )
}

/// The arity presheaf of a profunctor `?1 ⇸ 1` given on the lists of `q1`.
pub fn from_profunctor(
    variant: Variant,
    phi: &FiniteProfunctor,
    q1: &ListCategory,
    support: Support,
) -> Result<ArityPresheaf> {
    let longest = q1.lists().iter().map(Vec::len).max().unwrap_or(0);
    let object =
        |n: usize| q1.object_of(&vec![0; n]).ok_or_else(|| Error::InvalidInput(format!("no list of length {n}")));
    let sizes = (0..=longest).map(|n| object(n).map(|o| phi.size(o, 0))).collect::<Result<Vec<_>>>()?;
    let mors: BTreeMap<FiniteFunction, usize> =
        (0..q1.category().morphism_count()).map(|u| (q1.morphism(u).shape.clone(), u)).collect();
    ArityPresheaf::from_fn(variant, longest, support, sizes, |f, e| {
        let u = mors[f];
        phi.left[u][0][e]
    })
}

/// Witnesses of disagreement between `(Y•X)p` and the coKleisli composite
/// `Y•X` of the two presheaves seen as profunctors `?1 ⇸ 1`, for `p ≤ k`,
/// both over the supplied arities.
pub fn compare_with_cokleisli(y: &ArityPresheaf, x: &ArityPresheaf, k: usize) -> Result<Vec<String>> {
    same_variant(&[y, x])?;
    let variant = y.variant();
    variant.require_monad()?;
    let point = Arc::new(FinCategory::terminal());
    let dom = ListCategory::question(variant, Arc::clone(&point), x.truncation())?;
    let mid = ListCategory::question(variant, Arc::clone(&point), y.truncation())?;
    let out = ListCategory::question(variant, Arc::clone(&point), k)?;
    let phi = to_profunctor(x, &dom)?;
    let psi = to_profunctor(y, &mid)?;
    let comp = cokleisli_compose(variant, &psi, &phi, &dom, &mid, &out)?;
    let direct = subst_supplied(y, x, k)?;
    let mut out_w = Vec::new();
    for a in out.category().objects() {
        let p = out.list(a).len();
        let cmp = compare(&comp.value.fibers[a], &direct.fibers[p], |&(c, e, class)| {
            let rep = comp.lifted.fibers[comp.lifted.prof.slot(a, c)].representative(class);
            let args = rep.objs.iter().zip(&rep.elems).map(|(&o, &x)| (dom.list(o).len(), x)).collect();
            Ok(normalize_subst(x, &SubstRaw { m: mid.list(c).len(), y: e, args, shape: rep.weight.shape.clone() }))
        });
        out_w.extend(cmp.failures.into_iter().map(|w| format!("arity {p}: {w}")));
    }
    Ok(out_w)
}

/// Naturality of per-arity class maps into `X`.
fn natural_into<T: Ord + Clone + Debug>(
    q: &ArityQuotient<T>,
    x: &ArityPresheaf,
    images: &[Vec<Option<usize>>],
    k: usize,
) -> Vec<String> {
    let mut out = Vec::new();
    for (g, t) in q.presheaf.actions() {
        if g.dom > k || g.cod > k {
            continue;
        }
        for c in 0..t.len() {
            let (Some(a), Some(b)) = (images[g.dom][c], images[g.cod][t[c]]) else { continue };
            if x.act(g, a) != b {
                out.push(format!(
                    "not natural along [{}] → {} at {:?}",
                    join(&g.table),
                    g.cod,
                    q.fibers[g.dom].representative(c)
                ));
                if out.len() >= 4 {
                    return out;
                }
            }
        }
    }
    out
}

/// `I•X ≅ X` and `X•I ≅ X` at arities `≤ k`, through the canonical maps
/// `(i; a⃗; f) ↦ X(f∘ι_j)(a_j)` and `(x; ι⃗; f) ↦ X(f∘⊕ι)(x)`, computed over
/// the supplied arities. `k` must not exceed the data of `X`.
pub fn unit_laws_check(x: &ArityPresheaf, k: usize) -> Result<Report> {
    require_data(x, k)?;
    let variant = x.variant();
    let class = variant.function_class();
    let unit = subst_unit(variant, x.truncation());
    let units: Vec<Vec<FiniteFunction>> = (0..=unit.truncation()).map(|p| class.functions(1, p)).collect();
    let mut report = Report::new();
    let in_class =
        |h: FiniteFunction| if class.contains(&h) { Ok(h) } else { Err(Error::OutsideClass(format!("{h}"))) };

    if class == FunctionClass::All {
        // the clone form: (i; s⃗) ↦ s_i and (x; u⃗) ↦ X(u⃗)(x)
        let left = subst_clone_supplied(&unit, x, k)?;
        report.push(iso_check("I•X ≅ X", &left, x, k, |_, r| Ok(r.args[units[r.m][r.y].apply(0)])));
        let right = subst_clone_supplied(x, &unit, k)?;
        report.push(iso_check("X•I ≅ X", &right, x, k, |p, r| {
            let h = FiniteFunction { dom: r.m, cod: p, table: r.args.iter().map(|&u| units[p][u].apply(0)).collect() };
            Ok(x.act(&h, r.y))
        }));
        return Ok(report);
    }

    let left = subst_supplied(&unit, x, k)?;
    report.push(iso_check("I•X ≅ X", &left, x, k, |_, r| {
        let j = units[r.m][r.y].apply(0);
        let ns: Vec<usize> = r.args.iter().map(|a| a.0).collect();
        let f = in_class(block(&r.shape, &ns, j))?;
        Ok(x.act(&f, r.args[j].1))
    }));
    let right = subst_supplied(x, &unit, k)?;
    report.push(iso_check("X•I ≅ X", &right, x, k, |p, r| {
        let ns: Vec<usize> = r.args.iter().map(|a| a.0).collect();
        let off = offsets(&ns);
        let table =
            r.args.iter().enumerate().map(|(i, &(n, e))| r.shape.table[off[i] + units[n][e].apply(0)]).collect();
        let h = in_class(FiniteFunction { dom: r.m, cod: p, table })?;
        Ok(x.act(&h, r.y))
    }));
    Ok(report)
}

/// `(Z•Y)•X ≅ Z•(Y•X)` at arities `≤ k` over the supplied data, through
/// `((z; y⃗; g); x⃗; f) ↦ (z; ((y_j; x⃗∘g_j))_j; f∘block(g))`.
pub fn subst_assoc_check(z: &ArityPresheaf, y: &ArityPresheaf, x: &ArityPresheaf, k: usize) -> Result<Report> {
    same_variant(&[z, y, x])?;
    // with injective shapes and no nullary arguments every index arity is
    // at most the output arity
    let small = injective_class(x.variant().function_class()) && x.size(0) == 0 && y.size(0) == 0;
    let zy = subst_supplied(z, y, if small { k } else { z.truncation() * y.truncation() })?;
    let lhs = subst_supplied(&zy.presheaf, x, k)?;
    let yx = subst_supplied(y, x, if small { k } else { y.truncation() * x.truncation() })?;
    let rhs = subst_supplied(z, &yx.presheaf, k)?;
    let mut report = Report::new();
    let mut check = LawCheck::new("(Z•Y)•X ≅ Z•(Y•X)");
    let mut images = Vec::new();
    for p in 0..=k {
        let cmp = compare(&lhs.fibers[p], &rhs.fibers[p], |r| {
            let w = zy.fibers[r.m].representative(r.y);
            let ns: Vec<usize> = r.args.iter().map(|a| a.0).collect();
            let ms: Vec<usize> = w.args.iter().map(|a| a.0).collect();
            let mut args = Vec::with_capacity(w.m);
            for (j, &(mj, yj)) in w.args.iter().enumerate() {
                let gj = block(&w.shape, &ms, j);
                let inner: Vec<(usize, usize)> = gj.table.iter().map(|&t| r.args[t]).collect();
                let q = inner.iter().map(|a| a.0).sum();
                let v = normalize_subst(x, &SubstRaw { m: mj, y: yj, args: inner, shape: FiniteFunction::identity(q) });
                let c = yx
                    .fibers
                    .get(q)
                    .and_then(|f| f.class_of_elem(&v))
                    .ok_or_else(|| Error::InvalidInput(format!("{v} lies outside the computed Y•X")))?;
                args.push((q, c));
            }
            let shape = reblock(&r.shape, &ns, &w.shape);
            Ok(normalize_subst(&yx.presheaf, &SubstRaw { m: w.m, y: w.y, args, shape }))
        });
        check.record(&format!("arity {p}"), cmp.failures.clone());
        images.push(cmp.image);
    }
    if check.passed() {
        for (g, t) in lhs.presheaf.actions() {
            let mut w = Vec::new();
            for c in 0..t.len() {
                if let (Some(a), Some(b)) = (images[g.dom][c], images[g.cod][t[c]]) {
                    if rhs.presheaf.act(g, a) != b {
                        w.push(format!("not natural along [{}] → {}", join(&g.table), g.cod));
                    }
                }
            }
            check.record("naturality", w);
        }
    }
    report.push(check);
    Ok(report)
}

/// Bijectivity at each arity `≤ k` and naturality of a map of raw
/// elements into `X`.
fn iso_check<T: Ord + Clone + Debug>(
    law: &str,
    q: &ArityQuotient<T>,
    x: &ArityPresheaf,
    k: usize,
    map: impl Fn(usize, &T) -> Result<usize>,
) -> LawCheck {
    let mut check = LawCheck::new(law);
    let mut images = Vec::new();
    for p in 0..=k {
        let target = QuotientSet::discrete((0..x.size(p)).collect::<Vec<usize>>());
        let cmp = compare(&q.fibers[p], &target, |r| map(p, r));
        check.record(&format!("arity {p}"), cmp.failures.clone());
        images.push(cmp.image);
    }
    check.record("naturality", natural_into(q, x, &images, k));
    check
}

/// `Lan_⊆(Y•X) ≅ Lan_⊆Y ∘ Lan_⊆X` on a set of size `z`, through the
/// canonical map `(s; [y; a⃗; f]) ↦ ([s∘f_i, a_i]_i; y)`. Inputs must be
/// finitely supported.
pub fn analytic_comp_check(y: &ArityPresheaf, x: &ArityPresheaf, z: usize) -> Report {
    let mut check = LawCheck::new("Lan(Y•X) ≅ Lan Y ∘ Lan X");
    check.record_result(
        &format!("|z| = {z}"),
        (|| {
            same_variant(&[y, x])?;
            if !y.is_finite() || !x.is_finite() {
                return Err(Error::InvalidInput("the comparison needs finitely supported inputs".into()));
            }
            let inner = analytic_eval(x, z)?;
            let rhs = analytic_eval(y, inner.len())?;
            let k = y.max_arity().unwrap_or(0) * x.max_arity().unwrap_or(0);
            let yx = subst(y, x, k)?;
            let lhs = analytic_eval(&yx.presheaf, z)?;
            let cmp = compare(&lhs, &rhs, |r| {
                let rep = yx.fibers[r.m].representative(r.elem);
                let ns: Vec<usize> = rep.args.iter().map(|a| a.0).collect();
                let tuple = rep
                    .args
                    .iter()
                    .enumerate()
                    .map(|(i, &(n, a))| {
                        let f = block(&rep.shape, &ns, i);
                        let s: Vec<usize> = f.table.iter().map(|&j| r.tuple[j]).collect();
                        inner
                            .class_of_elem(&AnalyticRaw { m: n, tuple: s, elem: a })
                            .ok_or_else(|| Error::InvalidInput("argument outside the analytic functor".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnalyticRaw { m: rep.m, tuple, elem: rep.y })
            });
            Ok(cmp.failures)
        })(),
    );
    let mut report = Report::new();
    report.push(check);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point_at(v: Variant, n: usize, support: Support) -> ArityPresheaf {
        let sizes = (0..=n).map(|k| usize::from(k == n)).collect();
        ArityPresheaf::from_fn(v, n, support, sizes, |_, x| x).unwrap()
    }

    #[test]
    fn class_counts_match_enumeration() {
        for v in Variant::ALL {
            let c = v.function_class();
            for n in 0..=5 {
                for p in 0..=5 {
                    assert_eq!(class_count(c, n, p), c.functions(n, p).len() as u128, "{v} {n} {p}");
                }
            }
        }
    }

    #[test]
    fn substitution_counts_at_four() {
        let x = point_at(Variant::EMPTY, 2, Support::Finite);
        let xx = subst(&x, &x, 4).unwrap();
        assert_eq!(xx.sizes(), &[0, 0, 0, 0, 1]);
        assert_eq!(xx.presheaf.support(), Support::Finite);
        let x = point_at(Variant::SIGMA, 2, Support::Finite);
        let xx = subst(&x, &x, 4).unwrap();
        assert_eq!(xx.sizes()[4], 3);
    }

    #[test]
    fn day_tensor_sums_over_splittings() {
        let x = point_at(Variant::EMPTY, 2, Support::Finite);
        let y = point_at(Variant::EMPTY, 1, Support::Finite);
        let t = day_tensor(&x, &y).unwrap();
        assert_eq!(t.sizes(), &[0, 0, 0, 1]);
        let x = point_at(Variant::SIGMA, 1, Support::Finite);
        let t = day_tensor(&x, &x).unwrap();
        // the point at 1 is representable, so its square is ?1[2, -]
        assert_eq!(t.sizes()[2], 2);
    }

    #[test]
    fn tensor_power_zero_is_the_unit() {
        let x = point_at(Variant::EPSILON, 1, Support::Truncated);
        let j = tensor_power(&x, 0, 3).unwrap();
        assert_eq!(j.sizes(), day_unit(Variant::EPSILON, 3).sizes());
        assert_eq!(day_unit(Variant::SIGMA, 3).sizes(), &[1, 0, 0, 0]);
    }

    #[test]
    fn unit_presheaf_sizes() {
        assert_eq!(subst_unit(Variant::FULL, 3).sizes(), &[0, 1, 2, 3]);
        assert_eq!(subst_unit(Variant::EMPTY, 3).sizes(), &[0, 1, 0, 0]);
        assert_eq!(subst_unit(Variant::SIGMA, 3).support(), Support::Finite);
    }

    #[test]
    fn analytic_values() {
        let x = point_at(Variant::SIGMA, 2, Support::Finite);
        assert_eq!(analytic_eval(&x, 2).unwrap().len(), 3);
        let x = point_at(Variant::EMPTY, 2, Support::Finite);
        assert_eq!(analytic_eval(&x, 2).unwrap().len(), 4);
        let i = subst_unit(Variant::FULL, 3);
        for z in 1..=3 {
            assert_eq!(analytic_eval(&i, z).unwrap().len(), z);
        }
    }

    #[test]
    fn nullary_truncated_input_is_rejected() {
        let x = ArityPresheaf::from_fn(Variant::SIGMA, 2, Support::Truncated, vec![1, 1, 1], |_, _| 0).unwrap();
        assert!(matches!(subst(&x, &x, 2), Err(Error::Unbounded(_))));
    }

    #[test]
    fn clone_form_matches_the_general_form() {
        // the clone of projections on a two-element set, truncated at 2
        let e = super::super::end_clone(2, 2).unwrap();
        let x = e.carrier;
        let general = subst_supplied(&x, &x, 2).unwrap();
        let simple = subst_clone_supplied(&x, &x, 2).unwrap();
        for p in 0..=2 {
            let cmp = compare(&general.fibers[p], &simple.fibers[p], |r| Ok(clone_form(&x, r)));
            assert!(cmp.is_bijection(), "{:?}", cmp.failures);
        }
    }
}
