//! The coKleisli bicategory of the comonad `?` on profunctors.
//!
//! Morphisms `C → C′` are profunctors `?C ⇸ C′`. They compose by
//!
//! ```text
//! (Ψ•Φ)(C⃗, C″) = ∫^{C′⃗} Ψ(C′⃗, C″) × Φ^♭(C⃗, C′⃗)
//! Φ^♭(C⃗, C′⃗)   = ∫^{D⃗_1 … D⃗_p} Φ(D⃗_1, C′_1) × … × Φ(D⃗_p, C′_p) × ?C[D⃗_1 … D⃗_p, C⃗]
//! ```
//!
//! where `D⃗_1 … D⃗_p` is the flattened list. The lists `D⃗_k` range over the
//! category on which `Φ` is given; for finitely supported data this loses
//! nothing, since raw elements only exist where `Φ` is non-empty and the
//! index category is a full subcategory.
//!
//! [`generalized_compose`] evaluates the same composite through `λ` and the
//! multiplication of an arbitrary shape monad, without the flattened form.

use std::fmt::Debug;
use std::sync::Arc;

use crate::bang::{hom_lists, Direction, ListCategory, ListMorphism, ShapeMonad};
use crate::diagrams::{FiniteFunction, Variant};
use crate::distlaw::{check_eta_psh, lambda_mor, lift_profunctor, DistLaw, Explicit, LambdaRaw, LambdaValue};
use crate::fincat::{
    product_coend, slot_coend, FinCategory, FunctorView, MorId, ObjId, QuotientSet, SetFunctor, SlotRaw, SlotVariance,
    Variance, Weight,
};
use crate::laws::{LawCheck, Report};
use crate::prof::{compare_profunctors, plain_fibers, prof_compose, same, ComposeRaw, FiniteProfunctor, ProfQuotient};
use crate::{limits, sweep, Error, Result};

/// Default bound on the total flattened length of materialized `??C`.
pub const FLAT_BOUND: usize = 4;

/// Raw element of `?Φ` or `Φ^♭`: one object of the index category per
/// output position, one element of `Φ` there, and a morphism of `?C` from
/// the flattened list.
pub type FlatRaw = SlotRaw<ListMorphism>;

/// How the index category of a lifted profunctor sits inside lists of `C`.
enum Blocks<'a> {
    /// `C` itself, objects as singleton lists.
    Units(&'a Arc<FinCategory>),
    /// A materialized `?C`.
    Lists(&'a ListCategory),
}

impl Blocks<'_> {
    fn category(&self) -> &Arc<FinCategory> {
        match self {
            Blocks::Units(c) => c,
            Blocks::Lists(l) => l.category(),
        }
    }

    fn base(&self) -> &Arc<FinCategory> {
        match self {
            Blocks::Units(c) => c,
            Blocks::Lists(l) => l.base(),
        }
    }

    fn list(&self, o: ObjId) -> Vec<ObjId> {
        match self {
            Blocks::Units(_) => vec![o],
            Blocks::Lists(l) => l.list(o).to_vec(),
        }
    }

    fn morphism(&self, u: MorId) -> ListMorphism {
        match self {
            Blocks::Units(c) => ListMorphism::unit(c, u),
            Blocks::Lists(l) => l.morphism(u).clone(),
        }
    }

    fn flatten(&self, objs: &[ObjId]) -> Vec<ObjId> {
        objs.iter().flat_map(|&o| self.list(o)).collect()
    }
}

/// The weight `?C[flat(D⃗_1 … D⃗_p), C⃗]`.
struct FlatInto<'a> {
    monad: &'a dyn ShapeMonad,
    blocks: &'a Blocks<'a>,
    to: &'a [ObjId],
}

impl Weight for FlatInto<'_> {
    type Elem = ListMorphism;

    fn elements(&self, objs: &[ObjId]) -> Result<Vec<ListMorphism>> {
        hom_lists(self.monad, self.blocks.base(), Direction::Question, &self.blocks.flatten(objs), self.to)
    }

    fn act(&self, objs: &[ObjId], slot: usize, u: MorId, w: &ListMorphism) -> Result<ListMorphism> {
        let base = self.blocks.base();
        let mut t = ListMorphism::identity(base, &[]);
        for (i, &o) in objs.iter().enumerate() {
            let part =
                if i == slot { self.blocks.morphism(u) } else { ListMorphism::identity(base, &self.blocks.list(o)) };
            t = t.tensor(&part);
        }
        w.after(base, Direction::Question, &t)
    }
}

/// The morphism of `?C` that copies block `s(j)` of `old` into position
/// `j`, for a shape `s` between positions.
fn block_map(c: &FinCategory, shape: &FiniteFunction, old: &[Vec<ObjId>]) -> ListMorphism {
    let mut offsets = Vec::with_capacity(old.len());
    let mut acc = 0;
    for l in old {
        offsets.push(acc);
        acc += l.len();
    }
    let mut src = Vec::new();
    let mut table = Vec::new();
    for j in 0..shape.dom {
        let b = shape.apply(j);
        for (k, &o) in old[b].iter().enumerate() {
            src.push(o);
            table.push(offsets[b] + k);
        }
    }
    let family = src.iter().map(|&o| c.identity(o)).collect();
    ListMorphism { tgt: old.concat(), shape: FiniteFunction { dom: src.len(), cod: acc, table }, src, family }
}

fn check_question(l: &ListCategory, what: &str) -> Result<()> {
    if l.direction() != Direction::Question {
        return Err(Error::InvalidInput(format!("{what} must be a category of the form ?C")));
    }
    Ok(())
}

/// The lift of `Φ: B ⇸ C′` to `?C ⇸ ?C′`, where `blocks` embeds `B` into
/// lists of `C`.
fn lift(
    what: &str,
    monad: &dyn ShapeMonad,
    phi: &FiniteProfunctor,
    blocks: &Blocks<'_>,
    out: &ListCategory,
    mid: &ListCategory,
) -> Result<ProfQuotient<FlatRaw>> {
    check_question(out, "the source")?;
    check_question(mid, "the target")?;
    if !same(blocks.category(), &phi.src) || !same(out.base(), blocks.base()) || !same(mid.base(), &phi.tgt) {
        return Err(Error::Mismatch(format!("{what}: list categories do not match the profunctor")));
    }
    let base = blocks.base();
    let columns: Vec<SetFunctor> = phi.tgt.objects().map(|b| phi.column(b)).collect();
    let n2 = mid.category().object_count();
    let pairs: Vec<(ObjId, ObjId)> = out.category().objects().flat_map(|a| (0..n2).map(move |b| (a, b))).collect();
    let fibers = sweep::map(&pairs, |&(a, b)| {
        let slots: Vec<&dyn FunctorView> = mid.list(b).iter().map(|&c| &columns[c] as &dyn FunctorView).collect();
        let w = FlatInto { monad, blocks, to: out.list(a) };
        slot_coend(what, blocks.category(), &slots, SlotVariance::Covariant, &w)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    ProfQuotient::build(
        Arc::clone(out.category()),
        Arc::clone(mid.category()),
        fibers,
        |u, _, r| {
            let weight = out.morphism(u).after(base, Direction::Question, &r.weight)?;
            Ok(SlotRaw { objs: r.objs.clone(), elems: r.elems.clone(), weight })
        },
        |v, _, r| {
            let t = mid.morphism(v);
            let s = &t.shape;
            let objs: Vec<ObjId> = (0..s.dom).map(|j| r.objs[s.apply(j)]).collect();
            let elems = (0..s.dom).map(|j| phi.right[t.family[j]][objs[j]][r.elems[s.apply(j)]]).collect();
            let old: Vec<Vec<ObjId>> = r.objs.iter().map(|&o| blocks.list(o)).collect();
            let weight = r.weight.after(base, Direction::Question, &block_map(base, s, &old))?;
            Ok(SlotRaw { objs, elems, weight })
        },
    )
}

/// `!Φ: !C ⇸ !C′` for `Φ: C ⇸ C′`, through `λ`.
pub fn bang_prof(
    variant: Variant,
    phi: &FiniteProfunctor,
    from: &ListCategory,
    to: &ListCategory,
) -> Result<ProfQuotient<LambdaRaw>> {
    variant.require_monad()?;
    lift_profunctor(&Explicit, &variant, from, to, phi)
}

/// `?Φ: ?C ⇸ ?C′` for `Φ: C ⇸ C′`:
/// `?Φ(C⃗, C′⃗) = ∫^{D⃗} Φ(D_1, C′_1) × … × Φ(D_p, C′_p) × ?C[D⃗, C⃗]`.
pub fn question_prof(
    variant: Variant,
    phi: &FiniteProfunctor,
    out: &ListCategory,
    mid: &ListCategory,
) -> Result<ProfQuotient<FlatRaw>> {
    variant.require_monad()?;
    question_prof_with(&variant, phi, out, mid)
}

pub fn question_prof_with(
    monad: &dyn ShapeMonad,
    phi: &FiniteProfunctor,
    out: &ListCategory,
    mid: &ListCategory,
) -> Result<ProfQuotient<FlatRaw>> {
    lift("?Φ", monad, phi, &Blocks::Units(&phi.src), out, mid)
}

/// `??C` over a materialized `?C`: lists of lists with at most `max_outer`
/// blocks and total flattened length at most `max_flat`.
pub fn double_question(variant: Variant, c: &ListCategory, max_outer: usize, max_flat: usize) -> Result<ListCategory> {
    variant.require_monad()?;
    check_question(c, "the inner category")?;
    let total = |l: &[ObjId]| l.iter().map(|&o| c.list(o).len()).sum::<usize>() <= max_flat;
    ListCategory::new(&variant, Arc::clone(c.category()), Direction::Question, max_outer, Some(&total))
}

/// The comultiplication `δ: ?C ⇸ ??C`, `δ(C⃗, D⃗⃗) = ?C[flat D⃗⃗, C⃗]`.
/// Elements are the morphisms themselves.
pub fn comult(variant: Variant, c: &ListCategory, outer: &ListCategory) -> Result<ProfQuotient<ListMorphism>> {
    variant.require_monad()?;
    check_question(c, "the inner category")?;
    check_question(outer, "the outer category")?;
    if !same(outer.base(), c.category()) {
        return Err(Error::Mismatch("the outer category is not built over the inner one".into()));
    }
    let base = c.base();
    let mut fibers = Vec::new();
    for a in c.category().objects() {
        for b in outer.category().objects() {
            let hom = hom_lists(&variant, base, Direction::Question, &c.flatten_object(outer, b), c.list(a))?;
            fibers.push(QuotientSet::discrete(hom));
        }
    }
    ProfQuotient::build(
        Arc::clone(c.category()),
        Arc::clone(outer.category()),
        fibers,
        |u, _, w| c.morphism(u).after(base, Direction::Question, w),
        |t, _, w| w.after(base, Direction::Question, &c.expand(&variant, outer, t)?),
    )
}

/// `Φ^♭ = (?Φ)∘δ: ?C ⇸ ?C′` for `Φ: ?C ⇸ C′` on `dom`, in the flattened
/// form that avoids `??C`.
pub fn flat_lift(
    variant: Variant,
    phi: &FiniteProfunctor,
    dom: &ListCategory,
    out: &ListCategory,
    mid: &ListCategory,
) -> Result<ProfQuotient<FlatRaw>> {
    variant.require_monad()?;
    flat_lift_with(&variant, phi, dom, out, mid)
}

pub fn flat_lift_with(
    monad: &dyn ShapeMonad,
    phi: &FiniteProfunctor,
    dom: &ListCategory,
    out: &ListCategory,
    mid: &ListCategory,
) -> Result<ProfQuotient<FlatRaw>> {
    check_question(dom, "the source of Φ")?;
    lift("Φ^♭", monad, phi, &Blocks::Lists(dom), out, mid)
}

/// A coKleisli composite `Ψ∘Φ^♭` together with the lifted `Φ^♭`.
#[derive(Debug, Clone)]
pub struct Composite<T> {
    pub lifted: ProfQuotient<T>,
    pub value: ProfQuotient<ComposeRaw>,
}

/// `Ψ•Φ: ?C ⇸ C″` for `Φ: ?C ⇸ C′` given on `dom` and `Ψ: ?C′ ⇸ C″`
/// given on `mid`; the result is computed on the lists of `out`.
pub fn cokleisli_compose(
    variant: Variant,
    psi: &FiniteProfunctor,
    phi: &FiniteProfunctor,
    dom: &ListCategory,
    mid: &ListCategory,
    out: &ListCategory,
) -> Result<Composite<FlatRaw>> {
    variant.require_monad()?;
    cokleisli_compose_with(&variant, psi, phi, dom, mid, out)
}

pub fn cokleisli_compose_with(
    monad: &dyn ShapeMonad,
    psi: &FiniteProfunctor,
    phi: &FiniteProfunctor,
    dom: &ListCategory,
    mid: &ListCategory,
    out: &ListCategory,
) -> Result<Composite<FlatRaw>> {
    if !same(&psi.src, mid.category()) {
        return Err(Error::Mismatch("Ψ is not given on the middle list category".into()));
    }
    let lifted = flat_lift_with(monad, phi, dom, out, mid)?;
    let value = prof_compose(psi, &lifted.prof)?;
    Ok(Composite { lifted, value })
}

/// The identity `I: ?C ⇸ C`, `I(C⃗, C) = ?C[(C), C⃗]`; elements index the
/// hom-sets of `c`.
pub fn cokleisli_identity(variant: Variant, c: &ListCategory) -> Result<FiniteProfunctor> {
    variant.require_monad()?;
    cokleisli_identity_with(&variant, c)
}

pub fn cokleisli_identity_with(_monad: &dyn ShapeMonad, c: &ListCategory) -> Result<FiniteProfunctor> {
    check_question(c, "the source")?;
    let base = c.base();
    let singles = base
        .objects()
        .map(|o| c.object_of(&[o]).ok_or_else(|| Error::InvalidInput("singleton lists are not materialized".into())))
        .collect::<Result<Vec<_>>>()?;
    let q = c.category();
    let id = |m: &ListMorphism| c.morphism_id(m).expect("composite lies in the list category");
    FiniteProfunctor::from_fn(
        Arc::clone(q),
        Arc::clone(base),
        |a, o| q.hom(singles[o], a).len(),
        |u, o, x| {
            let f = q.hom(singles[o], q.src(u))[x];
            q.hom_index(q.compose(u, f).expect("composable"))
        },
        |v, a, x| {
            let f = c.morphism(q.hom(singles[base.tgt(v)], a)[x]);
            let g = f.after(base, Direction::Question, &ListMorphism::unit(base, v)).expect("composable");
            q.hom_index(id(&g))
        },
    )
}

/// A shape monad with a distributive law over presheaves.
#[derive(Clone, Copy)]
pub struct Bundle<'a> {
    pub monad: &'a dyn ShapeMonad,
    pub law: &'a dyn DistLaw,
}

/// Raw element of the general lifted profunctor: an object `δ` of
/// `!((?C)^op)`, the index of a morphism `μδ → C⃗` of `?C` and a class
/// of `λ((!Φ′)C′⃗)(δ)`.
pub type GeneralRaw = (ObjId, usize, usize);

/// Output of [`generalized_compose`], with the intermediate values needed
/// to read its elements.
#[derive(Debug, Clone)]
pub struct GeneralComposite {
    pub composite: Composite<GeneralRaw>,
    /// `!((?C)^op)`, the index category of the inner coend.
    pub nested: ListCategory,
    /// `λ((!Φ′)C′⃗)` per object of the middle category.
    pub lambdas: Vec<LambdaValue>,
    /// Sorted hom-sets `?C[μδ, C⃗]`, indexed by output object then `δ`.
    pub weights: Vec<Vec<Vec<ListMorphism>>>,
}

/// The expansion of `h: δ₁ → δ₂` in `!((?C)^op)` to `μδ₂ → μδ₁` in `?C`.
fn expand_op(dom: &ListCategory, h: &ListMorphism) -> ListMorphism {
    let old: Vec<&[ObjId]> = h.src.iter().map(|&o| dom.list(o)).collect();
    let mut offsets = Vec::with_capacity(old.len());
    let mut acc = 0;
    for l in &old {
        offsets.push(acc);
        acc += l.len();
    }
    let mut table = Vec::new();
    let mut family = Vec::new();
    for (j, &m) in h.family.iter().enumerate() {
        let inner = dom.morphism(m);
        for k in 0..inner.src.len() {
            table.push(offsets[h.shape.apply(j)] + inner.shape.apply(k));
            family.push(inner.family[k]);
        }
    }
    let src: Vec<ObjId> = h.tgt.iter().flat_map(|&o| dom.list(o).iter().copied()).collect();
    ListMorphism { shape: FiniteFunction { dom: src.len(), cod: acc, table }, src, tgt: old.concat(), family }
}

struct Sorted<'a> {
    nested: &'a ListCategory,
    dom: &'a ListCategory,
    homs: &'a [Vec<ListMorphism>],
}

impl FunctorView for Sorted<'_> {
    fn size(&self, o: ObjId) -> usize {
        self.homs[o].len()
    }

    fn act(&self, m: MorId, x: usize) -> usize {
        let e = expand_op(self.dom, self.nested.morphism(m));
        let w = self.homs[self.nested.category().src(m)][x]
            .after(self.dom.base(), Direction::Question, &e)
            .expect("expansion composes");
        self.homs[self.nested.category().tgt(m)].binary_search(&w).expect("hom-set is closed")
    }
}

/// `(Ψ•Φ)(γ, C″) = ∫^{γ′} Ψ(γ′, C″) × ∫^δ λ((!Φ′)γ′)(δ) × ?C[μδ, γ]`
/// for an arbitrary bundle. `δ` ranges over lists of objects of `dom` with
/// at most as many entries as the longest list of `mid`, which contains
/// every index the inner coend of `λ` uses. The bundle's `(λ-η_Psh)` is
/// checked on that category first.
pub fn generalized_compose(
    bundle: Bundle<'_>,
    psi: &FiniteProfunctor,
    phi: &FiniteProfunctor,
    dom: &ListCategory,
    mid: &ListCategory,
    out: &ListCategory,
) -> Result<GeneralComposite> {
    let Bundle { monad, law } = bundle;
    check_question(dom, "the source of Φ")?;
    check_question(mid, "the middle category")?;
    check_question(out, "the output category")?;
    if !same(&phi.src, dom.category()) || !same(&phi.tgt, mid.base()) || !same(&psi.src, mid.category()) {
        return Err(Error::Mismatch("list categories do not match the profunctors".into()));
    }
    if !same(out.base(), dom.base()) {
        return Err(Error::Mismatch("output lists are not over the base of Φ".into()));
    }
    let p_max = mid.lists().iter().map(|l| l.len()).max().unwrap_or(0);
    let b = Arc::new(dom.category().opposite());
    let nested = ListCategory::new(monad, Arc::clone(&b), Direction::Bang, p_max, None)?;
    let check = check_eta_psh(law, monad, &nested);
    if !check.passed() {
        return Err(Error::Mismatch(format!("the bundle fails its law checks: {}", check.witnesses.join("; "))));
    }
    let presheaves: Vec<SetFunctor> = phi
        .tgt
        .objects()
        .map(|c2| {
            let col = phi.column(c2);
            SetFunctor {
                base: Arc::clone(&b),
                variance: Variance::Contravariant,
                sizes: col.sizes,
                maps: col.maps,
                labels: None,
            }
        })
        .collect();
    let lambdas = mid
        .lists()
        .iter()
        .map(|l| {
            let fs: Vec<SetFunctor> = l.iter().map(|&c| presheaves[c].clone()).collect();
            law.value(monad, &nested, &fs)
        })
        .collect::<Result<Vec<_>>>()?;
    let base = dom.base();
    let weights = out
        .lists()
        .iter()
        .map(|g| {
            nested
                .lists()
                .iter()
                .map(|d| {
                    let flat: Vec<ObjId> = d.iter().flat_map(|&o| dom.list(o).iter().copied()).collect();
                    let mut h = hom_lists(monad, base, Direction::Question, &flat, g)?;
                    h.sort();
                    Ok(h)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let n2 = mid.category().object_count();
    let pairs: Vec<(ObjId, ObjId)> = out.category().objects().flat_map(|a| (0..n2).map(move |c| (a, c))).collect();
    let fibers = sweep::map(&pairs, |&(a, c)| {
        let w = Sorted { nested: &nested, dom, homs: &weights[a] };
        product_coend("generalized composite", nested.category(), &w, &lambdas[c].functor)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mc = mid.category();
    let mut lam_maps: Vec<Option<Vec<Vec<usize>>>> = vec![None; mc.morphism_count()];
    for v in mc.non_identity_morphisms() {
        let t = mid.morphism(v);
        let (from, to) = (&lambdas[mc.tgt(v)], &lambdas[mc.src(v)]);
        lam_maps[v] = Some(lambda_mor(monad, &b, from, to, &t.shape, |j, d, x| phi.right[t.family[j]][d][x])?);
    }
    limits::check("generalized composite", fibers.iter().map(|q| q.raw_len() as u128).sum())?;
    let lifted = ProfQuotient::build(
        Arc::clone(out.category()),
        Arc::clone(mc),
        fibers,
        |u, a, &(d, i, e)| {
            let w = out.morphism(u).after(base, Direction::Question, &weights[out.category().src(u)][d][i])?;
            let j = weights[out.category().tgt(u)][d]
                .binary_search(&w)
                .map_err(|_| Error::Mismatch(format!("composite leaves the hom-set at {a}")))?;
            Ok((d, j, e))
        },
        |v, _, &(d, i, e)| {
            let maps = lam_maps[v].as_ref().expect("identities are not acted on");
            Ok((d, i, maps[d][e]))
        },
    )?;
    let value = prof_compose(psi, &lifted.prof)?;
    Ok(GeneralComposite { composite: Composite { lifted, value }, nested, lambdas, weights })
}

impl GeneralComposite {
    /// Reads a raw element at `(γ, γ′)` in flattened form, by co-Yoneda.
    pub fn flat_raw(&self, dom: &ListCategory, a: ObjId, c: ObjId, r: &GeneralRaw) -> Result<FlatRaw> {
        let &(d, i, e) = r;
        let rep = self.lambdas[c].fibers[d].representative(e);
        let w = &self.weights[a][d][i];
        let weight = w.after(dom.base(), Direction::Question, &expand_op(dom, &rep.weight))?;
        Ok(SlotRaw { objs: rep.objs.clone(), elems: rep.elems.clone(), weight })
    }
}

/// Compares two lifted profunctors classwise along `map` and returns the
/// failures; a convenience for the cross-checks of this module.
pub fn compare_lifts<A, B>(
    lhs: &ProfQuotient<A>,
    rhs: &ProfQuotient<B>,
    map: impl Fn(ObjId, ObjId, &A) -> Result<B>,
) -> Vec<String>
where
    A: Ord + Clone + Debug,
    B: Ord + Clone + Debug,
{
    crate::prof::compare_profunctors(lhs, &rhs.prof, &rhs.fibers, map)
}

fn singles(c: &ListCategory) -> Result<Vec<ObjId>> {
    c.base()
        .objects()
        .map(|o| c.object_of(&[o]).ok_or_else(|| Error::InvalidInput("singleton lists are not materialized".into())))
        .collect()
}

fn in_list_category(c: &ListCategory, m: &ListMorphism) -> Result<MorId> {
    c.morphism_id(m).ok_or_else(|| Error::Mismatch(format!("{m} is not materialized")))
}

/// `I•Φ ≅ Φ` and `Φ•I ≅ Φ` for `Φ: ?C ⇸ C′` on `dom`, with `mid` a
/// materialized `?C′`. Both composites are computed on the lists of `dom`
/// and compared with `Φ` through the co-Yoneda bijections.
pub fn unit_laws_check(
    variant: Variant,
    phi: &FiniteProfunctor,
    dom: &ListCategory,
    mid: &ListCategory,
) -> Result<Report> {
    let mut report = Report::new();
    let fibers = plain_fibers(phi);

    let mut left = LawCheck::new("I•Φ ≅ Φ");
    let id2 = cokleisli_identity(variant, mid)?;
    let one2 = singles(mid)?;
    let l = cokleisli_compose(variant, &id2, phi, dom, mid, dom)?;
    let base = dom.base();
    left.record(
        "",
        compare_profunctors(&l.value, phi, &fibers, |a, c2, &(g, i, k)| {
            let mc = mid.category();
            let f = mc.hom(one2[c2], g)[i];
            let k1 = l.lifted.prof.right[f][a][k];
            let rep = l.lifted.fibers[l.lifted.prof.slot(a, one2[c2])].representative(k1);
            Ok(phi.left[in_list_category(dom, &rep.weight)?][c2][rep.elems[0]])
        }),
    );
    report.push(left);

    let mut right = LawCheck::new("Φ•I ≅ Φ");
    let id = cokleisli_identity(variant, dom)?;
    let one = singles(dom)?;
    let dc = dom.category();
    let r = cokleisli_compose(variant, phi, &id, dom, dom, dom)?;
    right.record(
        "",
        compare_profunctors(&r.value, phi, &fibers, |a, c2, &(g, x, k)| {
            let rep = r.lifted.fibers[r.lifted.prof.slot(a, g)].representative(k);
            let mut t = ListMorphism::identity(base, &[]);
            for (i, (&d, &e)) in rep.objs.iter().zip(&rep.elems).enumerate() {
                t = t.tensor(dom.morphism(dc.hom(one[dom.list(g)[i]], d)[e]));
            }
            let v = rep.weight.after(base, Direction::Question, &t)?;
            Ok(phi.left[in_list_category(dom, &v)?][c2][x])
        }),
    );
    report.push(right);
    Ok(report)
}

/// The categories of an associativity instance `(Θ•Ψ)•Φ ≅ Θ•(Ψ•Φ)` with
/// `Φ: ?C ⇸ C′`, `Ψ: ?C′ ⇸ C″`, `Θ: ?C″ ⇸ C‴`.
pub struct Triple<'a> {
    pub phi: (&'a FiniteProfunctor, &'a ListCategory),
    pub psi: (&'a FiniteProfunctor, &'a ListCategory),
    pub theta: (&'a FiniteProfunctor, &'a ListCategory),
    /// Lists of `C` long enough for every argument of `Ψ•Φ` that occurs.
    pub wide: &'a ListCategory,
}

/// Associativity through the bijection that pushes the outer `Φ^♭`
/// element along the `?C′` morphism of `(Θ•Ψ)` and regroups the blocks.
pub fn associativity_check(variant: Variant, t: &Triple<'_>) -> Result<Vec<String>> {
    let (phi, dom) = t.phi;
    let (psi, mid) = t.psi;
    let (theta, mid2) = t.theta;
    let tp = cokleisli_compose(variant, theta, psi, mid, mid2, mid)?;
    let lhs = cokleisli_compose(variant, &tp.value.prof, phi, dom, mid, dom)?;
    let pp = cokleisli_compose(variant, psi, phi, dom, mid, t.wide)?;
    let rhs = cokleisli_compose(variant, theta, &pp.value.prof, t.wide, mid2, dom)?;
    Ok(compare_profunctors(&lhs.value, &rhs.value.prof, &rhs.value.fibers, |a, c3, &(g, tc, k)| {
        let &(g2, th, j) = tp.value.fibers[tp.value.prof.slot(g, c3)].representative(tc);
        let jr = tp.lifted.fibers[tp.lifted.prof.slot(g, g2)].representative(j);
        let flat_e: Vec<ObjId> = jr.objs.iter().flat_map(|&e| mid.list(e).iter().copied()).collect();
        let fe = mid.object_of(&flat_e).ok_or_else(|| Error::Mismatch("regrouped list is not materialized".into()))?;
        let k1 = lhs.lifted.prof.right[in_list_category(mid, &jr.weight)?][a][k];
        let kr = lhs.lifted.fibers[lhs.lifted.prof.slot(a, fe)].representative(k1);
        let mut start = 0;
        let mut objs = Vec::new();
        let mut elems = Vec::new();
        for (i, &e) in jr.objs.iter().enumerate() {
            let len = mid.list(e).len();
            let ds = kr.objs[start..start + len].to_vec();
            let xs = kr.elems[start..start + len].to_vec();
            start += len;
            let flat: Vec<ObjId> = ds.iter().flat_map(|&d| dom.list(d).iter().copied()).collect();
            let gi =
                t.wide.object_of(&flat).ok_or_else(|| Error::Mismatch("inner argument is not materialized".into()))?;
            let inner = SlotRaw { objs: ds, elems: xs, weight: ListMorphism::identity(dom.base(), &flat) };
            let ic = pp.lifted.fibers[pp.lifted.prof.slot(gi, e)]
                .class_of_elem(&inner)
                .ok_or_else(|| Error::Mismatch("element outside Φ^♭".into()))?;
            let c2 = mid2.list(g2)[i];
            let z = pp.value.fibers[pp.value.prof.slot(gi, c2)]
                .class_of_elem(&(e, jr.elems[i], ic))
                .ok_or_else(|| Error::Mismatch("element outside Ψ•Φ".into()))?;
            objs.push(gi);
            elems.push(z);
        }
        let outer = SlotRaw { objs, elems, weight: kr.weight.clone() };
        let oc = rhs.lifted.fibers[rhs.lifted.prof.slot(a, g2)]
            .class_of_elem(&outer)
            .ok_or_else(|| Error::Mismatch("element outside (Ψ•Φ)^♭".into()))?;
        Ok((g2, th, oc))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bang::IdentityMonad;
    use crate::fincat::compare;
    use crate::samples::{random_profunctor, rng};

    fn point() -> Arc<FinCategory> {
        Arc::new(FinCategory::terminal())
    }

    fn q(v: Variant, c: &Arc<FinCategory>, n: usize) -> ListCategory {
        ListCategory::question(v, Arc::clone(c), n).unwrap()
    }

    fn constant(src: &Arc<FinCategory>, tgt: &Arc<FinCategory>, n: usize) -> FiniteProfunctor {
        FiniteProfunctor::from_fn(Arc::clone(src), Arc::clone(tgt), |_, _| n, |_, _, x| x, |_, _, x| x).unwrap()
    }

    #[test]
    fn bang_prof_over_a_point() {
        let p = point();
        let b = ListCategory::bang(Variant::EMPTY, Arc::clone(&p), 3).unwrap();
        let phi = constant(&p, &p, 2);
        let lifted = bang_prof(Variant::EMPTY, &phi, &b, &b).unwrap();
        for n in 0..=3 {
            let o = b.object_of(&vec![0; n]).unwrap();
            assert_eq!(lifted.prof.size(o, o), 2usize.pow(n as u32));
        }
    }

    #[test]
    fn question_identity_is_the_identity() {
        let c = Arc::new(FinCategory::arrow());
        for v in [Variant::EMPTY, Variant::SIGMA, Variant::FULL] {
            let qc = q(v, &c, 2);
            let lifted = question_prof(v, &FiniteProfunctor::identity(Arc::clone(&c)), &qc, &qc).unwrap();
            let id = FiniteProfunctor::identity(Arc::clone(qc.category()));
            let base = qc.base();
            let w = compare_lifts(
                &lifted,
                &ProfQuotient { prof: id.clone(), fibers: crate::prof::plain_fibers(&id) },
                |_, b, r| {
                    let mut t = ListMorphism::identity(base, &[]);
                    for (k, &e) in r.elems.iter().enumerate() {
                        let m = base.hom(qc.list(b)[k], r.objs[k])[e];
                        t = t.tensor(&ListMorphism::unit(base, m));
                    }
                    let f = r.weight.after(base, Direction::Question, &t)?;
                    let fid = qc.morphism_id(&f).unwrap();
                    Ok(qc.category().hom_index(fid))
                },
            );
            assert!(w.is_empty(), "{v}: {w:?}");
        }
    }

    #[test]
    fn comult_values_are_hom_sets() {
        let p = point();
        let qc = q(Variant::FULL, &p, 3);
        let qq = double_question(Variant::FULL, &qc, 2, 3).unwrap();
        let d = comult(Variant::FULL, &qc, &qq).unwrap();
        for a in qc.category().objects() {
            for b in qq.category().objects() {
                let flat = qc.flatten_object(&qq, b);
                let expected = hom_lists(&Variant::FULL, &p, Direction::Question, &flat, qc.list(a)).unwrap().len();
                assert_eq!(d.prof.size(a, b), expected);
                if flat == qc.list(a) {
                    let id = ListMorphism::identity(&p, &flat);
                    assert!(d.fibers[d.prof.slot(a, b)].class_of_elem(&id).is_some());
                }
            }
        }
        let empty = qq.object_of(&[]).unwrap();
        let two = qc.object_of(&[0, 0]).unwrap();
        assert_eq!(d.prof.size(two, empty), 1);
    }

    #[test]
    fn flat_lift_with_one_output_is_phi() {
        let c = Arc::new(FinCategory::iso_pair());
        for v in [Variant::SIGMA, Variant::FULL] {
            let qc = q(v, &c, 2);
            let mut r = rng(3);
            let phi = random_profunctor(&mut r, qc.category(), &c, 2);
            let mid = q(v, &c, 1);
            let lifted = flat_lift(v, &phi, &qc, &qc, &mid).unwrap();
            for a in qc.category().objects() {
                for b in mid.category().objects() {
                    let &[c2] = mid.list(b) else { continue };
                    let plain = QuotientSet::discrete((0..phi.size(a, c2)).collect());
                    let cmp = compare(&lifted.fibers[lifted.prof.slot(a, b)], &plain, |r| {
                        Ok(phi.left[qc.morphism_id(&r.weight).unwrap()][c2][r.elems[0]])
                    });
                    assert!(cmp.is_bijection(), "{v}: {:?}", cmp.failures);
                }
            }
        }
    }

    #[test]
    fn flat_lift_agrees_with_the_unsimplified_composite() {
        let p = point();
        for v in [Variant::EMPTY, Variant::SIGMA, Variant::EPSILON, Variant::FULL] {
            let qc = q(v, &p, 2);
            let mut r = rng(11);
            let phi = random_profunctor(&mut r, qc.category(), &p, 2);
            let mid = q(v, &p, 2);
            let qq = double_question(v, &qc, 2, 2).unwrap();
            let lifted = flat_lift(v, &phi, &qc, &qc, &mid).unwrap();
            let qphi = question_prof(v, &phi, &qq, &mid).unwrap();
            let delta = comult(v, &qc, &qq).unwrap();
            let unsimplified = prof_compose(&qphi.prof, &delta.prof).unwrap();
            let base = qc.base();
            let w = compare_lifts(&unsimplified, &lifted, |a, b, &(m, x, y)| {
                let rep = qphi.fibers[qphi.prof.slot(m, b)].representative(x);
                let w = delta.fibers[delta.prof.slot(a, m)].representative(y);
                let e = qc.expand(&v, &qq, qq.morphism_id(&rep.weight).unwrap())?;
                let weight = w.after(base, Direction::Question, &e)?;
                Ok(SlotRaw { objs: rep.objs.clone(), elems: rep.elems.clone(), weight })
            });
            assert!(w.is_empty(), "{v}: {w:?}");
        }
    }

    #[test]
    fn identity_counts_over_a_point() {
        let p = point();
        let full = q(Variant::FULL, &p, 4);
        let i = cokleisli_identity(Variant::FULL, &full).unwrap();
        for n in 0..=4 {
            assert_eq!(i.size(full.object_of(&vec![0; n]).unwrap(), 0), n);
        }
        let empty = q(Variant::EMPTY, &p, 4);
        let i = cokleisli_identity(Variant::EMPTY, &empty).unwrap();
        for n in 0..=4 {
            assert_eq!(i.size(empty.object_of(&vec![0; n]).unwrap(), 0), usize::from(n == 1));
        }
    }

    #[test]
    fn points_give_the_analytic_functor() {
        let zero = Arc::new(FinCategory::empty());
        let p = point();
        let q0 = q(Variant::SIGMA, &zero, 0);
        let q1 = q(Variant::SIGMA, &p, 2);
        // X supported at arity 2 with the trivial action, z of size 2
        let x = FiniteProfunctor::from_fn(
            Arc::clone(q1.category()),
            Arc::clone(&p),
            |a, _| usize::from(q1.list(a).len() == 2),
            |_, _, e| e,
            |_, _, e| e,
        )
        .unwrap();
        let z = constant(q0.category(), &p, 2);
        let comp = cokleisli_compose(Variant::SIGMA, &x, &z, &q0, &q1, &q0).unwrap();
        assert_eq!(comp.value.prof.size(0, 0), 3);
    }

    #[test]
    fn unit_laws_on_samples() {
        let p = point();
        let c = Arc::new(FinCategory::arrow());
        for v in Variant::MONAD {
            for (seed, base) in [(5, &p), (6, &c)] {
                let qc = q(v, base, 2);
                let mut r = rng(seed);
                let phi = random_profunctor(&mut r, qc.category(), base, 2);
                let report = unit_laws_check(v, &phi, &qc, &qc).unwrap();
                assert!(report.passed(), "{v}\n{report}");
            }
        }
    }

    #[test]
    fn associativity_on_samples() {
        let p = point();
        for v in Variant::MONAD {
            let qc = q(v, &p, 2);
            let wide = q(v, &p, 4);
            let mut r = rng(9);
            let phi = random_profunctor(&mut r, qc.category(), &p, 2);
            let psi = random_profunctor(&mut r, qc.category(), &p, 2);
            let theta = random_profunctor(&mut r, qc.category(), &p, 2);
            let t = Triple { phi: (&phi, &qc), psi: (&psi, &qc), theta: (&theta, &qc), wide: &wide };
            let w = associativity_check(v, &t).unwrap();
            assert!(w.is_empty(), "{v}: {w:?}");
        }
    }

    #[test]
    fn generalized_matches_the_flattened_form() {
        let p = point();
        for v in [Variant::EMPTY, Variant::SIGMA] {
            let qc = q(v, &p, 2);
            let mut r = rng(7);
            let phi = random_profunctor(&mut r, qc.category(), &p, 2);
            let psi = random_profunctor(&mut r, qc.category(), &p, 2);
            let flat = cokleisli_compose(v, &psi, &phi, &qc, &qc, &qc).unwrap();
            let general = generalized_compose(Bundle { monad: &v, law: &Explicit }, &psi, &phi, &qc, &qc, &qc).unwrap();
            let w = compare_lifts(&general.composite.lifted, &flat.lifted, |a, c, r| general.flat_raw(&qc, a, c, r));
            assert!(w.is_empty(), "{v}: {w:?}");
            assert_eq!(general.composite.value.prof.sizes, flat.value.prof.sizes);
        }
    }

    #[test]
    fn identity_monad_gives_plain_composition() {
        let c = Arc::new(FinCategory::arrow());
        let one = ListCategory::new(&IdentityMonad, Arc::clone(&c), Direction::Question, 1, None).unwrap();
        let mut r = rng(2);
        let phi = random_profunctor(&mut r, one.category(), &c, 2);
        let psi = random_profunctor(&mut r, one.category(), &c, 2);
        let g = generalized_compose(Bundle { monad: &IdentityMonad, law: &Explicit }, &psi, &phi, &one, &one, &one)
            .unwrap();
        // transport Φ along C ≅ ?C to compose it in the ordinary way
        let oc = one.category();
        let lifted = FiniteProfunctor::from_fn(
            Arc::clone(oc),
            Arc::clone(oc),
            |a, b| phi.size(a, one.list(b)[0]),
            |u, b, x| phi.left[u][one.list(b)[0]][x],
            |v, a, x| {
                let m = one.morphism(v).family[0];
                phi.right[m][a][x]
            },
        )
        .unwrap();
        let plain = prof_compose(&psi, &lifted).unwrap();
        assert_eq!(g.composite.value.prof.sizes, plain.prof.sizes);
    }

    #[test]
    fn mismatched_categories_are_rejected() {
        let p = point();
        let qc = q(Variant::SIGMA, &p, 2);
        let phi = constant(&p, &p, 1);
        assert!(matches!(flat_lift(Variant::SIGMA, &phi, &qc, &qc, &qc), Err(Error::Mismatch(_))));
    }
}
