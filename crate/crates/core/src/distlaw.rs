//! The transformation `λ: !∘Psh → Psh∘!`,
//!
//! ```text
//! λ(F_1, …, F_n)(C_1, …, C_m) = ∫^{D_1 … D_n} F_1 D_1 × … × F_n D_n × !C[(C_1, …, C_m), (D_1, …, D_n)]
//! ```
//!
//! and checkers for the four distributive-law equations, each evaluated
//! on finite samples and compared through explicit bijections.
//!
//! List categories are truncated. Every coend below reduces, by co-Yoneda,
//! to indices whose length is bounded by the input lists, so truncating the
//! index categories at that length loses nothing.

use std::sync::Arc;

use rand::Rng;

use crate::bang::{hom_lists, Direction, ListCategory, ListMorphism, ShapeMonad};
use crate::diagrams::{FiniteFunction, Variant};
use crate::fincat::{
    induced_map, slot_coend, FinCategory, FunctorView, MorId, ObjId, QuotientFunctor, SetFunctor, SlotRaw,
    SlotVariance, Variance, Weight,
};
use crate::laws::{compare_functors, LawCheck, Report};
use crate::prof::{psh_map, same, sharp, FiniteProfunctor, ProfQuotient};
use crate::samples::{random_presheaf, random_profunctor, rng, small_categories, SampleRng};
use crate::{sweep, Error, Result};

/// Raw element of a value of `λ`: objects `D_i`, elements `x_i ∈ F_i D_i`
/// and a morphism of `!C` into `(D_1, …, D_n)`.
pub type LambdaRaw = SlotRaw<ListMorphism>;

pub type LambdaValue = QuotientFunctor<LambdaRaw>;

/// The weight `!C[C⃗, -]` of a fiber of `λ`.
struct ListHom<'a> {
    monad: &'a dyn ShapeMonad,
    base: &'a FinCategory,
    from: &'a [ObjId],
}

impl Weight for ListHom<'_> {
    type Elem = ListMorphism;

    fn elements(&self, objs: &[ObjId]) -> Result<Vec<ListMorphism>> {
        hom_lists(self.monad, self.base, Direction::Bang, self.from, objs)
    }

    fn act(&self, _objs: &[ObjId], slot: usize, u: MorId, w: &ListMorphism) -> Result<ListMorphism> {
        let mut w = w.clone();
        w.family[slot] =
            self.base.compose(u, w.family[slot]).ok_or_else(|| Error::Mismatch("weight does not compose".into()))?;
        w.tgt[slot] = self.base.tgt(u);
        Ok(w)
    }
}

/// An implementation of `λ` on objects. The explicit formula is
/// [`Explicit`]; other implementations exist to exercise the checkers.
pub trait DistLaw: Sync {
    fn value(&self, monad: &dyn ShapeMonad, bang: &ListCategory, fs: &[SetFunctor]) -> Result<LambdaValue>;
}

/// The boxed formula.
#[derive(Debug, Clone, Copy, Default)]
pub struct Explicit;

impl DistLaw for Explicit {
    fn value(&self, monad: &dyn ShapeMonad, bang: &ListCategory, fs: &[SetFunctor]) -> Result<LambdaValue> {
        lambda_value(monad, bang, fs)
    }
}

/// `λ` with the action of one morphism replaced by a constant map.
#[derive(Debug, Clone, Copy, Default)]
pub struct CorruptedAction;

impl DistLaw for CorruptedAction {
    fn value(&self, monad: &dyn ShapeMonad, bang: &ListCategory, fs: &[SetFunctor]) -> Result<LambdaValue> {
        let mut v = lambda_value(monad, bang, fs)?;
        let c = Arc::clone(&v.functor.base);
        let target = c.non_identity_morphisms().find(|&m| {
            let t = &v.functor.maps[m];
            v.functor.sizes[c.src(m)] > 1 && t.iter().any(|&y| y != 0)
        });
        if let Some(m) = target {
            v.functor.maps[m].iter_mut().for_each(|y| *y = 0);
        }
        Ok(v)
    }
}

/// `λ(F_1, …, F_n)` as a presheaf on the materialized `!C`, for any shape
/// monad.
pub fn lambda_value(monad: &dyn ShapeMonad, bang: &ListCategory, fs: &[SetFunctor]) -> Result<LambdaValue> {
    if bang.direction() != Direction::Bang {
        return Err(Error::InvalidInput("λ takes values in presheaves on a category of the form !C".into()));
    }
    let base = bang.base();
    for f in fs {
        if f.variance != Variance::Contravariant || !same(&f.base, base) {
            return Err(Error::InvalidInput("λ expects presheaves on the base of the list category".into()));
        }
        let problems = f.validate();
        if !problems.is_empty() {
            return Err(Error::InvalidFunctor(problems.join("; ")));
        }
    }
    let objects: Vec<ObjId> = bang.category().objects().collect();
    let fibers = sweep::map(&objects, |&o| {
        let slots: Vec<&dyn FunctorView> = fs.iter().map(|f| f as &dyn FunctorView).collect();
        let w = ListHom { monad, base, from: bang.list(o) };
        slot_coend("value of λ", base, &slots, SlotVariance::Contravariant, &w)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    QuotientFunctor::build(Arc::clone(bang.category()), Variance::Contravariant, fibers, |m, r| {
        let weight = r.weight.after(base, Direction::Bang, bang.morphism(m))?;
        Ok(SlotRaw { objs: r.objs.clone(), elems: r.elems.clone(), weight })
    })
}

/// `λ` for one of the built-in variants.
pub fn lambda_obj(variant: Variant, bang: &ListCategory, fs: &[SetFunctor]) -> Result<LambdaValue> {
    variant.require_monad()?;
    lambda_value(&variant, bang, fs)
}

/// The image of a raw element under a morphism `(F_1, …, F_n) → (G_1, …, G_k)`
/// of `!Psh(C)`: the shape `s` sends positions of the target to positions
/// of the source and `alpha(j, d, x)` is the component at `d` of the
/// natural transformation `F_{s(j)} → G_j`.
pub fn lambda_raw_map(
    base: &FinCategory,
    shape: &FiniteFunction,
    alpha: impl Fn(usize, ObjId, usize) -> usize,
    r: &LambdaRaw,
) -> Result<LambdaRaw> {
    let objs: Vec<ObjId> = shape.table.iter().map(|&i| r.objs[i]).collect();
    let elems: Vec<usize> = (0..shape.dom).map(|j| alpha(j, r.objs[shape.apply(j)], r.elems[shape.apply(j)])).collect();
    let reshape = ListMorphism {
        src: r.objs.clone(),
        tgt: objs.clone(),
        shape: shape.clone(),
        family: objs.iter().map(|&o| base.identity(o)).collect(),
    };
    let weight = reshape.after(base, Direction::Bang, &r.weight)?;
    Ok(SlotRaw { objs, elems, weight })
}

/// The action of `λ` on a morphism of `!Psh(C)` (see [`lambda_raw_map`]),
/// as class maps per object of `!C`.
pub fn lambda_mor(
    monad: &dyn ShapeMonad,
    base: &FinCategory,
    from: &LambdaValue,
    to: &LambdaValue,
    shape: &FiniteFunction,
    alpha: impl Fn(usize, ObjId, usize) -> usize,
) -> Result<Vec<Vec<usize>>> {
    if !monad.contains(shape) {
        return Err(Error::OutsideClass(format!("shape {shape} is not a morphism of {}", monad.label())));
    }
    (0..from.fibers.len())
        .map(|o| induced_map(&from.fibers[o], &to.fibers[o], |r| lambda_raw_map(base, shape, &alpha, r)))
        .collect()
}

/// `!Φ: !C ⇸ !C′` for `Φ: C ⇸ C′`: at `(C⃗, C⃗′)` the value of `λ` on the
/// rows `Φ(C_i, -)` at `C⃗′`. Morphisms of `!C` act through the action of
/// `λ` on morphisms.
pub fn lift_profunctor(
    law: &dyn DistLaw,
    monad: &dyn ShapeMonad,
    from: &ListCategory,
    to: &ListCategory,
    phi: &FiniteProfunctor,
) -> Result<ProfQuotient<LambdaRaw>> {
    if !same(from.base(), &phi.src) || !same(to.base(), &phi.tgt) {
        return Err(Error::Mismatch("list categories do not match the profunctor".into()));
    }
    let rows: Vec<SetFunctor> = phi.src.objects().map(|a| phi.row(a)).collect();
    let values = from
        .lists()
        .iter()
        .map(|l| {
            let fs: Vec<SetFunctor> = l.iter().map(|&a| rows[a].clone()).collect();
            law.value(monad, to, &fs)
        })
        .collect::<Result<Vec<_>>>()?;
    let n2 = to.category().object_count();
    let mut fibers = Vec::with_capacity(values.len() * n2);
    for v in &values {
        fibers.extend(v.fibers.iter().cloned());
    }
    let base_to = to.base();
    ProfQuotient::build(
        Arc::clone(from.category()),
        Arc::clone(to.category()),
        fibers,
        |u, _, r| {
            let m = from.morphism(u);
            lambda_raw_map(base_to, &m.shape, |j, d, x| phi.left[m.family[j]][d][x], r)
        },
        |v, _, r| {
            let weight = r.weight.after(base_to, Direction::Bang, to.morphism(v))?;
            Ok(SlotRaw { objs: r.objs.clone(), elems: r.elems.clone(), weight })
        },
    )
}

fn bang_index(bang: &ListCategory, m: &ListMorphism) -> Result<usize> {
    let id =
        bang.morphism_id(m).ok_or_else(|| Error::Mismatch(format!("{m} is not a morphism of the list category")))?;
    Ok(bang.category().hom_index(id))
}

/// `(λ-η_Psh)`: `λ(Y A_1, …, Y A_n) ≅ !C[-, (A_1, …, A_n)]`, through
/// `(D⃗, h⃗, w) ↦ h⃗ ∘ w`.
pub fn check_eta_psh(law: &dyn DistLaw, monad: &dyn ShapeMonad, bang: &ListCategory) -> LawCheck {
    let mut check = LawCheck::new("(λ-η_Psh)");
    let c = bang.base();
    for (o, list) in bang.lists().iter().enumerate() {
        let ctx = format!("at {}", bang.category().object_name(o));
        check.record_result(
            &ctx,
            (|| {
                let ys: Vec<SetFunctor> = list.iter().map(|&a| SetFunctor::yoneda(Arc::clone(c), a)).collect();
                let lhs = law.value(monad, bang, &ys)?;
                let rhs = SetFunctor::yoneda(Arc::clone(bang.category()), o);
                Ok(crate::prof::compare_presheaves(&lhs, &rhs, |_, r| {
                    let h = ListMorphism {
                        src: r.objs.clone(),
                        tgt: list.clone(),
                        shape: FiniteFunction::identity(list.len()),
                        family: r.elems.iter().enumerate().map(|(i, &e)| c.hom(r.objs[i], list[i])[e]).collect(),
                    };
                    bang_index(bang, &h.after(c, Direction::Bang, &r.weight)?)
                }))
            })(),
        );
    }
    check
}

/// `(λ-η_!)`: `λ((F)) ≅ Psh(η_!)(F)`.
pub fn check_eta_bang(
    law: &dyn DistLaw,
    monad: &dyn ShapeMonad,
    bang: &ListCategory,
    f: &SetFunctor,
) -> Result<Vec<String>> {
    let lhs = law.value(monad, bang, std::slice::from_ref(f))?;
    let rhs = psh_map(&bang.unit_functor()?, f)?;
    Ok(compare_functors(&lhs, &rhs, |_, r| Ok((r.objs[0], bang_index(bang, &r.weight)?, r.elems[0]))))
}

/// `(λ-μ_!)`: `λ ∘ μ_! ≅ Psh(μ_!) ∘ λ_! ∘ !λ` at a nested list of
/// presheaves of total length at most the truncation of `bang`.
pub fn check_mu_bang(
    law: &dyn DistLaw,
    monad: &dyn ShapeMonad,
    bang: &ListCategory,
    nested: &[Vec<SetFunctor>],
) -> Result<Vec<String>> {
    let c = bang.base();
    let bound = bang.lists().iter().map(|l| l.len()).max().unwrap_or(0);
    let flat: Vec<SetFunctor> = nested.concat();
    let lhs = law.value(monad, bang, &flat)?;
    let inner = nested.iter().map(|l| law.value(monad, bang, l)).collect::<Result<Vec<_>>>()?;
    let total = |l: &[ObjId]| l.iter().map(|&o| bang.list(o).len()).sum::<usize>() <= bound;
    let outer = ListCategory::new(monad, Arc::clone(bang.category()), Direction::Bang, bound, Some(&total))?;
    let gs: Vec<SetFunctor> = inner.iter().map(|v| v.functor.clone()).collect();
    let mid = law.value(monad, &outer, &gs)?;
    let mu = bang.flatten_functor(monad, &outer, bang)?;
    let rhs = psh_map(&mu, &mid.functor)?;
    Ok(compare_functors(&lhs, &rhs, |_, r| {
        let mut start = 0;
        let mut objs = Vec::new();
        let mut elems = Vec::new();
        for (k, l) in nested.iter().enumerate() {
            let d: Vec<ObjId> = r.objs[start..start + l.len()].to_vec();
            let x: Vec<usize> = r.elems[start..start + l.len()].to_vec();
            start += l.len();
            let o = bang.object_of(&d).ok_or_else(|| Error::Mismatch("inner list is not materialized".into()))?;
            let raw = SlotRaw { objs: d.clone(), elems: x, weight: ListMorphism::identity(c, &d) };
            let e = inner[k].fibers[o]
                .class_of_elem(&raw)
                .ok_or_else(|| Error::Mismatch("element outside the inner value".into()))?;
            objs.push(o);
            elems.push(e);
        }
        let a = outer.object_of(&objs).ok_or_else(|| Error::Mismatch("nested list is not materialized".into()))?;
        let raw = SlotRaw { objs: objs.clone(), elems, weight: ListMorphism::identity(bang.category(), &objs) };
        let e = mid.fibers[a]
            .class_of_elem(&raw)
            .ok_or_else(|| Error::Mismatch("element outside the middle value".into()))?;
        Ok((a, bang_index(bang, &r.weight)?, e))
    }))
}

/// The Kleisli form of `(λ-μ_Psh)`: `λ_B ∘ !(g^#) ≅ (λ_B ∘ !g)^# ∘ λ_A` at a
/// list of presheaves on `A`, for `g: A ⇸ B`.
pub fn check_kleisli_variant(
    law: &dyn DistLaw,
    monad: &dyn ShapeMonad,
    bang_a: &ListCategory,
    bang_b: &ListCategory,
    g: &FiniteProfunctor,
    xs: &[SetFunctor],
) -> Result<Vec<String>> {
    let lifted = xs.iter().map(|x| sharp(g, x)).collect::<Result<Vec<_>>>()?;
    let gx: Vec<SetFunctor> = lifted.iter().map(|v| v.functor.clone()).collect();
    let lhs = law.value(monad, bang_b, &gx)?;
    let h = lift_profunctor(law, monad, bang_a, bang_b, g)?;
    let lx = law.value(monad, bang_a, xs)?;
    let rhs = sharp(&h.prof, &lx.functor)?;
    let a_cat = bang_a.base();
    Ok(compare_functors(&lhs, &rhs, |b, r| {
        let reps: Vec<&(ObjId, usize, usize)> =
            r.elems.iter().enumerate().map(|(i, &z)| lifted[i].fibers[r.objs[i]].representative(z)).collect();
        let a_list: Vec<ObjId> = reps.iter().map(|t| t.0).collect();
        let a = bang_a.object_of(&a_list).ok_or_else(|| Error::Mismatch("list is not materialized".into()))?;
        let hraw =
            SlotRaw { objs: r.objs.clone(), elems: reps.iter().map(|t| t.1).collect(), weight: r.weight.clone() };
        let p = h.fibers[h.prof.slot(a, b)]
            .class_of_elem(&hraw)
            .ok_or_else(|| Error::Mismatch("element outside the lifted profunctor".into()))?;
        let xraw = SlotRaw {
            objs: a_list.clone(),
            elems: reps.iter().map(|t| t.2).collect(),
            weight: ListMorphism::identity(a_cat, &a_list),
        };
        let e = lx.fibers[a].class_of_elem(&xraw).ok_or_else(|| Error::Mismatch("element outside λ_A".into()))?;
        Ok((a, p, e))
    }))
}

/// Sizes of the seeded family used by [`distlaw_suite`].
#[derive(Debug, Clone, Copy)]
pub struct SuiteSize {
    pub max_value: usize,
    pub max_len: usize,
    pub presheaves_per_category: usize,
    pub profunctors_per_category: usize,
}

impl Default for SuiteSize {
    fn default() -> Self {
        SuiteSize { max_value: 2, max_len: 2, presheaves_per_category: 2, profunctors_per_category: 2 }
    }
}

fn random_nested(rng: &mut SampleRng, c: &Arc<FinCategory>, max_value: usize, max_len: usize) -> Vec<Vec<SetFunctor>> {
    let outer = rng.gen_range(0..=max_len);
    let mut budget = max_len;
    (0..outer)
        .map(|_| {
            let n = rng.gen_range(0..=budget);
            budget -= n;
            (0..n).map(|_| random_presheaf(rng, c, max_value)).collect()
        })
        .collect()
}

/// All four equations for one variant over every category of the fixed
/// family, with seeded presheaves and profunctors.
pub fn distlaw_suite(law: &dyn DistLaw, variant: Variant, seed: u64, size: SuiteSize) -> Result<Report> {
    variant.require_monad()?;
    let cats = small_categories();
    let mut report = Report::new();
    let mut eta_bang = LawCheck::new("(λ-η_!)");
    let mut eta_psh = LawCheck::new("(λ-η_Psh)");
    let mut mu_bang = LawCheck::new("(λ-μ_!)");
    let mut kleisli = LawCheck::new("(λ-μ_Psh), Kleisli form");
    let bangs = cats
        .iter()
        .map(|(_, c)| ListCategory::bang(variant, Arc::clone(c), size.max_len))
        .collect::<Result<Vec<_>>>()?;
    let indices: Vec<usize> = (0..cats.len()).collect();
    let per_category = sweep::map(&indices, |&i| {
        let (name, c) = &cats[i];
        let bang = &bangs[i];
        let mut r = rng(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let e_psh = check_eta_psh(law, &variant, bang);
        let mut e_bang = Vec::new();
        let mut m_bang = Vec::new();
        for k in 0..size.presheaves_per_category {
            let f = random_presheaf(&mut r, c, size.max_value);
            e_bang.push((format!("{name} #{k}"), check_eta_bang(law, &variant, bang, &f)));
            let nested = random_nested(&mut r, c, size.max_value, size.max_len);
            m_bang.push((format!("{name} #{k}"), check_mu_bang(law, &variant, bang, &nested)));
        }
        let mut kl = Vec::new();
        for k in 0..size.profunctors_per_category {
            let j = r.gen_range(0..cats.len());
            let g = random_profunctor(&mut r, c, &cats[j].1, size.max_value);
            let n = r.gen_range(0..=size.max_len);
            let xs: Vec<SetFunctor> = (0..n).map(|_| random_presheaf(&mut r, c, size.max_value)).collect();
            kl.push((
                format!("{name} ⇸ {} #{k}", cats[j].0),
                check_kleisli_variant(law, &variant, bang, &bangs[j], &g, &xs),
            ));
        }
        (name.to_string(), e_psh, e_bang, m_bang, kl)
    });
    for (name, e_psh, e_bang, m_bang, kl) in per_category {
        eta_psh.instances += e_psh.instances;
        eta_psh.failures += e_psh.failures;
        eta_psh.witnesses.extend(e_psh.witnesses.into_iter().map(|w| format!("{name} {w}")));
        for (ctx, r) in e_bang {
            eta_bang.record_result(&ctx, r);
        }
        for (ctx, r) in m_bang {
            mu_bang.record_result(&ctx, r);
        }
        for (ctx, r) in kl {
            kleisli.record_result(&ctx, r);
        }
    }
    eta_psh.witnesses.truncate(8);
    report.push(eta_bang);
    report.push(eta_psh);
    report.push(mu_bang);
    report.push(kleisli);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point() -> Arc<FinCategory> {
        Arc::new(FinCategory::terminal())
    }

    #[test]
    fn value_over_a_point_is_f_times_m() {
        let bang = ListCategory::bang(Variant::FULL, point(), 3).unwrap();
        let f = SetFunctor::constant(point(), Variance::Contravariant, 2);
        let v = lambda_obj(Variant::FULL, &bang, &[f]).unwrap();
        for (o, l) in bang.lists().iter().enumerate() {
            assert_eq!(v.functor.sizes[o], 2 * l.len());
        }
    }

    #[test]
    fn empty_inputs_give_the_empty_presheaf() {
        let c = Arc::new(FinCategory::arrow());
        let bang = ListCategory::bang(Variant::SIGMA, Arc::clone(&c), 2).unwrap();
        let e = SetFunctor::constant(Arc::clone(&c), Variance::Contravariant, 0);
        let v = lambda_obj(Variant::SIGMA, &bang, &[e.clone(), e]).unwrap();
        assert!(v.functor.sizes.iter().all(|&s| s == 0));
    }

    #[test]
    fn excluded_variants_are_rejected() {
        let bang = ListCategory::bang(Variant::SIGMA, point(), 1).unwrap();
        assert!(matches!(lambda_obj(Variant::DELTA, &bang, &[]), Err(Error::NotMonadEnabled(_))));
    }

    #[test]
    fn morphism_actions() {
        let p = point();
        let bang = ListCategory::bang(Variant::FULL, Arc::clone(&p), 2).unwrap();
        let f = SetFunctor::constant(Arc::clone(&p), Variance::Contravariant, 2);
        let one = SetFunctor::constant(Arc::clone(&p), Variance::Contravariant, 1);
        let lf = lambda_obj(Variant::FULL, &bang, &[f.clone()]).unwrap();
        let id = lambda_mor(&Variant::FULL, &p, &lf, &lf, &FiniteFunction::identity(1), |_, _, x| x).unwrap();
        assert!(id.iter().all(|m| m.iter().enumerate().all(|(i, &j)| i == j)));
        // collapsing F to a point is onto
        let l1 = lambda_obj(Variant::FULL, &bang, &[one]).unwrap();
        let collapse = lambda_mor(&Variant::FULL, &p, &lf, &l1, &FiniteFunction::identity(1), |_, _, _| 0).unwrap();
        for (o, m) in collapse.iter().enumerate() {
            let mut hit = m.clone();
            hit.sort_unstable();
            hit.dedup();
            assert_eq!(hit.len(), l1.functor.sizes[o]);
        }
        // duplication (F) → (F, F)
        let lff = lambda_obj(Variant::FULL, &bang, &[f.clone(), f]).unwrap();
        let dup = FiniteFunction::new(2, 1, vec![0, 0]).unwrap();
        let d = lambda_mor(&Variant::FULL, &p, &lf, &lff, &dup, |_, _, x| x).unwrap();
        let one_list = bang.object_of(&[0]).unwrap();
        assert_eq!(lf.functor.sizes[one_list], 2);
        assert_eq!(lff.functor.sizes[one_list], 4);
        // x ↦ (x, x) misses the off-diagonal pairs
        let mut img = d[one_list].clone();
        img.sort_unstable();
        img.dedup();
        assert_eq!(img.len(), 2);
        assert!(matches!(lambda_mor(&Variant::SIGMA, &p, &lf, &lff, &dup, |_, _, x| x), Err(Error::OutsideClass(_))));
    }

    #[test]
    fn eta_psh_reduces_to_hom_sets() {
        let c = Arc::new(crate::samples::idempotent_arrow());
        for v in Variant::MONAD {
            let bang = ListCategory::bang(v, Arc::clone(&c), 2).unwrap();
            let check = check_eta_psh(&Explicit, &v, &bang);
            assert!(check.passed(), "{v}: {:?}", check.witnesses);
        }
    }

    #[test]
    fn suite_passes_for_one_variant() {
        let report = distlaw_suite(&Explicit, Variant::SIGMA, 1, SuiteSize::default()).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn corrupted_action_fails_with_a_witness() {
        let c = Arc::new(FinCategory::arrow());
        let bang = ListCategory::bang(Variant::SIGMA, c, 2).unwrap();
        let check = check_eta_psh(&CorruptedAction, &Variant::SIGMA, &bang);
        assert!(!check.passed());
        assert!(check.witnesses.iter().any(|w| w.contains("not natural")), "{:?}", check.witnesses);
    }
}
