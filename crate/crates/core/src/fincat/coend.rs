use std::fmt::Debug;
use std::sync::Arc;

use super::{
    induced_map, BiFunctor, FinCategory, FinFunctor, FunctorView, MorId, ObjId, QuotientBuilder, QuotientSet,
    SetFunctor, Variance,
};
use crate::{limits, Error, Result};

/// A functor whose value at each object is a set of coend classes.
/// Element `i` of `functor` at `o` is class `i` of `fibers[o]`.
#[derive(Debug, Clone)]
pub struct QuotientFunctor<T> {
    pub functor: SetFunctor,
    pub fibers: Vec<QuotientSet<T>>,
}

impl<T: Ord + Clone + Debug> QuotientFunctor<T> {
    /// Assembles fibers into a functor; `act(m, x)` moves a raw element
    /// along `m` (in the direction fixed by `variance`).
    pub fn build(
        base: Arc<FinCategory>,
        variance: Variance,
        fibers: Vec<QuotientSet<T>>,
        act: impl Fn(MorId, &T) -> Result<T>,
    ) -> Result<Self> {
        let mut maps = Vec::with_capacity(base.morphism_count());
        for m in 0..base.morphism_count() {
            let (from, to) = match variance {
                Variance::Covariant => (base.src(m), base.tgt(m)),
                Variance::Contravariant => (base.tgt(m), base.src(m)),
            };
            if base.is_identity(m) {
                maps.push((0..fibers[from].len()).collect());
            } else {
                maps.push(induced_map(&fibers[from], &fibers[to], |x| act(m, x))?);
            }
        }
        let sizes = fibers.iter().map(|q| q.len()).collect();
        let functor = SetFunctor { base, variance, sizes, maps, labels: None };
        let functor = functor.checked()?;
        Ok(QuotientFunctor { functor, fibers })
    }
}

/// The colimit of a covariant functor: all elements modulo `x ~ d(f)(x)`.
pub fn colimit(d: &SetFunctor) -> Result<QuotientSet<(ObjId, usize)>> {
    if d.variance != Variance::Covariant {
        return Err(Error::InvalidInput("colimit expects a covariant functor".into()));
    }
    let problems = d.validate();
    if !problems.is_empty() {
        return Err(Error::InvalidFunctor(problems.join("; ")));
    }
    let c = &d.base;
    let raw: Vec<(ObjId, usize)> = c.objects().flat_map(|o| (0..d.sizes[o]).map(move |x| (o, x))).collect();
    let mut b = QuotientBuilder::with_cap("colimit", raw)?;
    for m in c.non_identity_morphisms() {
        for x in 0..d.sizes[c.src(m)] {
            b.relate(&(c.src(m), x), &(c.tgt(m), d.maps[m][x]))?;
        }
    }
    Ok(b.finish())
}

/// The coend of `H: C^op × C → Set`: the disjoint union of the `H(c, c)`
/// modulo `H(u, id)(x) ~ H(id, u)(x)` for `u: c → c'`, `x ∈ H(c', c)`.
pub fn coend(h: &BiFunctor) -> Result<QuotientSet<(ObjId, usize)>> {
    let problems = h.validate();
    if !problems.is_empty() {
        return Err(Error::InvalidFunctor(problems.join("; ")));
    }
    let c = &h.base;
    let raw: Vec<(ObjId, usize)> = c.objects().flat_map(|o| (0..h.size(o, o)).map(move |x| (o, x))).collect();
    let mut b = QuotientBuilder::with_cap("coend", raw)?;
    for u in c.non_identity_morphisms() {
        let (s, t) = (c.src(u), c.tgt(u));
        for x in 0..h.size(t, s) {
            b.relate(&(s, h.left[u][s][x]), &(t, h.right[u][t][x]))?;
        }
    }
    Ok(b.finish())
}

/// `∫^c P(c) × Q(c)` for `P` covariant and `Q` contravariant on `cat`.
/// Raw elements are `(c, p, q)`; for `u: c → c'`, `p ∈ P(c)`, `q ∈ Q(c')`
/// the relation is `(c, p, Q(u) q) ~ (c', P(u) p, q)`.
pub fn product_coend(
    what: &str,
    cat: &FinCategory,
    p: &dyn FunctorView,
    q: &dyn FunctorView,
) -> Result<QuotientSet<(ObjId, usize, usize)>> {
    let total: u128 = cat.objects().map(|o| (p.size(o) as u128) * (q.size(o) as u128)).sum();
    limits::check(what, total)?;
    let mut raw = Vec::with_capacity(total as usize);
    for o in cat.objects() {
        for i in 0..p.size(o) {
            for j in 0..q.size(o) {
                raw.push((o, i, j));
            }
        }
    }
    let mut b = QuotientBuilder::new(raw);
    for u in cat.non_identity_morphisms() {
        let (s, t) = (cat.src(u), cat.tgt(u));
        for i in 0..p.size(s) {
            let pi = p.act(u, i);
            for j in 0..q.size(t) {
                b.relate(&(s, i, q.act(u, j)), &(t, pi, j))?;
            }
        }
    }
    Ok(b.finish())
}

/// Raw element of a multi-slot coend: one object and one element per
/// slot, plus a weight element over the tuple of objects.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotRaw<W> {
    pub objs: Vec<ObjId>,
    pub elems: Vec<usize>,
    pub weight: W,
}

/// Variance of the slot functors; the weight has the opposite variance in
/// every slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotVariance {
    Covariant,
    Contravariant,
}

/// The weight `W(d_1, …, d_k)` of a multi-slot coend.
pub trait Weight {
    type Elem: Ord + Clone + Debug;

    fn elements(&self, objs: &[ObjId]) -> Result<Vec<Self::Elem>>;

    /// Acts with `u: d → e` in slot `slot` on `w ∈ W(objs)`. With covariant
    /// slots `objs[slot] = e` and the result lies over `objs[slot := d]`;
    /// with contravariant slots `objs[slot] = d` and the result lies over
    /// `objs[slot := e]`.
    fn act(&self, objs: &[ObjId], slot: usize, u: MorId, w: &Self::Elem) -> Result<Self::Elem>;
}

/// `∫^{d_1 … d_k} P_1(d_1) × … × P_k(d_k) × W(d_1, …, d_k)` with all slots
/// ranging over `cat`.
pub fn slot_coend<W: Weight>(
    what: &str,
    cat: &FinCategory,
    slots: &[&dyn FunctorView],
    variance: SlotVariance,
    weight: &W,
) -> Result<QuotientSet<SlotRaw<W::Elem>>> {
    let k = slots.len();
    let n = cat.object_count();
    let cap = limits::element_cap();
    let mut raw = Vec::new();
    let mut objs = vec![0; k];
    if n > 0 || k == 0 {
        loop {
            let sizes: Vec<usize> = (0..k).map(|i| slots[i].size(objs[i])).collect();
            if sizes.iter().all(|&s| s > 0) {
                let ws = weight.elements(&objs)?;
                if !ws.is_empty() {
                    let count: u128 = sizes.iter().map(|&s| s as u128).product::<u128>() * ws.len() as u128;
                    limits::check(what, raw.len() as u128 + count)?;
                    for elems in tuples(&sizes) {
                        for w in &ws {
                            raw.push(SlotRaw { objs: objs.clone(), elems: elems.clone(), weight: w.clone() });
                        }
                    }
                }
            }
            if !advance(&mut objs, n) {
                break;
            }
        }
    }
    debug_assert!(raw.len() <= cap);
    let mut b = QuotientBuilder::new(raw);
    let templates: Vec<SlotRaw<W::Elem>> = b.raw().to_vec();
    for i in 0..k {
        for r in templates.iter().filter(|r| r.elems[i] == 0) {
            let here = r.objs[i];
            match variance {
                SlotVariance::Covariant => {
                    for u in cat.non_identity_morphisms().filter(|&u| cat.tgt(u) == here) {
                        let d = cat.src(u);
                        for a in 0..slots[i].size(d) {
                            let mut right = r.clone();
                            right.elems[i] = slots[i].act(u, a);
                            let mut left_objs = r.objs.clone();
                            left_objs[i] = d;
                            let w = weight.act(&r.objs, i, u, &r.weight)?;
                            let mut left_elems = r.elems.clone();
                            left_elems[i] = a;
                            let left = SlotRaw { objs: left_objs, elems: left_elems, weight: w };
                            b.relate(&left, &right)?;
                        }
                    }
                }
                SlotVariance::Contravariant => {
                    for u in cat.non_identity_morphisms().filter(|&u| cat.src(u) == here) {
                        let e = cat.tgt(u);
                        for a in 0..slots[i].size(e) {
                            let mut left = r.clone();
                            left.elems[i] = slots[i].act(u, a);
                            let mut right_objs = r.objs.clone();
                            right_objs[i] = e;
                            let w = weight.act(&r.objs, i, u, &r.weight)?;
                            let mut right_elems = r.elems.clone();
                            right_elems[i] = a;
                            let right = SlotRaw { objs: right_objs, elems: right_elems, weight: w };
                            b.relate(&left, &right)?;
                        }
                    }
                }
            }
        }
    }
    Ok(b.finish())
}

/// All tuples `t` with `t[i] < sizes[i]`, in lexicographic order.
pub fn tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    if sizes.iter().any(|&s| s == 0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut t = vec![0; sizes.len()];
    loop {
        out.push(t.clone());
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < sizes[i] {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Odometer step over `0..n` in every position; false after the last tuple.
fn advance(t: &mut [usize], n: usize) -> bool {
    let mut i = t.len();
    while i > 0 {
        i -= 1;
        t[i] += 1;
        if t[i] < n {
            return true;
        }
        t[i] = 0;
    }
    false
}

struct HomInto<'a> {
    k: &'a FinFunctor,
    target: ObjId,
}

impl FunctorView for HomInto<'_> {
    fn size(&self, m: ObjId) -> usize {
        self.k.tgt.hom(self.k.obj[m], self.target).len()
    }
    fn act(&self, u: MorId, idx: usize) -> usize {
        let c = &self.k.tgt;
        let f = c.hom(self.k.obj[c_tgt(self.k, u)], self.target)[idx];
        c.hom_index(c.compose(f, self.k.mor[u]).expect("composable"))
    }
}

fn c_tgt(k: &FinFunctor, u: MorId) -> ObjId {
    k.src.tgt(u)
}

/// The left Kan extension `Lan_K T (c) = ∫^m C[K m, c] × T m`. Raw
/// elements are `(m, x, f)` with `x ∈ T m` and `f` the index of a morphism
/// in `C[K m, c]`.
pub fn lan_along(k: &FinFunctor, t: &SetFunctor) -> Result<QuotientFunctor<(ObjId, usize, usize)>> {
    let problems = k.validate();
    if !problems.is_empty() {
        return Err(Error::InvalidFunctor(problems.join("; ")));
    }
    if t.variance != Variance::Covariant || *t.base != *k.src {
        return Err(Error::InvalidInput("lan_along expects a covariant functor on the source of K".into()));
    }
    let problems = t.validate();
    if !problems.is_empty() {
        return Err(Error::InvalidFunctor(problems.join("; ")));
    }
    let c = &k.tgt;
    let mut fibers = Vec::with_capacity(c.object_count());
    for target in c.objects() {
        let view = HomInto { k, target };
        fibers.push(product_coend("lan_along", &k.src, t, &view)?);
    }
    QuotientFunctor::build(Arc::clone(c), Variance::Covariant, fibers, |g, &(m, x, f)| {
        let km = k.obj[m];
        let fm = c.hom(km, c.src(g))[f];
        let gf = c.compose(g, fm).expect("composable");
        Ok((m, x, c.hom_index(gf)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::compare;

    #[test]
    fn discrete_colimit_is_disjoint_union() {
        let c = Arc::new(FinCategory::discrete(2));
        let d = SetFunctor::from_fn(c, Variance::Covariant, vec![2, 3], |_, x| x).unwrap();
        assert_eq!(colimit(&d).unwrap().len(), 5);
    }

    #[test]
    fn parallel_pair_coequalizer() {
        let c = Arc::new(FinCategory::parallel_pair());
        // f = (a ↦ x, b ↦ y), g = (a ↦ y, b ↦ y)
        let maps = vec![vec![0, 1], vec![0, 1, 2], vec![0, 1], vec![1, 1]];
        let d = SetFunctor::new(c, Variance::Covariant, vec![2, 3], maps).unwrap();
        let q = colimit(&d).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.class_of_elem(&(1, 0)), q.class_of_elem(&(1, 1)));
        assert_ne!(q.class_of_elem(&(1, 0)), q.class_of_elem(&(1, 2)));
    }

    #[test]
    fn constant_point_over_connected_base() {
        let c = Arc::new(FinCategory::iso_pair());
        let d = SetFunctor::constant(c, Variance::Covariant, 1);
        assert_eq!(colimit(&d).unwrap().len(), 1);
    }

    #[test]
    fn empty_diagram_has_empty_colimit() {
        let c = Arc::new(FinCategory::empty());
        let d = SetFunctor::constant(c, Variance::Covariant, 0);
        assert!(colimit(&d).unwrap().is_empty());
    }

    #[test]
    fn co_yoneda_on_the_arrow() {
        let c = Arc::new(FinCategory::arrow());
        // X(A) has 2 elements, X(B) has 1, X(f) sends the point to the first.
        let x =
            SetFunctor::new(Arc::clone(&c), Variance::Contravariant, vec![2, 1], vec![vec![0, 1], vec![0], vec![0]])
                .unwrap();
        for a in c.objects() {
            let y = SetFunctor::representable(Arc::clone(&c), a);
            let h = BiFunctor::product(&x, &y).unwrap();
            let q = coend(&h).unwrap();
            assert_eq!(q.len(), x.sizes[a]);
            // (c', (x, f)) ↦ X(f)(x) is a bijection onto X(a).
            let target = QuotientSet::discrete((0..x.sizes[a]).collect());
            let cmp = compare(&q, &target, |&(o, e)| {
                let ya = y.sizes[o];
                let (xi, fi) = (e / ya, e % ya);
                let f = c.hom(a, o)[fi];
                Ok(x.maps[f][xi])
            });
            assert!(cmp.is_bijection(), "{:?}", cmp.failures);
        }
    }

    #[test]
    fn lan_along_identity_is_t() {
        let c = Arc::new(FinCategory::parallel_pair());
        let t = SetFunctor::new(
            Arc::clone(&c),
            Variance::Covariant,
            vec![2, 3],
            vec![vec![0, 1], vec![0, 1, 2], vec![0, 1], vec![1, 1]],
        )
        .unwrap();
        let lan = lan_along(&FinFunctor::identity(Arc::clone(&c)), &t).unwrap();
        assert_eq!(lan.functor.sizes, t.sizes);
    }

    #[test]
    fn lan_of_point_at_source_is_representable() {
        let arrow = Arc::new(FinCategory::arrow());
        let one = Arc::new(FinCategory::terminal());
        let k = FinFunctor::new(Arc::clone(&one), Arc::clone(&arrow), vec![0], vec![arrow.identity(0)]).unwrap();
        let t = SetFunctor::constant(one, Variance::Covariant, 1);
        let lan = lan_along(&k, &t).unwrap();
        assert_eq!(lan.functor.sizes, vec![1, 1]);
        let discrete_b =
            FinFunctor::new(Arc::new(FinCategory::terminal()), Arc::clone(&arrow), vec![1], vec![arrow.identity(1)])
                .unwrap();
        let lan_b =
            lan_along(&discrete_b, &SetFunctor::constant(Arc::new(FinCategory::terminal()), Variance::Covariant, 1))
                .unwrap();
        assert_eq!(lan_b.functor.sizes, vec![0, 1]);
    }
}
