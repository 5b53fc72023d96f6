//! Finite profunctors `Φ: C ⇸ C′`, i.e. functors `C × C′^op → Set`, their
//! composition by coends, and the presheaf Kleisli structure: the lifting
//! `F^#` of `F: C ⇸ D` to presheaves and the action `Psh(F)` of functors.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::fincat::json::{load_category, parse, read};
use crate::fincat::{
    compare, induced_map, product_coend, FinCategory, FinFunctor, FunctorView, MorId, ObjId, QuotientFunctor,
    QuotientSet, SetFunctor, Variance,
};
use crate::laws::{naturality, LawCheck, Report};
use crate::{Error, Result};

/// `Φ: C ⇸ C′`. Elements of `Φ(a, b)` are `0..sizes[a * |C′| + b]`.
/// For `u: a → a′` in `C`, `left[u][b]` maps `Φ(a, b)` to `Φ(a′, b)`;
/// for `v: b → b′` in `C′`, `right[v][a]` maps `Φ(a, b′)` to `Φ(a, b)`.
#[derive(Debug, Clone)]
pub struct FiniteProfunctor {
    pub src: Arc<FinCategory>,
    pub tgt: Arc<FinCategory>,
    pub sizes: Vec<usize>,
    pub left: Vec<Vec<Vec<usize>>>,
    pub right: Vec<Vec<Vec<usize>>>,
}

pub(crate) fn same(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FiniteProfunctor {
    pub fn slot(&self, a: ObjId, b: ObjId) -> usize {
        a * self.tgt.object_count() + b
    }

    pub fn size(&self, a: ObjId, b: ObjId) -> usize {
        self.sizes[self.slot(a, b)]
    }

    /// Builds the action tables from functions; `left(u, b, x)` and
    /// `right(v, a, x)` follow the conventions of the type.
    pub fn from_fn(
        src: Arc<FinCategory>,
        tgt: Arc<FinCategory>,
        size: impl Fn(ObjId, ObjId) -> usize,
        left: impl Fn(MorId, ObjId, usize) -> usize,
        right: impl Fn(MorId, ObjId, usize) -> usize,
    ) -> Result<Self> {
        let (n, n2) = (src.object_count(), tgt.object_count());
        let sizes: Vec<usize> = (0..n * n2).map(|i| size(i / n2, i % n2)).collect();
        let left = (0..src.morphism_count())
            .map(|u| (0..n2).map(|b| (0..sizes[src.src(u) * n2 + b]).map(|x| left(u, b, x)).collect()).collect())
            .collect();
        let right = (0..tgt.morphism_count())
            .map(|v| (0..n).map(|a| (0..sizes[a * n2 + tgt.tgt(v)]).map(|x| right(v, a, x)).collect()).collect())
            .collect();
        FiniteProfunctor { src, tgt, sizes, left, right }.checked()
    }

    pub fn checked(self) -> Result<Self> {
        let p = self.validate();
        if p.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidFunctor(p.join("; ")))
        }
    }

    /// Every violation of functoriality or of commutation of the two
    /// actions.
    pub fn validate(&self) -> Vec<String> {
        let (c, d) = (&self.src, &self.tgt);
        let (n, n2) = (c.object_count(), d.object_count());
        let mut out = Vec::new();
        if self.sizes.len() != n * n2 || self.left.len() != c.morphism_count() || self.right.len() != d.morphism_count()
        {
            out.push("tables have the wrong length".into());
            return out;
        }
        for u in 0..c.morphism_count() {
            for b in 0..n2 {
                let t = &self.left[u][b];
                if t.len() != self.size(c.src(u), b) || t.iter().any(|&y| y >= self.size(c.tgt(u), b)) {
                    out.push(format!(
                        "left action of {} at {} has the wrong type",
                        c.morphism(u).name,
                        d.object_name(b)
                    ));
                }
            }
        }
        for v in 0..d.morphism_count() {
            for a in 0..n {
                let t = &self.right[v][a];
                if t.len() != self.size(a, d.tgt(v)) || t.iter().any(|&y| y >= self.size(a, d.src(v))) {
                    out.push(format!(
                        "right action of {} at {} has the wrong type",
                        d.morphism(v).name,
                        c.object_name(a)
                    ));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for a in 0..n {
            for b in 0..n2 {
                let (ia, ib) = (c.identity(a), d.identity(b));
                if self.left[ia][b].iter().enumerate().any(|(x, &y)| x != y)
                    || self.right[ib][a].iter().enumerate().any(|(x, &y)| x != y)
                {
                    out.push(format!(
                        "identities do not act trivially at ({}, {})",
                        c.object_name(a),
                        d.object_name(b)
                    ));
                }
            }
        }
        for f in 0..c.morphism_count() {
            for g in c.hom_from(c.tgt(f)) {
                let Some(gf) = c.compose(g, f) else { continue };
                for b in 0..n2 {
                    if (0..self.size(c.src(f), b)).any(|x| self.left[gf][b][x] != self.left[g][b][self.left[f][b][x]]) {
                        out.push(format!(
                            "left action of {} is not the composite at {}",
                            c.morphism(gf).name,
                            d.object_name(b)
                        ));
                    }
                }
            }
        }
        for f in 0..d.morphism_count() {
            for g in d.hom_from(d.tgt(f)) {
                let Some(gf) = d.compose(g, f) else { continue };
                for a in 0..n {
                    if (0..self.size(a, d.tgt(g)))
                        .any(|x| self.right[gf][a][x] != self.right[f][a][self.right[g][a][x]])
                    {
                        out.push(format!(
                            "right action of {} is not the composite at {}",
                            d.morphism(gf).name,
                            c.object_name(a)
                        ));
                    }
                }
            }
        }
        for u in c.non_identity_morphisms() {
            for v in d.non_identity_morphisms() {
                let (a, a2, b, b2) = (c.src(u), c.tgt(u), d.src(v), d.tgt(v));
                for x in 0..self.size(a, b2) {
                    let lr = self.left[u][b][self.right[v][a][x]];
                    let rl = self.right[v][a2][self.left[u][b2][x]];
                    if lr != rl {
                        out.push(format!(
                            "actions of {} and {} do not commute",
                            c.morphism(u).name,
                            d.morphism(v).name
                        ));
                        break;
                    }
                }
            }
        }
        out
    }

    /// The hom profunctor `Id(a, b) = C[b, a]`; elements index `hom(b, a)`.
    pub fn identity(c: Arc<FinCategory>) -> Self {
        let cc = Arc::clone(&c);
        let h = Arc::clone(&c);
        let r = Arc::clone(&c);
        FiniteProfunctor::from_fn(
            Arc::clone(&c),
            c,
            |a, b| cc.hom(b, a).len(),
            |u, b, x| {
                let f = h.hom(b, h.src(u))[x];
                h.hom_index(h.compose(u, f).expect("composable"))
            },
            |v, a, x| {
                let f = r.hom(r.tgt(v), a)[x];
                r.hom_index(r.compose(f, v).expect("composable"))
            },
        )
        .expect("hom profunctor")
    }

    /// `Φ^op: C′^op ⇸ C^op`, `Φ^op(b, a) = Φ(a, b)`.
    pub fn dual(&self) -> Self {
        let (n, n2) = (self.src.object_count(), self.tgt.object_count());
        let sizes = (0..n2 * n).map(|i| self.size(i % n, i / n)).collect();
        FiniteProfunctor {
            src: Arc::new(self.tgt.opposite()),
            tgt: Arc::new(self.src.opposite()),
            sizes,
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    /// A presheaf `X` on `C` as the profunctor `1 ⇸ C`.
    pub fn from_presheaf(x: &SetFunctor) -> Result<Self> {
        if x.variance != Variance::Contravariant {
            return Err(Error::InvalidInput("expected a presheaf".into()));
        }
        let one = Arc::new(FinCategory::terminal());
        let xs = x.clone();
        let x2 = x.clone();
        FiniteProfunctor::from_fn(one, Arc::clone(&x.base), |_, b| xs.sizes[b], |_, _, e| e, |v, _, e| x2.maps[v][e])
    }

    /// `Φ(a, -)` as a presheaf on `C′`.
    pub fn row(&self, a: ObjId) -> SetFunctor {
        let d = &self.tgt;
        SetFunctor {
            base: Arc::clone(d),
            variance: Variance::Contravariant,
            sizes: d.objects().map(|b| self.size(a, b)).collect(),
            maps: (0..d.morphism_count()).map(|v| self.right[v][a].clone()).collect(),
            labels: None,
        }
    }

    /// `Φ(-, b)` as a covariant functor on `C`.
    pub fn column(&self, b: ObjId) -> SetFunctor {
        let c = &self.src;
        SetFunctor {
            base: Arc::clone(c),
            variance: Variance::Covariant,
            sizes: c.objects().map(|a| self.size(a, b)).collect(),
            maps: (0..c.morphism_count()).map(|u| self.left[u][b].clone()).collect(),
            labels: None,
        }
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }
}

struct Column<'a>(&'a FiniteProfunctor, ObjId);

impl FunctorView for Column<'_> {
    fn size(&self, a: ObjId) -> usize {
        self.0.size(a, self.1)
    }
    fn act(&self, u: MorId, x: usize) -> usize {
        self.0.left[u][self.1][x]
    }
}

struct Row<'a>(&'a FiniteProfunctor, ObjId);

impl FunctorView for Row<'_> {
    fn size(&self, b: ObjId) -> usize {
        self.0.size(self.1, b)
    }
    fn act(&self, v: MorId, x: usize) -> usize {
        self.0.right[v][self.1][x]
    }
}

/// A profunctor whose values are coend classes; element `i` of
/// `prof` at `(a, b)` is class `i` of `fibers[prof.slot(a, b)]`.
#[derive(Debug, Clone)]
pub struct ProfQuotient<T> {
    pub prof: FiniteProfunctor,
    pub fibers: Vec<QuotientSet<T>>,
}

impl<T: Ord + Clone + Debug> ProfQuotient<T> {
    /// Assembles fibers; `left(u, b, x)` moves a raw element of the fiber
    /// at `(src u, b)` to the fiber at `(tgt u, b)`, and `right(v, a, x)`
    /// moves a raw element at `(a, tgt v)` to `(a, src v)`.
    pub fn build(
        src: Arc<FinCategory>,
        tgt: Arc<FinCategory>,
        fibers: Vec<QuotientSet<T>>,
        left: impl Fn(MorId, ObjId, &T) -> Result<T>,
        right: impl Fn(MorId, ObjId, &T) -> Result<T>,
    ) -> Result<Self> {
        let (n, n2) = (src.object_count(), tgt.object_count());
        let slot = |a: ObjId, b: ObjId| a * n2 + b;
        let mut lt = Vec::with_capacity(src.morphism_count());
        for u in 0..src.morphism_count() {
            let mut per = Vec::with_capacity(n2);
            for b in 0..n2 {
                let (s, t) = (slot(src.src(u), b), slot(src.tgt(u), b));
                if src.is_identity(u) {
                    per.push((0..fibers[s].len()).collect());
                } else {
                    per.push(induced_map(&fibers[s], &fibers[t], |x| left(u, b, x))?);
                }
            }
            lt.push(per);
        }
        let mut rt = Vec::with_capacity(tgt.morphism_count());
        for v in 0..tgt.morphism_count() {
            let mut per = Vec::with_capacity(n);
            for a in 0..n {
                let (s, t) = (slot(a, tgt.tgt(v)), slot(a, tgt.src(v)));
                if tgt.is_identity(v) {
                    per.push((0..fibers[s].len()).collect());
                } else {
                    per.push(induced_map(&fibers[s], &fibers[t], |x| right(v, a, x))?);
                }
            }
            rt.push(per);
        }
        let sizes = fibers.iter().map(|q| q.len()).collect();
        let prof = FiniteProfunctor { src, tgt, sizes, left: lt, right: rt }.checked()?;
        Ok(ProfQuotient { prof, fibers })
    }
}

/// Raw element of a composite: `(c′, ψ, φ)` with `ψ ∈ Ψ(c′, c″)` and
/// `φ ∈ Φ(c, c′)`.
pub type ComposeRaw = (ObjId, usize, usize);

/// `(Ψ∘Φ)(c, c″) = ∫^{c′} Ψ(c′, c″) × Φ(c, c′)`.
pub fn prof_compose(psi: &FiniteProfunctor, phi: &FiniteProfunctor) -> Result<ProfQuotient<ComposeRaw>> {
    if !same(&phi.tgt, &psi.src) {
        return Err(Error::Mismatch("the middle categories of the composite differ".into()));
    }
    let (c, mid, c2) = (&phi.src, &phi.tgt, &psi.tgt);
    let mut fibers = Vec::with_capacity(c.object_count() * c2.object_count());
    for a in c.objects() {
        for b in c2.objects() {
            fibers.push(product_coend("profunctor composite", mid, &Column(psi, b), &Row(phi, a))?);
        }
    }
    ProfQuotient::build(
        Arc::clone(c),
        Arc::clone(c2),
        fibers,
        |u, _, &(m, p, q)| Ok((m, p, phi.left[u][m][q])),
        |v, _, &(m, p, q)| Ok((m, psi.right[v][m][p], q)),
    )
}

pub fn prof_identity(c: Arc<FinCategory>) -> FiniteProfunctor {
    FiniteProfunctor::identity(c)
}

/// `F^# X (d) = ∫^c X c × F(c, d)` for `F: C ⇸ D` and a presheaf `X` on
/// `C`. Raw elements are `(c, φ, x)`.
pub fn sharp(f: &FiniteProfunctor, x: &SetFunctor) -> Result<QuotientFunctor<(ObjId, usize, usize)>> {
    if x.variance != Variance::Contravariant || !same(&x.base, &f.src) {
        return Err(Error::InvalidInput("sharp expects a presheaf on the source of the profunctor".into()));
    }
    let d = &f.tgt;
    let fibers =
        d.objects().map(|b| product_coend("lifted presheaf", &f.src, &Column(f, b), x)).collect::<Result<Vec<_>>>()?;
    QuotientFunctor::build(Arc::clone(d), Variance::Contravariant, fibers, |v, &(c, p, e)| Ok((c, f.right[v][c][p], e)))
}

/// The profunctor `(c, d) ↦ D[d, F c]` of a functor `F: C → D`, i.e.
/// `η ∘ F`; elements index `hom(d, F c)`.
pub fn yoneda_along(f: &FinFunctor) -> Result<FiniteProfunctor> {
    let (c, d) = (Arc::clone(&f.src), Arc::clone(&f.tgt));
    let (d1, d2, d3) = (Arc::clone(&d), Arc::clone(&d), Arc::clone(&d));
    FiniteProfunctor::from_fn(
        c,
        d,
        |a, b| d1.hom(b, f.obj[a]).len(),
        |u, b, x| {
            let g = d2.hom(b, f.obj[f.src.src(u)])[x];
            d2.hom_index(d2.compose(f.mor[u], g).expect("composable"))
        },
        |v, a, x| {
            let g = d3.hom(d3.tgt(v), f.obj[a])[x];
            d3.hom_index(d3.compose(g, v).expect("composable"))
        },
    )
}

/// `Psh(F) X (d) = ∫^c X c × D[d, F c]`.
pub fn psh_map(f: &FinFunctor, x: &SetFunctor) -> Result<QuotientFunctor<(ObjId, usize, usize)>> {
    sharp(&yoneda_along(f)?, x)
}

fn discrete_fiber(n: usize) -> QuotientSet<usize> {
    QuotientSet::discrete((0..n).collect())
}

/// Compares a coend-valued presheaf with a plain one along `map`, checking
/// bijectivity in every fiber and naturality of the resulting family.
pub fn compare_presheaves<T: Ord + Clone + Debug>(
    lhs: &QuotientFunctor<T>,
    rhs: &SetFunctor,
    map: impl Fn(ObjId, &T) -> Result<usize>,
) -> Vec<String> {
    let c = &lhs.functor.base;
    let mut out = Vec::new();
    let mut images = Vec::new();
    for o in c.objects() {
        let cmp = compare(&lhs.fibers[o], &discrete_fiber(rhs.sizes[o]), |t| map(o, t));
        out.extend(cmp.failures.iter().map(|w| format!("at {}: {w}", c.object_name(o))));
        images.push(cmp.image);
    }
    if out.is_empty() {
        out.extend(naturality(&lhs.functor, rhs, &images));
    }
    out
}

/// Naturality of a family `maps[slot]` between two profunctors with the
/// same boundary, in both arguments.
pub fn prof_naturality(s: &FiniteProfunctor, t: &FiniteProfunctor, maps: &[Vec<Option<usize>>]) -> Vec<String> {
    let (c, d) = (&s.src, &s.tgt);
    let mut out = Vec::new();
    for u in c.non_identity_morphisms() {
        for b in d.objects() {
            let (from, to) = (s.slot(c.src(u), b), s.slot(c.tgt(u), b));
            for x in 0..s.sizes[from] {
                let lhs = maps[to][s.left[u][b][x]];
                let rhs = maps[from][x].map(|y| t.left[u][b][y]);
                if lhs.is_none() || lhs != rhs {
                    out.push(format!(
                        "not natural along {} at ({}, {})",
                        c.morphism(u).name,
                        c.object_name(c.src(u)),
                        d.object_name(b)
                    ));
                    return out;
                }
            }
        }
    }
    for v in d.non_identity_morphisms() {
        for a in c.objects() {
            let (from, to) = (s.slot(a, d.tgt(v)), s.slot(a, d.src(v)));
            for x in 0..s.sizes[from] {
                let lhs = maps[to][s.right[v][a][x]];
                let rhs = maps[from][x].map(|y| t.right[v][a][y]);
                if lhs.is_none() || lhs != rhs {
                    out.push(format!(
                        "not natural along {} at ({}, {})",
                        d.morphism(v).name,
                        c.object_name(a),
                        d.object_name(d.tgt(v))
                    ));
                    return out;
                }
            }
        }
    }
    out
}

/// Compares fiberwise along `map` (raw element of the lhs fiber at `slot`
/// to raw element of the rhs fiber at the same slot) and checks naturality.
pub fn compare_profunctors<A, B>(
    lhs: &ProfQuotient<A>,
    rhs_prof: &FiniteProfunctor,
    rhs_fibers: &[QuotientSet<B>],
    map: impl Fn(ObjId, ObjId, &A) -> Result<B>,
) -> Vec<String>
where
    A: Ord + Clone + Debug,
    B: Ord + Clone + Debug,
{
    let (c, d) = (&lhs.prof.src, &lhs.prof.tgt);
    let mut out = Vec::new();
    let mut images = Vec::new();
    for a in c.objects() {
        for b in d.objects() {
            let s = lhs.prof.slot(a, b);
            let cmp = compare(&lhs.fibers[s], &rhs_fibers[s], |x| map(a, b, x));
            out.extend(cmp.failures.iter().map(|w| format!("at ({}, {}): {w}", c.object_name(a), d.object_name(b))));
            images.push(cmp.image);
        }
    }
    if out.is_empty() {
        out.extend(prof_naturality(&lhs.prof, rhs_prof, &images));
    }
    out
}

/// Fibers of a plain profunctor, as discrete quotients.
pub fn plain_fibers(p: &FiniteProfunctor) -> Vec<QuotientSet<usize>> {
    p.sizes.iter().map(|&n| discrete_fiber(n)).collect()
}

/// The image of every member of class `class` under `f` must land in one
/// target class; returns a raw element of it.
fn on_class<A, B>(src: &QuotientSet<A>, class: usize, tgt: &QuotientSet<B>, f: impl Fn(&A) -> Result<B>) -> Result<B>
where
    A: Ord + Clone + Debug,
    B: Ord + Clone + Debug,
{
    let members = src.members(class);
    let first = f(members[0])?;
    let target = tgt.class_of_elem(&first);
    for m in &members[1..] {
        if tgt.class_of_elem(&f(m)?) != target {
            return Err(Error::Mismatch(format!("comparison is not well defined on the class of {:?}", members[0])));
        }
    }
    Ok(first)
}

/// Unit laws, associativity and self-duality of composition on a chain
/// `Φ: C ⇸ C′`, `Ψ: C′ ⇸ C″`, `Θ: C″ ⇸ C‴`.
pub fn prof_laws_check(phi: &FiniteProfunctor, psi: &FiniteProfunctor, theta: &FiniteProfunctor) -> Report {
    let mut report = Report::new();
    let mut left_unit = LawCheck::new("Id∘Φ ≅ Φ");
    left_unit.record_result(
        "",
        (|| {
            let id = FiniteProfunctor::identity(Arc::clone(&phi.tgt));
            let q = prof_compose(&id, phi)?;
            // (m, p, x): p indexes C′[b, m], x ∈ Φ(a, m)
            Ok(compare_profunctors(&q, phi, &plain_fibers(phi), |a, b, &(m, p, x)| {
                let v = phi.tgt.hom(b, m)[p];
                Ok(phi.right[v][a][x])
            }))
        })(),
    );
    report.push(left_unit);
    let mut right_unit = LawCheck::new("Φ∘Id ≅ Φ");
    right_unit.record_result(
        "",
        (|| {
            let id = FiniteProfunctor::identity(Arc::clone(&phi.src));
            let q = prof_compose(phi, &id)?;
            // (m, p, x): p ∈ Φ(m, b), x indexes C[m, a]
            Ok(compare_profunctors(&q, phi, &plain_fibers(phi), |a, b, &(m, p, x)| {
                let u = phi.src.hom(m, a)[x];
                Ok(phi.left[u][b][p])
            }))
        })(),
    );
    report.push(right_unit);
    let mut assoc = LawCheck::new("(Θ∘Ψ)∘Φ ≅ Θ∘(Ψ∘Φ)");
    assoc.record_result(
        "",
        (|| {
            let tp = prof_compose(theta, psi)?;
            let lhs = prof_compose(&tp.prof, phi)?;
            let pp = prof_compose(psi, phi)?;
            let rhs = prof_compose(theta, &pp.prof)?;
            Ok(compare_profunctors(&lhs, &rhs.prof, &rhs.fibers, |a, d, &(b, p, x)| {
                let inner = &tp.fibers[tp.prof.slot(b, d)];
                on_class(inner, p, &rhs.fibers[rhs.prof.slot(a, d)], |&(c2, t, y)| {
                    let q = pp.fibers[pp.prof.slot(a, c2)]
                        .class_of_elem(&(b, y, x))
                        .ok_or_else(|| Error::Mismatch("element outside the inner composite".into()))?;
                    Ok((c2, t, q))
                })
            }))
        })(),
    );
    report.push(assoc);
    let mut dual = LawCheck::new("(Ψ∘Φ)^op ≅ Φ^op∘Ψ^op");
    dual.record_result(
        "",
        (|| {
            let lhs = prof_compose(psi, phi)?;
            let (pd, sd) = (phi.dual(), psi.dual());
            let rhs = prof_compose(&pd, &sd)?;
            let n2 = lhs.prof.tgt.object_count();
            let fibers: Vec<QuotientSet<ComposeRaw>> = (0..rhs.fibers.len())
                .map(|i| {
                    let (b, a) = (i / lhs.prof.src.object_count(), i % lhs.prof.src.object_count());
                    lhs.fibers[a * n2 + b].clone()
                })
                .collect();
            let lhs_dual = ProfQuotient { prof: lhs.prof.dual(), fibers };
            Ok(compare_profunctors(&lhs_dual, &rhs.prof, &rhs.fibers, |_, _, &(m, p, q)| Ok((m, q, p))))
        })(),
    );
    report.push(dual);
    report
}

/// A finite instance of the presheaf Kleisli structure: `F: A ⇸ B`,
/// `G: B ⇸ C` and a presheaf `X` on `A`.
#[derive(Debug, Clone)]
pub struct KleisliSample {
    pub f: FiniteProfunctor,
    pub g: FiniteProfunctor,
    pub x: SetFunctor,
}

/// Checks `F = F^#∘η`, `η^# = id` and `(G^#∘F)^# = G^#∘F^#` on the sample,
/// each through an explicit comparison map tested for bijectivity and
/// naturality. The input is not validated first, so corrupted data shows
/// up as failing instances.
pub fn kleisli_laws_check(s: &KleisliSample) -> Report {
    let mut report = Report::new();
    let mut wf = LawCheck::new("well-formed input");
    let mut problems = s.f.validate();
    problems.extend(s.g.validate());
    problems.extend(s.x.validate());
    wf.record("", problems);
    report.push(wf);

    let a_cat = &s.f.src;
    let mut unit = LawCheck::new("F = F#∘η");
    for a in a_cat.objects() {
        let ctx = format!("at {}", a_cat.object_name(a));
        unit.record_result(
            &ctx,
            (|| {
                let y = SetFunctor::yoneda(Arc::clone(a_cat), a);
                let lifted = sharp(&s.f, &y)?;
                Ok(compare_presheaves(&lifted, &s.f.row(a), |b, &(a0, p, q)| {
                    let u = a_cat.hom(a0, a)[q];
                    Ok(s.f.left[u][b][p])
                }))
            })(),
        );
    }
    report.push(unit);

    let mut eta = LawCheck::new("η# = id");
    eta.record_result(
        "",
        (|| {
            let id = FiniteProfunctor::identity(Arc::clone(a_cat));
            let lifted = sharp(&id, &s.x)?;
            Ok(compare_presheaves(&lifted, &s.x, |d, &(c, p, e)| {
                let y = a_cat.hom(d, c)[p];
                Ok(s.x.maps[y][e])
            }))
        })(),
    );
    report.push(eta);

    let mut assoc = LawCheck::new("(G#∘F)# = G#∘F#");
    assoc.record_result(
        "",
        (|| {
            let gf = prof_compose(&s.g, &s.f)?;
            let lhs = sharp(&gf.prof, &s.x)?;
            let fx = sharp(&s.f, &s.x)?;
            let rhs = sharp(&s.g, &fx.functor)?;
            let c_cat = &s.g.tgt;
            let mut out = Vec::new();
            let mut images = Vec::new();
            for c in c_cat.objects() {
                let cmp = compare(&lhs.fibers[c], &rhs.fibers[c], |&(a, p, e)| {
                    let inner = &gf.fibers[gf.prof.slot(a, c)];
                    on_class(inner, p, &rhs.fibers[c], |&(b, gamma, phi)| {
                        let z = fx.fibers[b]
                            .class_of_elem(&(a, phi, e))
                            .ok_or_else(|| Error::Mismatch("element outside F#X".into()))?;
                        Ok((b, gamma, z))
                    })
                });
                out.extend(cmp.failures.iter().map(|w| format!("at {}: {w}", c_cat.object_name(c))));
                images.push(cmp.image);
            }
            if out.is_empty() {
                out.extend(naturality(&lhs.functor, &rhs.functor, &images));
            }
            Ok(out)
        })(),
    );
    report.push(assoc);
    report
}

/// JSON form of a profunctor. `sets[a][b]` lists `Φ(a, b)`; `left[u][b]`
/// maps elements of `Φ(src u, b)` to `Φ(tgt u, b)`; `right[v][a]` maps
/// elements of `Φ(a, tgt v)` to `Φ(a, src v)`. Identity actions may be
/// omitted.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ProfunctorFile {
    pub src: String,
    pub tgt: String,
    #[serde(default)]
    pub sets: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    #[serde(default)]
    pub left: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
    #[serde(default)]
    pub right: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
}

impl ProfunctorFile {
    pub fn build(&self, src: Arc<FinCategory>, tgt: Arc<FinCategory>) -> Result<(FiniteProfunctor, Vec<Vec<String>>)> {
        let bad = |m: String| Error::InvalidFunctor(m);
        for (a, row) in &self.sets {
            src.object_by_name(a).ok_or_else(|| bad(format!("unknown object {a}")))?;
            for b in row.keys() {
                tgt.object_by_name(b).ok_or_else(|| bad(format!("unknown object {b}")))?;
            }
        }
        let (n, n2) = (src.object_count(), tgt.object_count());
        let labels: Vec<Vec<String>> = (0..n * n2)
            .map(|i| {
                let (a, b) = (src.object_name(i / n2), tgt.object_name(i % n2));
                self.sets.get(a).and_then(|r| r.get(b)).cloned().unwrap_or_default()
            })
            .collect();
        let index = |slot: usize, x: &str| {
            labels[slot].iter().position(|y| y == x).ok_or_else(|| bad(format!("unknown element {x}")))
        };
        let table = |given: Option<&BTreeMap<String, String>>,
                     from: usize,
                     to: usize,
                     is_id: bool,
                     what: &str|
         -> Result<Vec<usize>> {
            labels[from]
                .iter()
                .map(|x| match given.and_then(|g| g.get(x)) {
                    Some(y) => index(to, y),
                    None if is_id => index(to, x),
                    None => Err(bad(format!("{what} is not defined at {x}"))),
                })
                .collect()
        };
        let mut left = Vec::new();
        for u in 0..src.morphism_count() {
            let name = &src.morphism(u).name;
            let g = self.left.get(name);
            left.push(
                (0..n2)
                    .map(|b| {
                        let entry = g.and_then(|g| g.get(tgt.object_name(b)));
                        table(entry, src.src(u) * n2 + b, src.tgt(u) * n2 + b, src.is_identity(u), name)
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let mut right = Vec::new();
        for v in 0..tgt.morphism_count() {
            let name = &tgt.morphism(v).name;
            let g = self.right.get(name);
            right.push(
                (0..n)
                    .map(|a| {
                        let entry = g.and_then(|g| g.get(src.object_name(a)));
                        table(entry, a * n2 + tgt.tgt(v), a * n2 + tgt.src(v), tgt.is_identity(v), name)
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let sizes = labels.iter().map(|l| l.len()).collect();
        let p = FiniteProfunctor { src, tgt, sizes, left, right }.checked()?;
        Ok((p, labels))
    }
}

/// Loads a profunctor file; category paths are relative to the file.
pub fn load_profunctor(path: &Path) -> Result<(FiniteProfunctor, Vec<Vec<String>>)> {
    let file: ProfunctorFile = parse(&read(path)?)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let src = Arc::new(load_category(&dir.join(&file.src))?);
    let tgt = if file.tgt == file.src { Arc::clone(&src) } else { Arc::new(load_category(&dir.join(&file.tgt))?) };
    file.build(src, tgt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{kleisli_samples, random_profunctor, rng, small_categories};

    fn point() -> Arc<FinCategory> {
        Arc::new(FinCategory::terminal())
    }

    fn constant(c: &Arc<FinCategory>, d: &Arc<FinCategory>, n: usize) -> FiniteProfunctor {
        FiniteProfunctor::from_fn(Arc::clone(c), Arc::clone(d), |_, _| n, |_, _, x| x, |_, _, x| x).unwrap()
    }

    #[test]
    fn identity_on_the_arrow_category() {
        let c = Arc::new(FinCategory::arrow());
        let id = FiniteProfunctor::identity(Arc::clone(&c));
        assert!(id.validate().is_empty());
        // Id(a, b) = C[b, a]
        assert_eq!(id.sizes, vec![1, 0, 1, 1]);
        assert_eq!(FiniteProfunctor::identity(point()).sizes, vec![1]);
    }

    #[test]
    fn composites_over_a_point_multiply() {
        let p = point();
        let q = prof_compose(&constant(&p, &p, 3), &constant(&p, &p, 4)).unwrap();
        assert_eq!(q.prof.sizes, vec![12]);
    }

    #[test]
    fn discrete_middle_sums_products() {
        let (p, d) = (point(), Arc::new(FinCategory::discrete(2)));
        let phi = FiniteProfunctor::from_fn(Arc::clone(&p), Arc::clone(&d), |_, b| [2, 3][b], |_, _, x| x, |_, _, x| x)
            .unwrap();
        let psi = FiniteProfunctor::from_fn(Arc::clone(&d), Arc::clone(&p), |a, _| [1, 2][a], |_, _, x| x, |_, _, x| x)
            .unwrap();
        assert_eq!(prof_compose(&psi, &phi).unwrap().prof.sizes, vec![8]);
    }

    #[test]
    fn boundary_mismatch_is_an_error() {
        let (p, a) = (point(), Arc::new(FinCategory::arrow()));
        assert!(matches!(prof_compose(&constant(&p, &p, 1), &constant(&p, &a, 1)), Err(Error::Mismatch(_))));
    }

    #[test]
    fn bicategory_laws_on_samples() {
        let mut r = rng(11);
        let cats = small_categories();
        for i in 0..12 {
            let (a, b, c, d) = (
                &cats[i % cats.len()].1,
                &cats[(i * 3 + 1) % cats.len()].1,
                &cats[(i + 5) % cats.len()].1,
                &cats[(i * 7) % cats.len()].1,
            );
            let phi = random_profunctor(&mut r, a, b, 2);
            let psi = random_profunctor(&mut r, b, c, 2);
            let theta = random_profunctor(&mut r, c, d, 2);
            let report = prof_laws_check(&phi, &psi, &theta);
            assert!(report.passed(), "sample {i}:\n{report}");
        }
    }

    #[test]
    fn kleisli_laws_hold_on_samples() {
        for (i, s) in kleisli_samples(5, 12).iter().enumerate() {
            let report = kleisli_laws_check(s);
            assert!(report.passed(), "sample {i}:\n{report}");
        }
    }

    #[test]
    fn corrupted_action_is_reported() {
        let c = Arc::new(FinCategory::arrow());
        let mut f =
            FiniteProfunctor::from_fn(Arc::clone(&c), Arc::clone(&c), |_, _| 2, |_, _, x| x, |_, _, x| x).unwrap();
        // the identity of A now swaps, which is in range but not functorial
        f.left[0][0] = vec![1, 0];
        let s = KleisliSample { f: f.clone(), g: f, x: SetFunctor::yoneda(Arc::clone(&c), 1) };
        let report = kleisli_laws_check(&s);
        assert!(!report.passed());
        assert!(!report.witnesses().is_empty());
    }

    #[test]
    fn sharp_of_empty_is_empty() {
        let c = Arc::new(FinCategory::arrow());
        let e = constant(&c, &c, 0);
        let out = sharp(&e, &SetFunctor::yoneda(Arc::clone(&c), 1)).unwrap();
        assert_eq!(out.functor.sizes, vec![0, 0]);
    }

    #[test]
    fn psh_map_from_a_point() {
        let (p, c) = (point(), Arc::new(FinCategory::parallel_pair()));
        let f = FinFunctor::constant(Arc::clone(&p), Arc::clone(&c), 1);
        let x = SetFunctor::constant(Arc::clone(&p), Variance::Contravariant, 2);
        // D[-, B] × X(•): sizes 2·2 at A and 1·2 at B
        assert_eq!(psh_map(&f, &x).unwrap().functor.sizes, vec![4, 2]);
    }

    #[test]
    fn reads_the_json_format() {
        let text = r#"{"src": "a", "tgt": "a",
            "sets": {"A": {"A": ["p"], "B": []}, "B": {"A": ["q"], "B": ["r"]}},
            "left": {"f": {"A": {"p": "q"}}},
            "right": {"f": {"B": {"r": "q"}}}}"#;
        let file: ProfunctorFile = serde_json::from_str(text).unwrap();
        let c = Arc::new(FinCategory::arrow());
        let (p, labels) = file.build(Arc::clone(&c), c).unwrap();
        assert_eq!(p.sizes, vec![1, 0, 1, 1]);
        assert_eq!(labels[2], vec!["q".to_string()]);
        let bad: ProfunctorFile = serde_json::from_str(&text.replace(r#""r": "q""#, r#""r": "z""#)).unwrap();
        assert!(bad.build(Arc::new(FinCategory::arrow()), Arc::new(FinCategory::arrow())).is_err());
    }
}
