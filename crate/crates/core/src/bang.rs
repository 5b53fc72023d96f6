//! The categories `!C` and `?C` of lists, with morphisms in normal form.
//!
//! A morphism of `!C` from `(C_0, …, C_{n-1})` to `(D_0, …, D_{m-1})` is a
//! shape `s: {0..m-1} → {0..n-1}` in the variant's class together with a
//! base morphism `C_{s(j)} → D_j` for every target position `j`. This is
//! the normal form of a string diagram: every output wire is traced back to
//! the input it comes from. Morphisms of `?C = (!(C^op))^op` are stored the
//! other way round: the shape sends source positions to target positions,
//! with a base morphism `C_j → D_{s(j)}` for every source position.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::diagrams::{FiniteFunction, Variant};
use crate::fincat::{FinCategory, FinFunctor, MorId, Morphism, ObjId};
use crate::{limits, Error, Result};

/// Which of the two list constructions a morphism belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    /// `!C`: shapes run from target positions to source positions.
    Bang,
    /// `?C`: shapes run from source positions to target positions.
    Question,
}

/// The shape data of a monad on categories built from lists: which
/// position maps are allowed. Implemented by every [`Variant`] and by the
/// identity monad.
pub trait ShapeMonad: Send + Sync {
    fn label(&self) -> String;

    /// Whether lists of length `n` are objects.
    fn admits_length(&self, _n: usize) -> bool {
        true
    }

    /// All allowed shapes `{0..dom-1} → {0..cod-1}`.
    fn shapes(&self, dom: usize, cod: usize) -> Vec<FiniteFunction>;

    fn contains(&self, f: &FiniteFunction) -> bool;
}

impl ShapeMonad for Variant {
    fn label(&self) -> String {
        self.to_string()
    }

    fn shapes(&self, dom: usize, cod: usize) -> Vec<FiniteFunction> {
        self.function_class().functions(dom, cod)
    }

    fn contains(&self, f: &FiniteFunction) -> bool {
        self.function_class().contains(f)
    }
}

/// The identity monad presented as lists of length one.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityMonad;

impl ShapeMonad for IdentityMonad {
    fn label(&self) -> String {
        "identity".into()
    }

    fn admits_length(&self, n: usize) -> bool {
        n == 1
    }

    fn shapes(&self, dom: usize, cod: usize) -> Vec<FiniteFunction> {
        if dom == 1 && cod == 1 {
            vec![FiniteFunction::identity(1)]
        } else {
            Vec::new()
        }
    }

    fn contains(&self, f: &FiniteFunction) -> bool {
        f.dom == 1 && f.is_identity()
    }
}

/// A morphism between lists in normal form. See the module docs for the
/// meaning of `shape` and `family` in each direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ListMorphism {
    pub src: Vec<ObjId>,
    pub tgt: Vec<ObjId>,
    pub shape: FiniteFunction,
    pub family: Vec<MorId>,
}

impl ListMorphism {
    pub fn identity(c: &FinCategory, list: &[ObjId]) -> ListMorphism {
        ListMorphism {
            src: list.to_vec(),
            tgt: list.to_vec(),
            shape: FiniteFunction::identity(list.len()),
            family: list.iter().map(|&o| c.identity(o)).collect(),
        }
    }

    /// The unit: `f: C → D` as a morphism `(C) → (D)`.
    pub fn unit(c: &FinCategory, f: MorId) -> ListMorphism {
        ListMorphism { src: vec![c.src(f)], tgt: vec![c.tgt(f)], shape: FiniteFunction::identity(1), family: vec![f] }
    }

    /// Side-by-side placement (the tensor given by concatenation).
    pub fn tensor(&self, other: &ListMorphism) -> ListMorphism {
        let cat = |a: &[ObjId], b: &[ObjId]| [a, b].concat();
        ListMorphism {
            src: cat(&self.src, &other.src),
            tgt: cat(&self.tgt, &other.tgt),
            shape: self.shape.sum(&other.shape),
            family: [self.family.as_slice(), other.family.as_slice()].concat(),
        }
    }

    /// `self ∘ f` in the given direction.
    pub fn after(&self, c: &FinCategory, dir: Direction, f: &ListMorphism) -> Result<ListMorphism> {
        if f.tgt != self.src {
            return Err(Error::Mismatch(format!(
                "cannot compose {:?} → {:?} after {:?} → {:?}",
                self.src, self.tgt, f.src, f.tgt
            )));
        }
        let comp =
            |g: MorId, h: MorId| c.compose(g, h).ok_or_else(|| Error::Mismatch("base morphisms do not compose".into()));
        let (shape, family) = match dir {
            Direction::Bang => {
                let shape = f.shape.after(&self.shape)?;
                let family = (0..self.tgt.len())
                    .map(|k| comp(self.family[k], f.family[self.shape.apply(k)]))
                    .collect::<Result<Vec<_>>>()?;
                (shape, family)
            }
            Direction::Question => {
                let shape = self.shape.after(&f.shape)?;
                let family = (0..f.src.len())
                    .map(|j| comp(self.family[f.shape.apply(j)], f.family[j]))
                    .collect::<Result<Vec<_>>>()?;
                (shape, family)
            }
        };
        Ok(ListMorphism { src: f.src.clone(), tgt: self.tgt.clone(), shape, family })
    }

    /// Checks the typing of every family member.
    pub fn check(&self, c: &FinCategory, dir: Direction) -> Result<()> {
        let (dom, cod) = match dir {
            Direction::Bang => (self.tgt.len(), self.src.len()),
            Direction::Question => (self.src.len(), self.tgt.len()),
        };
        if self.shape.dom != dom || self.shape.cod != cod || self.family.len() != dom {
            return Err(Error::Mismatch("shape does not match the list lengths".into()));
        }
        for j in 0..dom {
            let (a, b) = match dir {
                Direction::Bang => (self.src[self.shape.apply(j)], self.tgt[j]),
                Direction::Question => (self.src[j], self.tgt[self.shape.apply(j)]),
            };
            let m = self.family[j];
            if m >= c.morphism_count() || c.src(m) != a || c.tgt(m) != b {
                return Err(Error::Mismatch(format!("family member {j} has the wrong type")));
            }
        }
        Ok(())
    }

    pub fn describe(&self, c: &FinCategory) -> String {
        let obj = |l: &[ObjId]| l.iter().map(|&o| c.object_name(o)).collect::<Vec<_>>().join(",");
        let fam: Vec<&str> = self.family.iter().map(|&m| c.morphism(m).name.as_str()).collect();
        format!("({})→({}) [{}] {{{}}}", obj(&self.src), obj(&self.tgt), join(&self.shape.table), fam.join(","))
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for ListMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}→{:?} [{}] {:?}", self.src, self.tgt, join(&self.shape.table), self.family)
    }
}

/// The full hom-set between two lists, enumerated shape by shape.
pub fn hom_lists(
    monad: &dyn ShapeMonad,
    c: &FinCategory,
    dir: Direction,
    src: &[ObjId],
    tgt: &[ObjId],
) -> Result<Vec<ListMorphism>> {
    let (dom, cod) = match dir {
        Direction::Bang => (tgt.len(), src.len()),
        Direction::Question => (src.len(), tgt.len()),
    };
    let mut out = Vec::new();
    for shape in monad.shapes(dom, cod) {
        let homs: Vec<&[MorId]> = (0..dom)
            .map(|j| match dir {
                Direction::Bang => c.hom(src[shape.apply(j)], tgt[j]),
                Direction::Question => c.hom(src[j], tgt[shape.apply(j)]),
            })
            .collect();
        let count: u128 = homs.iter().map(|h| h.len() as u128).product();
        limits::check("list hom-set", out.len() as u128 + count)?;
        let sizes: Vec<usize> = homs.iter().map(|h| h.len()).collect();
        for t in crate::fincat::tuples(&sizes) {
            out.push(ListMorphism {
                src: src.to_vec(),
                tgt: tgt.to_vec(),
                shape: shape.clone(),
                family: t.iter().enumerate().map(|(j, &i)| homs[j][i]).collect(),
            });
        }
    }
    Ok(out)
}

/// `!_X C[a, b]` in normal form.
pub fn bang_hom(variant: Variant, c: &FinCategory, a: &[ObjId], b: &[ObjId]) -> Result<Vec<ListMorphism>> {
    variant.require_monad()?;
    hom_lists(&variant, c, Direction::Bang, a, b)
}

/// Composition in `!C`: shapes compose, base morphisms compose along the
/// connected wires.
pub fn compose_nf(c: &FinCategory, g: &ListMorphism, f: &ListMorphism) -> Result<ListMorphism> {
    g.after(c, Direction::Bang, f)
}

/// The multiplication on objects: concatenation.
pub fn flatten_obj(lists: &[Vec<ObjId>]) -> Vec<ObjId> {
    lists.concat()
}

fn offsets(lists: &[&[ObjId]]) -> Vec<usize> {
    let mut out = Vec::with_capacity(lists.len());
    let mut acc = 0;
    for l in lists {
        out.push(acc);
        acc += l.len();
    }
    out
}

/// Object-filter for list categories.
pub type ListFilter<'a> = &'a dyn Fn(&[ObjId]) -> bool;

/// A materialized list category over a finite base: all lists of length at
/// most `max_len` (optionally filtered) with their full hom-sets.
/// Composition is computed on demand.
#[derive(Clone)]
pub struct ListCategory {
    label: String,
    dir: Direction,
    base: Arc<FinCategory>,
    lists: Vec<Vec<ObjId>>,
    index: HashMap<Vec<ObjId>, ObjId>,
    morphs: Arc<Vec<ListMorphism>>,
    lookup: Arc<HashMap<ListMorphism, MorId>>,
    cat: Arc<FinCategory>,
}

impl fmt::Debug for ListCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ListCategory")
            .field("label", &self.label)
            .field("dir", &self.dir)
            .field("objects", &self.lists.len())
            .field("morphisms", &self.morphs.len())
            .finish()
    }
}

fn all_lists(n: usize, max_len: usize, keep: impl Fn(&[ObjId]) -> bool) -> Vec<Vec<ObjId>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<ObjId>> = vec![Vec::new()];
    for len in 0..=max_len {
        out.extend(layer.iter().filter(|l| keep(l)).cloned());
        if len == max_len || n == 0 {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|l| {
                (0..n).map(move |o| {
                    let mut l = l.clone();
                    l.push(o);
                    l
                })
            })
            .collect();
    }
    out
}

impl ListCategory {
    pub fn new(
        monad: &dyn ShapeMonad,
        base: Arc<FinCategory>,
        dir: Direction,
        max_len: usize,
        filter: Option<ListFilter<'_>>,
    ) -> Result<Self> {
        let lists =
            all_lists(base.object_count(), max_len, |l| monad.admits_length(l.len()) && filter.map_or(true, |f| f(l)));
        let index: HashMap<Vec<ObjId>, ObjId> = lists.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let mut morphs = Vec::new();
        for a in &lists {
            for b in &lists {
                let h = hom_lists(monad, &base, dir, a, b)?;
                limits::check("list category", (morphs.len() + h.len()) as u128)?;
                morphs.extend(h);
            }
        }
        let lookup: HashMap<ListMorphism, MorId> = morphs.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let name_obj =
            |l: &[ObjId]| format!("({})", l.iter().map(|&o| base.object_name(o)).collect::<Vec<_>>().join(","));
        let objects: Vec<String> = lists.iter().map(|l| name_obj(l)).collect();
        let morphisms: Vec<Morphism> = morphs
            .iter()
            .map(|m| Morphism { name: m.describe(&base), src: index[&m.src], tgt: index[&m.tgt] })
            .collect();
        let mut identity = Vec::with_capacity(lists.len());
        for l in &lists {
            let id = ListMorphism::identity(&base, l);
            let i = *lookup
                .get(&id)
                .ok_or_else(|| Error::InvalidInput(format!("the shapes of {} omit the identity", monad.label())))?;
            identity.push(i);
        }
        let morphs = Arc::new(morphs);
        let lookup = Arc::new(lookup);
        let compose = {
            let (morphs, lookup, base) = (Arc::clone(&morphs), Arc::clone(&lookup), Arc::clone(&base));
            Arc::new(move |g: MorId, f: MorId| {
                let gf = morphs[g].after(&base, dir, &morphs[f]).ok()?;
                lookup.get(&gf).copied()
            })
        };
        let cat = Arc::new(FinCategory::computed(objects, morphisms, identity, compose));
        Ok(ListCategory { label: monad.label(), dir, base, lists, index, morphs, lookup, cat })
    }

    /// `!_X C` truncated to lists of length at most `max_len`.
    pub fn bang(variant: Variant, base: Arc<FinCategory>, max_len: usize) -> Result<Self> {
        variant.require_monad()?;
        Self::new(&variant, base, Direction::Bang, max_len, None)
    }

    /// `?_X C` truncated to lists of length at most `max_len`.
    pub fn question(variant: Variant, base: Arc<FinCategory>, max_len: usize) -> Result<Self> {
        variant.require_monad()?;
        Self::new(&variant, base, Direction::Question, max_len, None)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn direction(&self) -> Direction {
        self.dir
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.cat
    }

    pub fn list(&self, o: ObjId) -> &[ObjId] {
        &self.lists[o]
    }

    pub fn lists(&self) -> &[Vec<ObjId>] {
        &self.lists
    }

    pub fn object_of(&self, list: &[ObjId]) -> Option<ObjId> {
        self.index.get(list).copied()
    }

    pub fn morphism(&self, m: MorId) -> &ListMorphism {
        &self.morphs[m]
    }

    pub fn morphism_id(&self, m: &ListMorphism) -> Option<MorId> {
        self.lookup.get(m).copied()
    }

    /// The unit `C → !C` (or `C → ?C`) as a functor.
    pub fn unit_functor(&self) -> Result<FinFunctor> {
        let c = &self.base;
        let obj = c
            .objects()
            .map(|o| {
                self.object_of(&[o]).ok_or_else(|| Error::InvalidInput("singleton lists are not materialized".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mor = (0..c.morphism_count())
            .map(|f| self.morphism_id(&ListMorphism::unit(c, f)).expect("unit morphism is materialized"))
            .collect();
        FinFunctor::new(Arc::clone(c), Arc::clone(&self.cat), obj, mor)
    }

    /// Flattening of an object of a list category built over this one.
    pub fn flatten_object(&self, outer: &ListCategory, o: ObjId) -> Vec<ObjId> {
        outer.list(o).iter().flat_map(|&i| self.list(i).iter().copied()).collect()
    }

    /// The expansion of a morphism of `outer`, a list category over this
    /// one's category: blocks are removed and the outer combinators become
    /// combinators between the underlying wires. Errors when the expanded
    /// shape leaves the class of `monad`.
    pub fn expand(&self, monad: &dyn ShapeMonad, outer: &ListCategory, m: MorId) -> Result<ListMorphism> {
        if !Arc::ptr_eq(&outer.base, &self.cat) && *outer.base != *self.cat {
            return Err(Error::Mismatch("outer list category is not built over this one".into()));
        }
        let mm = outer.morphism(m);
        let src_lists: Vec<&[ObjId]> = mm.src.iter().map(|&i| self.list(i)).collect();
        let tgt_lists: Vec<&[ObjId]> = mm.tgt.iter().map(|&i| self.list(i)).collect();
        let (src_off, tgt_off) = (offsets(&src_lists), offsets(&tgt_lists));
        let src: Vec<ObjId> = src_lists.concat();
        let tgt: Vec<ObjId> = tgt_lists.concat();
        let mut table = Vec::new();
        let mut family = Vec::new();
        match outer.dir {
            Direction::Bang => {
                for (j, &inner) in mm.family.iter().enumerate() {
                    let im = self.morphism(inner);
                    let base_off = src_off[mm.shape.apply(j)];
                    for k in 0..im.tgt.len() {
                        table.push(base_off + im.shape.apply(k));
                        family.push(im.family[k]);
                    }
                }
            }
            Direction::Question => {
                for (i, &inner) in mm.family.iter().enumerate() {
                    let im = self.morphism(inner);
                    let base_off = tgt_off[mm.shape.apply(i)];
                    for k in 0..im.src.len() {
                        table.push(base_off + im.shape.apply(k));
                        family.push(im.family[k]);
                    }
                }
            }
        }
        let (dom, cod) = match outer.dir {
            Direction::Bang => (tgt.len(), src.len()),
            Direction::Question => (src.len(), tgt.len()),
        };
        let shape = FiniteFunction { dom, cod, table };
        if !monad.contains(&shape) {
            return Err(Error::OutsideClass(format!(
                "expansion has shape [{}], outside {}",
                join(&shape.table),
                monad.label()
            )));
        }
        Ok(ListMorphism { src, tgt, shape, family })
    }

    /// The multiplication `outer → target` as a functor, where `outer` is a
    /// list category over this one and `target` contains every flattened
    /// list.
    pub fn flatten_functor(
        &self,
        monad: &dyn ShapeMonad,
        outer: &ListCategory,
        target: &ListCategory,
    ) -> Result<FinFunctor> {
        let obj = (0..outer.lists.len())
            .map(|o| {
                let flat = self.flatten_object(outer, o);
                target
                    .object_of(&flat)
                    .ok_or_else(|| Error::InvalidInput(format!("flattened list {flat:?} is not materialized")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mor = (0..outer.morphs.len())
            .map(|m| {
                let e = self.expand(monad, outer, m)?;
                target
                    .morphism_id(&e)
                    .ok_or_else(|| Error::InvalidInput("expanded morphism is not materialized".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        FinFunctor::new(Arc::clone(&outer.cat), Arc::clone(&target.cat), obj, mor)
    }
}

/// `!F: !C → !D` between materialized list categories: lists are mapped
/// elementwise, shapes are kept and families are mapped through `f`.
pub fn bang_functor(f: &FinFunctor, from: &ListCategory, to: &ListCategory) -> Result<FinFunctor> {
    if *from.base != *f.src || *to.base != *f.tgt {
        return Err(Error::Mismatch("list categories do not match the functor".into()));
    }
    let map_list = |l: &[ObjId]| l.iter().map(|&o| f.obj[o]).collect::<Vec<_>>();
    let obj = from
        .lists
        .iter()
        .map(|l| to.object_of(&map_list(l)).ok_or_else(|| Error::InvalidInput("image list is not materialized".into())))
        .collect::<Result<Vec<_>>>()?;
    let mor = from
        .morphs
        .iter()
        .map(|m| {
            let image = ListMorphism {
                src: map_list(&m.src),
                tgt: map_list(&m.tgt),
                shape: m.shape.clone(),
                family: m.family.iter().map(|&x| f.mor[x]).collect(),
            };
            to.morphism_id(&image).ok_or_else(|| Error::InvalidInput("image morphism is not materialized".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    FinFunctor::new(Arc::clone(&from.cat), Arc::clone(&to.cat), obj, mor)
}

/// `?_X C` with lists of length at most `max_len`.
pub fn question_of(variant: Variant, c: Arc<FinCategory>, max_len: usize) -> Result<ListCategory> {
    ListCategory::question(variant, c, max_len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::validate_category;

    #[test]
    fn hom_counts_over_one() {
        let one = FinCategory::terminal();
        assert!(bang_hom(Variant::EMPTY, &one, &[0], &[0, 0]).unwrap().is_empty());
        assert_eq!(bang_hom(Variant::FULL, &one, &[0; 3], &[0; 2]).unwrap().len(), 9);
        assert!(bang_hom(Variant::DELTA, &one, &[0], &[0]).is_err());
    }

    #[test]
    fn symmetric_on_identities() {
        let c = FinCategory::arrow();
        assert_eq!(bang_hom(Variant::SIGMA, &c, &[0, 0], &[0, 0]).unwrap().len(), 2);
    }

    #[test]
    fn categories_validate() {
        let c = Arc::new(FinCategory::arrow());
        for v in Variant::MONAD {
            for dir in [Direction::Bang, Direction::Question] {
                let l = ListCategory::new(&v, Arc::clone(&c), dir, 2, None).unwrap();
                assert!(validate_category(l.category()).is_empty(), "{v} {dir:?}");
            }
        }
    }

    #[test]
    fn question_is_dual_of_bang_of_opposite() {
        let c = Arc::new(FinCategory::arrow());
        let op = Arc::new(c.opposite());
        for v in Variant::MONAD {
            let q = ListCategory::question(v, Arc::clone(&c), 2).unwrap();
            let b = ListCategory::bang(v, Arc::clone(&op), 2).unwrap();
            for a in q.lists() {
                for t in q.lists() {
                    let x = q.category().hom(q.object_of(a).unwrap(), q.object_of(t).unwrap()).len();
                    let y = b.category().hom(b.object_of(t).unwrap(), b.object_of(a).unwrap()).len();
                    assert_eq!(x, y);
                }
            }
        }
    }

    #[test]
    fn question_over_one() {
        let one = FinCategory::terminal();
        let n = |v: Variant, a: usize, b: usize| {
            hom_lists(&v, &one, Direction::Question, &vec![0; a], &vec![0; b]).unwrap().len()
        };
        assert_eq!(n(Variant::FULL, 3, 3), 27);
        assert_eq!(n(Variant::SIGMA, 3, 3), 6);
        for v in Variant::MONAD {
            assert_eq!(n(v, 0, 2), usize::from(v.epsilon), "{v}");
        }
    }

    #[test]
    fn expansion_of_delta() {
        let c = Arc::new(FinCategory::discrete(2));
        let inner = ListCategory::bang(Variant::FULL, Arc::clone(&c), 4).unwrap();
        let l = inner.object_of(&[0, 1]).unwrap();
        let only_l = |x: &[ObjId]| x.iter().all(|&i| i == l);
        let outer =
            ListCategory::new(&Variant::FULL, Arc::clone(inner.category()), Direction::Bang, 2, Some(&only_l)).unwrap();
        let id = inner.category().identity(l);
        let delta = ListMorphism {
            src: vec![l],
            tgt: vec![l, l],
            shape: FiniteFunction::new(2, 1, vec![0, 0]).unwrap(),
            family: vec![id, id],
        };
        let m = outer.morphism_id(&delta).unwrap();
        let e = inner.expand(&Variant::FULL, &outer, m).unwrap();
        assert_eq!(e.src, vec![0, 1]);
        assert_eq!(e.tgt, vec![0, 1, 0, 1]);
        assert_eq!(e.shape.table, vec![0, 1, 0, 1]);
        assert!(matches!(inner.expand(&Variant::DELTA, &outer, m), Err(Error::OutsideClass(_))));
    }

    #[test]
    fn flattening_objects() {
        assert_eq!(flatten_obj(&[vec![1, 2], vec![3]]), vec![1, 2, 3]);
        assert_eq!(flatten_obj(&[vec![]]), Vec::<ObjId>::new());
        assert_eq!(flatten_obj(&[vec![], vec![4]]), vec![4]);
    }
}
