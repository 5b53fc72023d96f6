use std::fmt::Debug;

use crate::{limits, Error, Result};

/// Disjoint-set forest whose roots are always the least index of their
/// class, so that the least raw element is the canonical representative.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            let up = self.parent[self.parent[x]];
            self.parent[x] = up;
            x = up;
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns false if already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        true
    }

    pub fn count_classes(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}

/// A finite set of raw elements modulo a generated equivalence.
///
/// Raw elements are kept sorted; classes are numbered in the order of
/// their least member, which is also their representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSet<T> {
    raw: Vec<T>,
    class_of: Vec<usize>,
    reps: Vec<usize>,
}

impl<T: Ord + Clone + Debug> QuotientSet<T> {
    /// The discrete quotient: every raw element is its own class.
    pub fn discrete(raw: Vec<T>) -> Self {
        QuotientBuilder::new(raw).finish()
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn raw(&self) -> &[T] {
        &self.raw
    }

    pub fn raw_len(&self) -> usize {
        self.raw.len()
    }

    pub fn index_of(&self, x: &T) -> Option<usize> {
        self.raw.binary_search(x).ok()
    }

    /// Class index of the raw element at `raw_index`.
    pub fn class_of(&self, raw_index: usize) -> usize {
        self.class_of[raw_index]
    }

    /// Class index of `x`, if `x` is a raw element.
    pub fn class_of_elem(&self, x: &T) -> Option<usize> {
        self.index_of(x).map(|i| self.class_of[i])
    }

    pub fn representative(&self, class: usize) -> &T {
        &self.raw[self.reps[class]]
    }

    /// The canonical representative of the class containing `x`.
    pub fn canonical(&self, x: &T) -> Option<&T> {
        self.class_of_elem(x).map(|c| self.representative(c))
    }

    pub fn representatives(&self) -> impl Iterator<Item = &T> + '_ {
        self.reps.iter().map(move |&i| &self.raw[i])
    }

    pub fn members(&self, class: usize) -> Vec<&T> {
        self.raw.iter().zip(&self.class_of).filter(|(_, &c)| c == class).map(|(x, _)| x).collect()
    }

    /// Sizes of all classes, in class order.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.reps.len()];
        for &c in &self.class_of {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn iter_raw(&self) -> impl Iterator<Item = (&T, usize)> + '_ {
        self.raw.iter().zip(self.class_of.iter().copied())
    }
}

/// Accumulates relations over a fixed raw set.
pub struct QuotientBuilder<T> {
    raw: Vec<T>,
    uf: UnionFind,
}

impl<T: Ord + Clone + Debug> QuotientBuilder<T> {
    pub fn new(mut raw: Vec<T>) -> Self {
        raw.sort();
        raw.dedup();
        let uf = UnionFind::new(raw.len());
        QuotientBuilder { raw, uf }
    }

    /// Like [`QuotientBuilder::new`], but enforces the raw-element cap.
    pub fn with_cap(what: &str, raw: Vec<T>) -> Result<Self> {
        limits::check(what, raw.len() as u128)?;
        Ok(Self::new(raw))
    }

    pub fn raw(&self) -> &[T] {
        &self.raw
    }

    pub fn index_of(&self, x: &T) -> Option<usize> {
        self.raw.binary_search(x).ok()
    }

    pub fn relate(&mut self, a: &T, b: &T) -> Result<()> {
        let i = self.lookup(a)?;
        let j = self.lookup(b)?;
        self.uf.union(i, j);
        Ok(())
    }

    pub fn relate_indices(&mut self, i: usize, j: usize) {
        self.uf.union(i, j);
    }

    fn lookup(&self, x: &T) -> Result<usize> {
        self.index_of(x).ok_or_else(|| Error::InvalidFunctor(format!("relation endpoint {x:?} is not a raw element")))
    }

    pub fn finish(mut self) -> QuotientSet<T> {
        let n = self.raw.len();
        let mut class_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for i in 0..n {
            let r = self.uf.find(i);
            if r == i {
                class_of[i] = reps.len();
                reps.push(i);
            } else {
                class_of[i] = class_of[r];
            }
        }
        QuotientSet { raw: self.raw, class_of, reps }
    }
}

/// Result of comparing two quotients along a map of raw elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Comparison {
    pub source_classes: usize,
    pub target_classes: usize,
    pub failures: Vec<String>,
    /// Class-level image of each source class, where defined.
    pub image: Vec<Option<usize>>,
}

impl Comparison {
    pub fn is_bijection(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self, what: &str) -> Result<()> {
        if self.is_bijection() {
            Ok(())
        } else {
            Err(Error::Mismatch(format!("{what}: {}", self.failures.join("; "))))
        }
    }
}

const MAX_WITNESSES: usize = 4;

/// Checks that `f`, applied to raw elements of `src`, induces a
/// well-defined bijection of classes. Every raw element is mapped, so
/// well-definedness is verified on whole classes, not just representatives.
pub fn compare<A, B, F>(src: &QuotientSet<A>, tgt: &QuotientSet<B>, f: F) -> Comparison
where
    A: Ord + Clone + Debug,
    B: Ord + Clone + Debug,
    F: Fn(&A) -> Result<B>,
{
    let mut out =
        Comparison { source_classes: src.len(), target_classes: tgt.len(), failures: Vec::new(), image: Vec::new() };
    let push = |out: &mut Comparison, msg: String| {
        if out.failures.len() < MAX_WITNESSES {
            out.failures.push(msg);
        }
    };
    let mut image: Vec<Option<usize>> = vec![None; src.len()];
    for (a, class) in src.iter_raw() {
        let b = match f(a) {
            Ok(b) => b,
            Err(e) => {
                push(&mut out, format!("map undefined at {a:?}: {e}"));
                continue;
            }
        };
        let Some(tc) = tgt.class_of_elem(&b) else {
            push(&mut out, format!("{a:?} maps to {b:?}, which is not a raw element of the target"));
            continue;
        };
        match image[class] {
            None => image[class] = Some(tc),
            Some(prev) if prev != tc => push(
                &mut out,
                format!(
                    "not well defined: class of {:?} maps to both {:?} and {:?}",
                    src.representative(class),
                    tgt.representative(prev),
                    tgt.representative(tc)
                ),
            ),
            _ => {}
        }
    }
    let mut hit: Vec<Option<usize>> = vec![None; tgt.len()];
    for (c, img) in image.iter().enumerate() {
        let Some(t) = *img else { continue };
        match hit[t] {
            None => hit[t] = Some(c),
            Some(prev) => push(
                &mut out,
                format!(
                    "not injective: {:?} and {:?} both map to {:?}",
                    src.representative(prev),
                    src.representative(c),
                    tgt.representative(t)
                ),
            ),
        }
    }
    for (t, h) in hit.iter().enumerate() {
        if h.is_none() {
            push(&mut out, format!("not surjective: {:?} is not hit", tgt.representative(t)));
        }
    }
    out.image = image;
    out
}

/// The class map induced by `f` on representatives. Where debug assertions
/// are enabled every raw element is mapped and checked against its class.
pub fn induced_map<A, B, F>(src: &QuotientSet<A>, tgt: &QuotientSet<B>, f: F) -> Result<Vec<usize>>
where
    A: Ord + Clone + Debug,
    B: Ord + Clone + Debug,
    F: Fn(&A) -> Result<B>,
{
    let locate = |a: &A| -> Result<usize> {
        let b = f(a)?;
        tgt.class_of_elem(&b).ok_or_else(|| Error::InvalidFunctor(format!("{a:?} acts to {b:?}, outside the target")))
    };
    let map: Vec<usize> = src.representatives().map(locate).collect::<Result<_>>()?;
    if cfg!(debug_assertions) {
        for (a, class) in src.iter_raw() {
            if locate(a)? != map[class] {
                return Err(Error::InvalidFunctor(format!(
                    "induced action is not well defined on the class of {:?}",
                    src.representative(class)
                )));
            }
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_find_keeps_least_root() {
        let mut uf = UnionFind::new(6);
        uf.union(5, 3);
        uf.union(3, 4);
        uf.union(4, 1);
        assert_eq!(uf.find(5), 1);
        assert_eq!(uf.count_classes(), 3);
    }

    #[test]
    fn representatives_are_least_members() {
        let mut b = QuotientBuilder::new(vec![(1, 0), (0, 2), (0, 1), (1, 1)]);
        b.relate(&(1, 1), &(0, 2)).unwrap();
        b.relate(&(1, 0), &(0, 1)).unwrap();
        let q = b.finish();
        assert_eq!(q.len(), 2);
        assert_eq!(q.representative(0), &(0, 1));
        assert_eq!(q.representative(1), &(0, 2));
        assert_eq!(q.canonical(&(1, 1)), Some(&(0, 2)));
    }

    #[test]
    fn unknown_endpoint_is_an_error() {
        let mut b = QuotientBuilder::new(vec![1, 2]);
        assert!(b.relate(&1, &3).is_err());
    }

    #[test]
    fn compare_detects_collapse() {
        let a = QuotientSet::discrete(vec![0, 1, 2]);
        let b = QuotientSet::discrete(vec![0, 1]);
        let c = compare(&a, &b, |x| Ok(x / 2));
        assert!(!c.is_bijection());
        let d = compare(&b, &b, |x| Ok(1 - x));
        assert!(d.is_bijection());
    }
}
