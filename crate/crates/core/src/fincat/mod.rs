//! Finite categories, set-valued functors on them, and the quotient
//! engine used for colimits and coends.

mod coend;
pub mod json;
mod quotient;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

pub use coend::{
    coend, colimit, lan_along, product_coend, slot_coend, tuples, QuotientFunctor, SlotRaw, SlotVariance, Weight,
};
pub use quotient::{compare, induced_map, Comparison, QuotientBuilder, QuotientSet, UnionFind};

pub type ObjId = usize;
pub type MorId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

type ComposeFn = dyn Fn(MorId, MorId) -> Option<MorId> + Send + Sync;

#[derive(Clone)]
enum Composition {
    Table(HashMap<(MorId, MorId), MorId>),
    Computed(Arc<ComposeFn>),
}

/// An explicit finite category. Composition is either a table or a
/// function computed on demand (used for big derived categories).
#[derive(Clone)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identity: Vec<MorId>,
    composition: Composition,
    homs: Vec<Vec<MorId>>,
    // Table entries that could not be stored: non-composable pairs and
    // conflicting duplicates. Only validation looks at these.
    stray: Vec<(MorId, MorId, MorId)>,
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory").field("objects", &self.objects).field("morphisms", &self.morphisms.len()).finish()
    }
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        if self.objects != other.objects || self.morphisms != other.morphisms || self.identity != other.identity {
            return false;
        }
        (0..self.morphisms.len()).all(|f| self.hom_from(self.tgt(f)).all(|g| self.compose(g, f) == other.compose(g, f)))
    }
}

impl FinCategory {
    /// Builds from a composition table without checking the axioms; see
    /// [`validate_category`]. Fails only on out-of-range ids.
    pub fn from_table(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<MorId>,
        compose: Vec<(MorId, MorId, MorId)>,
    ) -> Result<Self> {
        let n = objects.len();
        let k = morphisms.len();
        if identity.len() != n {
            return Err(Error::InvalidCategory(format!("{} objects but {} identities", n, identity.len())));
        }
        for m in &morphisms {
            if m.src >= n || m.tgt >= n {
                return Err(Error::InvalidCategory(format!("morphism {} has an unknown endpoint", m.name)));
            }
        }
        if let Some(&i) = identity.iter().find(|&&i| i >= k) {
            return Err(Error::InvalidCategory(format!("identity id {i} out of range")));
        }
        let mut table = HashMap::new();
        let mut stray = Vec::new();
        for (g, f, gf) in compose {
            if g >= k || f >= k || gf >= k {
                return Err(Error::InvalidCategory(format!("composition entry ({g},{f},{gf}) out of range")));
            }
            if morphisms[f].tgt != morphisms[g].src {
                stray.push((g, f, gf));
                continue;
            }
            match table.insert((g, f), gf) {
                Some(prev) if prev != gf => stray.push((g, f, prev)),
                _ => {}
            }
        }
        let homs = build_homs(n, &morphisms);
        Ok(FinCategory { objects, morphisms, identity, composition: Composition::Table(table), homs, stray })
    }

    /// Builds from a table and rejects anything [`validate_category`] flags.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<MorId>,
        compose: Vec<(MorId, MorId, MorId)>,
    ) -> Result<Self> {
        let c = Self::from_table(objects, morphisms, identity, compose)?;
        c.validated()
    }

    /// Tabulates composition from a function on composable pairs.
    pub fn from_fn(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<MorId>,
        compose: impl Fn(MorId, MorId) -> MorId,
    ) -> Result<Self> {
        let homs = build_homs(objects.len(), &morphisms);
        let n = objects.len();
        let mut entries = Vec::new();
        for (f, mf) in morphisms.iter().enumerate() {
            for c in 0..n {
                for &g in &homs[mf.tgt * n + c] {
                    entries.push((g, f, compose(g, f)));
                }
            }
        }
        Self::from_table(objects, morphisms, identity, entries)
    }

    /// A category whose composition is computed on demand. The function is
    /// only called on composable pairs.
    pub fn computed(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<MorId>,
        compose: Arc<ComposeFn>,
    ) -> Self {
        let homs = build_homs(objects.len(), &morphisms);
        FinCategory {
            objects,
            morphisms,
            identity,
            composition: Composition::Computed(compose),
            homs,
            stray: Vec::new(),
        }
    }

    pub fn validated(self) -> Result<Self> {
        let report = validate_category(&self);
        if report.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidCategory(report.to_string()))
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> {
        0..self.objects.len()
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism(&self, m: MorId) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism_by_name(&self, name: &str) -> Option<MorId> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn src(&self, m: MorId) -> ObjId {
        self.morphisms[m].src
    }

    pub fn tgt(&self, m: MorId) -> ObjId {
        self.morphisms[m].tgt
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identity[o]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identity[self.src(m)] == m
    }

    /// `g ∘ f`, or `None` when the pair is not composable or the table
    /// has no entry.
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        if self.morphisms[f].tgt != self.morphisms[g].src {
            return None;
        }
        match &self.composition {
            Composition::Table(t) => t.get(&(g, f)).copied(),
            Composition::Computed(c) => c(g, f),
        }
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.homs[a * self.objects.len() + b]
    }

    /// Position of `m` in `hom(src m, tgt m)`.
    pub fn hom_index(&self, m: MorId) -> usize {
        let h = self.hom(self.src(m), self.tgt(m));
        h.binary_search(&m).expect("morphism listed in its hom-set")
    }

    /// All morphisms with source `a`.
    pub fn hom_from(&self, a: ObjId) -> impl Iterator<Item = MorId> + '_ {
        (0..self.objects.len()).flat_map(move |b| self.hom(a, b).iter().copied())
    }

    pub fn non_identity_morphisms(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphisms.len()).filter(move |&m| !self.is_identity(m))
    }

    /// The opposite category: same ids, endpoints swapped, composition
    /// transposed.
    pub fn opposite(&self) -> FinCategory {
        let morphisms: Vec<Morphism> =
            self.morphisms.iter().map(|m| Morphism { name: m.name.clone(), src: m.tgt, tgt: m.src }).collect();
        let composition = match &self.composition {
            Composition::Table(t) => Composition::Table(t.iter().map(|(&(g, f), &gf)| ((f, g), gf)).collect()),
            Composition::Computed(c) => {
                let c = Arc::clone(c);
                Composition::Computed(Arc::new(move |g, f| c(f, g)))
            }
        };
        let stray = self.stray.iter().map(|&(g, f, gf)| (f, g, gf)).collect();
        let homs = build_homs(self.objects.len(), &morphisms);
        FinCategory {
            objects: self.objects.clone(),
            morphisms,
            identity: self.identity.clone(),
            composition,
            homs,
            stray,
        }
    }

    /// The product category; object `(a, b)` has id `a * |d| + b`.
    pub fn product(&self, d: &FinCategory) -> FinCategory {
        let nd = d.object_count();
        let md = d.morphism_count();
        let objects = self.objects.iter().flat_map(|a| d.objects.iter().map(move |b| format!("({a},{b})"))).collect();
        let mut morphisms = Vec::with_capacity(self.morphisms.len() * md);
        for u in &self.morphisms {
            for v in &d.morphisms {
                morphisms.push(Morphism {
                    name: format!("({},{})", u.name, v.name),
                    src: u.src * nd + v.src,
                    tgt: u.tgt * nd + v.tgt,
                });
            }
        }
        let identity = (0..self.object_count())
            .flat_map(|a| (0..nd).map(move |b| (a, b)))
            .map(|(a, b)| self.identity(a) * md + d.identity(b))
            .collect();
        let c = self.clone();
        let d2 = d.clone();
        let composition = Arc::new(move |g: MorId, f: MorId| {
            let u = c.compose(g / md, f / md)?;
            let v = d2.compose(g % md, f % md)?;
            Some(u * md + v)
        });
        FinCategory::computed(objects, morphisms, identity, composition)
    }

    /// Copies a computed composition into a table.
    pub fn tabulated(&self) -> FinCategory {
        let mut entries = Vec::new();
        for f in 0..self.morphisms.len() {
            for g in self.hom_from(self.tgt(f)) {
                if let Some(gf) = self.compose(g, f) {
                    entries.push((g, f, gf));
                }
            }
        }
        FinCategory::from_table(self.objects.clone(), self.morphisms.clone(), self.identity.clone(), entries)
            .expect("ids already in range")
    }

    /// Composition table entries, for serialization.
    pub fn table_entries(&self) -> Vec<(MorId, MorId, MorId)> {
        let mut out = Vec::new();
        for f in 0..self.morphisms.len() {
            for g in self.hom_from(self.tgt(f)) {
                if let Some(gf) = self.compose(g, f) {
                    out.push((g, f, gf));
                }
            }
        }
        out
    }

    /// The category with no objects.
    pub fn empty() -> Self {
        FinCategory::new(vec![], vec![], vec![], vec![]).expect("empty category")
    }

    /// The terminal category 1.
    pub fn terminal() -> Self {
        Self::discrete(1)
    }

    /// `n` objects and only identities.
    pub fn discrete(n: usize) -> Self {
        let objects: Vec<String> = (0..n).map(|i| format!("{i}")).collect();
        let morphisms = (0..n).map(|i| Morphism { name: format!("id{i}"), src: i, tgt: i }).collect();
        FinCategory::from_fn(objects, morphisms, (0..n).collect(), |g, _| g).expect("discrete category")
    }

    /// The category presented by a finite preorder on `0..n`. `leq(a, b)`
    /// must be reflexive and transitive.
    pub fn poset(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let objects: Vec<String> = (0..n).map(|i| format!("{i}")).collect();
        let mut morphisms = Vec::new();
        let mut index = HashMap::new();
        let mut identity = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if leq(a, b) {
                    index.insert((a, b), morphisms.len());
                    if a == b {
                        identity[a] = morphisms.len();
                    }
                    let name = if a == b { format!("id{a}") } else { format!("{a}<{b}") };
                    morphisms.push(Morphism { name, src: a, tgt: b });
                }
            }
        }
        let ms = morphisms.clone();
        let c = FinCategory::from_fn(objects, morphisms, identity, |g, f| {
            index.get(&(ms[f].src, ms[g].tgt)).copied().unwrap_or(usize::MAX)
        });
        match c {
            Ok(c) => c.validated(),
            Err(_) => Err(Error::InvalidCategory("relation is not transitive".into())),
        }
    }

    /// The arrow category `0 → 1`.
    pub fn arrow() -> Self {
        let mut c = Self::poset(2, |a, b| a <= b).expect("arrow category");
        c.objects = vec!["A".into(), "B".into()];
        c.morphisms[1].name = "f".into();
        c.morphisms[0].name = "idA".into();
        c.morphisms[2].name = "idB".into();
        c
    }

    /// Two parallel arrows `f, g: A → B`.
    pub fn parallel_pair() -> Self {
        let objects = vec!["A".to_string(), "B".to_string()];
        let morphisms = vec![
            Morphism { name: "idA".into(), src: 0, tgt: 0 },
            Morphism { name: "idB".into(), src: 1, tgt: 1 },
            Morphism { name: "f".into(), src: 0, tgt: 1 },
            Morphism { name: "g".into(), src: 0, tgt: 1 },
        ];
        FinCategory::from_fn(objects, morphisms, vec![0, 1], |g, f| if g <= 1 { f } else { g })
            .and_then(|c| c.validated())
            .expect("parallel pair")
    }

    /// A one-object category from a finite monoid given by its
    /// multiplication table; element 0 must be the unit.
    pub fn monoid(names: &[&str], mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let morphisms = names.iter().map(|n| Morphism { name: n.to_string(), src: 0, tgt: 0 }).collect();
        FinCategory::from_fn(vec!["*".into()], morphisms, vec![0], mul)?.validated()
    }

    /// Two objects joined by an isomorphism `f: A → B` with inverse `h`.
    pub fn iso_pair() -> Self {
        let objects = vec!["A".to_string(), "B".to_string()];
        let morphisms = vec![
            Morphism { name: "idA".into(), src: 0, tgt: 0 },
            Morphism { name: "idB".into(), src: 1, tgt: 1 },
            Morphism { name: "f".into(), src: 0, tgt: 1 },
            Morphism { name: "h".into(), src: 1, tgt: 0 },
        ];
        FinCategory::from_fn(objects, morphisms, vec![0, 1], |g, f| match (g, f) {
            (0 | 1, f) => f,
            (g, 0 | 1) => g,
            (3, 2) => 0,
            (2, 3) => 1,
            _ => unreachable!(),
        })
        .and_then(|c| c.validated())
        .expect("iso pair")
    }
}

fn build_homs(n: usize, morphisms: &[Morphism]) -> Vec<Vec<MorId>> {
    let mut homs = vec![Vec::new(); n * n];
    for (i, m) in morphisms.iter().enumerate() {
        homs[m.src * n + m.tgt].push(i);
    }
    homs
}

/// One violated axiom instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    IdentityNotEndo { object: String, morphism: String },
    MissingComposite { g: String, f: String },
    NotComposable { g: String, f: String },
    WrongType { g: String, f: String, gf: String },
    Conflict { g: String, f: String },
    LeftUnit { morphism: String },
    RightUnit { morphism: String },
    Associativity { h: String, g: String, f: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IdentityNotEndo { object, morphism } => {
                write!(out, "identity of {object} is {morphism}, which is not an endomorphism of {object}")
            }
            Violation::MissingComposite { g, f } => write!(out, "no composite for ({g}, {f})"),
            Violation::NotComposable { g, f } => write!(out, "composite given for non-composable pair ({g}, {f})"),
            Violation::WrongType { g, f, gf } => {
                write!(out, "composite of ({g}, {f}) is {gf}, which has the wrong type")
            }
            Violation::Conflict { g, f } => write!(out, "conflicting composites for ({g}, {f})"),
            Violation::LeftUnit { morphism } => write!(out, "identity is not left neutral for {morphism}"),
            Violation::RightUnit { morphism } => write!(out, "identity is not right neutral for {morphism}"),
            Violation::Associativity { h, g, f } => write!(out, "({h}, {g}, {f}) does not associate"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CategoryReport {
    pub violations: Vec<Violation>,
}

impl CategoryReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for CategoryReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(out, "; ")?;
            }
            write!(out, "{v}")?;
        }
        Ok(())
    }
}

/// Lists every violated category axiom instance.
pub fn validate_category(c: &FinCategory) -> CategoryReport {
    let name = |m: MorId| c.morphisms[m].name.clone();
    let mut v = Vec::new();
    for o in c.objects() {
        let i = c.identity(o);
        if c.src(i) != o || c.tgt(i) != o {
            v.push(Violation::IdentityNotEndo { object: c.objects[o].clone(), morphism: name(i) });
        }
    }
    for &(g, f, _) in &c.stray {
        if c.tgt(f) != c.src(g) {
            v.push(Violation::NotComposable { g: name(g), f: name(f) });
        } else {
            v.push(Violation::Conflict { g: name(g), f: name(f) });
        }
    }
    let mut typed = true;
    for f in 0..c.morphism_count() {
        for g in c.hom_from(c.tgt(f)) {
            match c.compose(g, f) {
                None => {
                    typed = false;
                    v.push(Violation::MissingComposite { g: name(g), f: name(f) });
                }
                Some(gf) if c.src(gf) != c.src(f) || c.tgt(gf) != c.tgt(g) => {
                    typed = false;
                    v.push(Violation::WrongType { g: name(g), f: name(f), gf: name(gf) });
                }
                _ => {}
            }
        }
    }
    if !typed || !v.is_empty() {
        return CategoryReport { violations: v };
    }
    for f in 0..c.morphism_count() {
        if c.compose(c.identity(c.tgt(f)), f) != Some(f) {
            v.push(Violation::LeftUnit { morphism: name(f) });
        }
        if c.compose(f, c.identity(c.src(f))) != Some(f) {
            v.push(Violation::RightUnit { morphism: name(f) });
        }
    }
    for f in 0..c.morphism_count() {
        for g in c.hom_from(c.tgt(f)) {
            let gf = c.compose(g, f).expect("checked above");
            for h in c.hom_from(c.tgt(g)) {
                let hg = c.compose(h, g).expect("checked above");
                if c.compose(h, gf) != c.compose(hg, f) {
                    v.push(Violation::Associativity { h: name(h), g: name(g), f: name(f) });
                }
            }
        }
    }
    CategoryReport { violations: v }
}

/// A functor between finite categories.
#[derive(Debug, Clone)]
pub struct FinFunctor {
    pub src: Arc<FinCategory>,
    pub tgt: Arc<FinCategory>,
    pub obj: Vec<ObjId>,
    pub mor: Vec<MorId>,
}

impl FinFunctor {
    pub fn new(src: Arc<FinCategory>, tgt: Arc<FinCategory>, obj: Vec<ObjId>, mor: Vec<MorId>) -> Result<Self> {
        let f = FinFunctor { src, tgt, obj, mor };
        let problems = f.validate();
        if problems.is_empty() {
            Ok(f)
        } else {
            Err(Error::InvalidFunctor(problems.join("; ")))
        }
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let obj = c.objects().collect();
        let mor = (0..c.morphism_count()).collect();
        FinFunctor { src: Arc::clone(&c), tgt: c, obj, mor }
    }

    /// The functor constant at `o`.
    pub fn constant(src: Arc<FinCategory>, tgt: Arc<FinCategory>, o: ObjId) -> Self {
        let obj = vec![o; src.object_count()];
        let mor = vec![tgt.identity(o); src.morphism_count()];
        FinFunctor { src, tgt, obj, mor }
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &FinFunctor) -> Result<FinFunctor> {
        if *self.tgt != *g.src {
            return Err(Error::Mismatch("functors are not composable".into()));
        }
        Ok(FinFunctor {
            src: Arc::clone(&self.src),
            tgt: Arc::clone(&g.tgt),
            obj: self.obj.iter().map(|&o| g.obj[o]).collect(),
            mor: self.mor.iter().map(|&m| g.mor[m]).collect(),
        })
    }

    pub fn validate(&self) -> Vec<String> {
        let (c, d) = (&self.src, &self.tgt);
        let mut out = Vec::new();
        if self.obj.len() != c.object_count() || self.mor.len() != c.morphism_count() {
            out.push("object or morphism map has the wrong length".into());
            return out;
        }
        if self.obj.iter().any(|&o| o >= d.object_count()) || self.mor.iter().any(|&m| m >= d.morphism_count()) {
            out.push("image id out of range".into());
            return out;
        }
        for m in 0..c.morphism_count() {
            let fm = self.mor[m];
            if d.src(fm) != self.obj[c.src(m)] || d.tgt(fm) != self.obj[c.tgt(m)] {
                out.push(format!("image of {} has the wrong type", c.morphism(m).name));
            }
        }
        for o in c.objects() {
            if self.mor[c.identity(o)] != d.identity(self.obj[o]) {
                out.push(format!("identity of {} is not preserved", c.object_name(o)));
            }
        }
        for f in 0..c.morphism_count() {
            for g in c.hom_from(c.tgt(f)) {
                let gf = c.compose(g, f).map(|x| self.mor[x]);
                if gf != d.compose(self.mor[g], self.mor[f]) {
                    out.push(format!("composite ({}, {}) is not preserved", c.morphism(g).name, c.morphism(f).name));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// Read-only access to a set-valued functor: sizes of the sets and the
/// action of morphisms. The direction of the action is fixed by context.
pub trait FunctorView {
    fn size(&self, o: ObjId) -> usize;
    fn act(&self, m: MorId, x: usize) -> usize;
}

/// A finite-set-valued functor. Elements of `F(o)` are `0..sizes[o]`;
/// `maps[m]` goes from `F(src m)` to `F(tgt m)` when covariant and from
/// `F(tgt m)` to `F(src m)` when contravariant.
#[derive(Debug, Clone)]
pub struct SetFunctor {
    pub base: Arc<FinCategory>,
    pub variance: Variance,
    pub sizes: Vec<usize>,
    pub maps: Vec<Vec<usize>>,
    pub labels: Option<Vec<Vec<String>>>,
}

impl FunctorView for SetFunctor {
    fn size(&self, o: ObjId) -> usize {
        self.sizes[o]
    }
    fn act(&self, m: MorId, x: usize) -> usize {
        self.maps[m][x]
    }
}

impl SetFunctor {
    pub fn new(base: Arc<FinCategory>, variance: Variance, sizes: Vec<usize>, maps: Vec<Vec<usize>>) -> Result<Self> {
        let f = SetFunctor { base, variance, sizes, maps, labels: None };
        f.checked()
    }

    pub fn from_fn(
        base: Arc<FinCategory>,
        variance: Variance,
        sizes: Vec<usize>,
        act: impl Fn(MorId, usize) -> usize,
    ) -> Result<Self> {
        let maps = (0..base.morphism_count())
            .map(|m| {
                let from = match variance {
                    Variance::Covariant => base.src(m),
                    Variance::Contravariant => base.tgt(m),
                };
                (0..sizes[from]).map(|x| act(m, x)).collect()
            })
            .collect();
        SetFunctor::new(base, variance, sizes, maps)
    }

    pub fn checked(self) -> Result<Self> {
        let problems = self.validate();
        if problems.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidFunctor(problems.join("; ")))
        }
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn label(&self, o: ObjId, x: usize) -> String {
        match &self.labels {
            Some(l) => l[o][x].clone(),
            None => format!("{x}"),
        }
    }

    /// The constant functor with value `0..n` and identity actions.
    pub fn constant(base: Arc<FinCategory>, variance: Variance, n: usize) -> Self {
        let sizes = vec![n; base.object_count()];
        let maps = vec![(0..n).collect(); base.morphism_count()];
        SetFunctor { base, variance, sizes, maps, labels: None }
    }

    /// The covariant representable `C[a, -]`; elements index `hom(a, b)`.
    pub fn representable(base: Arc<FinCategory>, a: ObjId) -> Self {
        let c = &base;
        let sizes = c.objects().map(|b| c.hom(a, b).len()).collect();
        let maps = (0..c.morphism_count())
            .map(|m| c.hom(a, c.src(m)).iter().map(|&f| c.hom_index(c.compose(m, f).expect("composable"))).collect())
            .collect();
        SetFunctor { base, variance: Variance::Covariant, sizes, maps, labels: None }
    }

    /// The presheaf `C[-, a]`; elements index `hom(b, a)`.
    pub fn yoneda(base: Arc<FinCategory>, a: ObjId) -> Self {
        let c = &base;
        let sizes = c.objects().map(|b| c.hom(b, a).len()).collect();
        let maps = (0..c.morphism_count())
            .map(|m| c.hom(c.tgt(m), a).iter().map(|&f| c.hom_index(c.compose(f, m).expect("composable"))).collect())
            .collect();
        SetFunctor { base, variance: Variance::Contravariant, sizes, maps, labels: None }
    }

    /// The same data read as a functor on the opposite category.
    pub fn on_opposite(&self) -> SetFunctor {
        SetFunctor {
            base: Arc::new(self.base.opposite()),
            variance: match self.variance {
                Variance::Covariant => Variance::Contravariant,
                Variance::Contravariant => Variance::Covariant,
            },
            sizes: self.sizes.clone(),
            maps: self.maps.clone(),
            labels: self.labels.clone(),
        }
    }

    /// Every functoriality violation, empty iff the data is a functor.
    pub fn validate(&self) -> Vec<String> {
        let c = &self.base;
        let mut out = Vec::new();
        if self.sizes.len() != c.object_count() || self.maps.len() != c.morphism_count() {
            out.push("sets or maps have the wrong length".into());
            return out;
        }
        for m in 0..c.morphism_count() {
            let (a, b) = from_to(self.variance, c, m);
            if self.maps[m].len() != self.sizes[a] || self.maps[m].iter().any(|&y| y >= self.sizes[b]) {
                out.push(format!("map of {} is not a function between the right sets", c.morphism(m).name));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for o in c.objects() {
            let i = c.identity(o);
            if self.maps[i].iter().enumerate().any(|(x, &y)| x != y) {
                out.push(format!("identity of {} does not act trivially", c.object_name(o)));
            }
        }
        for f in 0..c.morphism_count() {
            for g in c.hom_from(c.tgt(f)) {
                let Some(gf) = c.compose(g, f) else { continue };
                let ok = match self.variance {
                    Variance::Covariant => {
                        (0..self.sizes[c.src(f)]).all(|x| self.maps[gf][x] == self.maps[g][self.maps[f][x]])
                    }
                    Variance::Contravariant => {
                        (0..self.sizes[c.tgt(g)]).all(|x| self.maps[gf][x] == self.maps[f][self.maps[g][x]])
                    }
                };
                if !ok {
                    out.push(format!(
                        "action of {} is not the composite of {} and {}",
                        c.morphism(gf).name,
                        c.morphism(g).name,
                        c.morphism(f).name
                    ));
                }
            }
        }
        out
    }
}

fn from_to(v: Variance, c: &FinCategory, m: MorId) -> (ObjId, ObjId) {
    match v {
        Variance::Covariant => (c.src(m), c.tgt(m)),
        Variance::Contravariant => (c.tgt(m), c.src(m)),
    }
}

/// A functor `H: C^op × C → Set`. Elements of `H(a, b)` are
/// `0..sizes[a * n + b]`. For `u: a → a'`, `left[u][b]` maps `H(a', b)` to
/// `H(a, b)`; for `v: b → b'`, `right[v][a]` maps `H(a, b)` to `H(a, b')`.
#[derive(Debug, Clone)]
pub struct BiFunctor {
    pub base: Arc<FinCategory>,
    pub sizes: Vec<usize>,
    pub left: Vec<Vec<Vec<usize>>>,
    pub right: Vec<Vec<Vec<usize>>>,
}

impl BiFunctor {
    pub fn size(&self, a: ObjId, b: ObjId) -> usize {
        self.sizes[a * self.base.object_count() + b]
    }

    /// `H(a, b) = X(a) × Y(b)` for a presheaf `X` and a covariant `Y`;
    /// the pair `(x, y)` has index `x * |Y b| + y`.
    pub fn product(x: &SetFunctor, y: &SetFunctor) -> Result<Self> {
        if x.variance != Variance::Contravariant || y.variance != Variance::Covariant {
            return Err(Error::InvalidInput("expected a presheaf and a covariant functor".into()));
        }
        if *x.base != *y.base {
            return Err(Error::Mismatch("factors live over different categories".into()));
        }
        let c = Arc::clone(&x.base);
        let n = c.object_count();
        let sizes = (0..n * n).map(|i| x.sizes[i / n] * y.sizes[i % n]).collect();
        let left = (0..c.morphism_count())
            .map(|u| {
                (0..n)
                    .map(|b| {
                        let yb = y.sizes[b];
                        (0..x.sizes[c.tgt(u)] * yb).map(|e| x.maps[u][e / yb] * yb + e % yb).collect()
                    })
                    .collect()
            })
            .collect();
        let right = (0..c.morphism_count())
            .map(|v| {
                (0..n)
                    .map(|a| {
                        let (yb, yb2) = (y.sizes[c.src(v)], y.sizes[c.tgt(v)]);
                        (0..x.sizes[a] * yb).map(|e| (e / yb) * yb2 + y.maps[v][e % yb]).collect()
                    })
                    .collect()
            })
            .collect();
        let h = BiFunctor { base: c, sizes, left, right };
        h.checked()
    }

    pub fn checked(self) -> Result<Self> {
        let p = self.validate();
        if p.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidFunctor(p.join("; ")))
        }
    }

    pub fn validate(&self) -> Vec<String> {
        let c = &self.base;
        let n = c.object_count();
        let mut out = Vec::new();
        if self.sizes.len() != n * n || self.left.len() != c.morphism_count() || self.right.len() != c.morphism_count()
        {
            out.push("tables have the wrong length".into());
            return out;
        }
        for u in 0..c.morphism_count() {
            for b in 0..n {
                let t = &self.left[u][b];
                if t.len() != self.size(c.tgt(u), b) || t.iter().any(|&e| e >= self.size(c.src(u), b)) {
                    out.push(format!("left action of {} at {} is ill-typed", c.morphism(u).name, c.object_name(b)));
                }
                let t = &self.right[u][b];
                if t.len() != self.size(b, c.src(u)) || t.iter().any(|&e| e >= self.size(b, c.tgt(u))) {
                    out.push(format!("right action of {} at {} is ill-typed", c.morphism(u).name, c.object_name(b)));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for o in c.objects() {
            let i = c.identity(o);
            for b in 0..n {
                if self.left[i][b].iter().enumerate().any(|(x, &y)| x != y)
                    || self.right[i][b].iter().enumerate().any(|(x, &y)| x != y)
                {
                    out.push(format!("identity of {} acts nontrivially", c.object_name(o)));
                }
            }
        }
        for f in 0..c.morphism_count() {
            for g in c.hom_from(c.tgt(f)) {
                let gf = c.compose(g, f).expect("validated category");
                for b in 0..n {
                    let ok_l =
                        (0..self.size(c.tgt(g), b)).all(|x| self.left[gf][b][x] == self.left[f][b][self.left[g][b][x]]);
                    let ok_r = (0..self.size(b, c.src(f)))
                        .all(|x| self.right[gf][b][x] == self.right[g][b][self.right[f][b][x]]);
                    if !ok_l || !ok_r {
                        out.push(format!(
                            "actions of {} and {} do not compose",
                            c.morphism(g).name,
                            c.morphism(f).name
                        ));
                    }
                }
            }
        }
        for u in 0..c.morphism_count() {
            for v in 0..c.morphism_count() {
                // H(tgt u, src v) -> H(src u, tgt v) both ways round.
                let (a2, b) = (c.tgt(u), c.src(v));
                let ok = (0..self.size(a2, b)).all(|x| {
                    let lr = self.right[v][c.src(u)][self.left[u][b][x]];
                    let rl = self.left[u][c.tgt(v)][self.right[v][a2][x]];
                    lr == rl
                });
                if !ok {
                    out.push(format!("actions of {} and {} do not commute", c.morphism(u).name, c.morphism(v).name));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_categories_validate() {
        for c in [
            FinCategory::empty(),
            FinCategory::terminal(),
            FinCategory::discrete(3),
            FinCategory::arrow(),
            FinCategory::parallel_pair(),
            FinCategory::iso_pair(),
        ] {
            assert!(validate_category(&c).is_empty(), "{c:?}");
        }
        assert_eq!(FinCategory::arrow().morphism_count(), 3);
    }

    #[test]
    fn mistyped_entry_is_named() {
        let objects = vec!["A".to_string(), "B".to_string()];
        let morphisms = vec![
            Morphism { name: "idA".into(), src: 0, tgt: 0 },
            Morphism { name: "idB".into(), src: 1, tgt: 1 },
            Morphism { name: "f".into(), src: 0, tgt: 1 },
        ];
        let compose = vec![(0, 0, 0), (1, 1, 1), (1, 2, 2), (2, 0, 1)];
        let c = FinCategory::from_table(objects, morphisms, vec![0, 1], compose).unwrap();
        let report = validate_category(&c);
        assert!(report.violations.contains(&Violation::WrongType { g: "f".into(), f: "idA".into(), gf: "idB".into() }));
    }

    #[test]
    fn opposite_is_involutive() {
        for c in [FinCategory::terminal(), FinCategory::arrow(), FinCategory::iso_pair()] {
            assert_eq!(c.opposite().opposite(), c);
            assert!(validate_category(&c.opposite()).is_empty());
        }
        let a = FinCategory::arrow();
        let op = a.opposite();
        assert_eq!(op.hom(1, 0).len(), 1);
        assert_eq!(op.hom(0, 1).len(), 0);
        assert_eq!(FinCategory::terminal().opposite(), FinCategory::terminal());
    }

    #[test]
    fn representables_are_functors() {
        let c = Arc::new(FinCategory::parallel_pair());
        for a in c.objects() {
            assert!(SetFunctor::representable(Arc::clone(&c), a).validate().is_empty());
            assert!(SetFunctor::yoneda(Arc::clone(&c), a).validate().is_empty());
        }
    }

    #[test]
    fn product_category_validates() {
        let p = FinCategory::arrow().product(&FinCategory::iso_pair().opposite());
        assert_eq!(p.object_count(), 4);
        assert!(validate_category(&p).is_empty());
    }
}
