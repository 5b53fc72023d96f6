//! Connected permutations and vertical composition of bioperations.
//!
//! A pair of profiles `ms = (m1,…,mp)` and `ns = (n1,…,nq)` with equal sums
//! `K` and a permutation `s` of `K` give a graph with a vertex per top block,
//! per top position, per bottom position and per bottom block. Top block `i`
//! is joined to its `mi` positions, top position `x` to bottom position
//! `s(x)`, and bottom positions to their block. `s` is connected when this
//! graph is. Because every position belongs to exactly one block, this is
//! the same as connectivity of the block graph with
//! an edge `block(x)` to `block(s(x))` for every position `x`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::fincat::{compare, Comparison, QuotientBuilder, QuotientSet, UnionFind};
use crate::laws::{LawCheck, Report};
use crate::{Error, Result};

pub type Profile = Vec<usize>;

/// Parses `"2,1"`. The empty string is the empty profile.
pub fn parse_profile(text: &str) -> Result<Profile> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|d| d.trim().parse::<usize>().map_err(|_| Error::InvalidInput(format!("cannot read profile {text:?}"))))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ConnectedPerm {
    pub ms: Profile,
    pub ns: Profile,
    /// One-line notation: top position `x` goes to bottom position `perm[x]`.
    pub perm: Vec<usize>,
}

impl ConnectedPerm {
    pub fn inverse(&self) -> ConnectedPerm {
        ConnectedPerm { ms: self.ns.clone(), ns: self.ms.clone(), perm: invert(&self.perm) }
    }
}

impl fmt::Display for ConnectedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = self.perm.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "{line}")
    }
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut q = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        q[j] = i;
    }
    q
}

fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    g.iter().map(|&x| f[x]).collect()
}

fn block_index(profile: &[usize]) -> Vec<usize> {
    profile.iter().enumerate().flat_map(|(i, &m)| std::iter::repeat(i).take(m)).collect()
}

fn offsets(profile: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    profile
        .iter()
        .map(|&m| {
            let o = acc;
            acc += m;
            o
        })
        .collect()
}

/// Breadth-first connectivity test on the four-layer graph.
pub fn is_connected(ms: &[usize], ns: &[usize], perm: &[usize]) -> bool {
    let (p, q, k) = (ms.len(), ns.len(), perm.len());
    let n = p + 2 * k + q;
    if n == 0 {
        return true;
    }
    let mut adj = vec![Vec::new(); n];
    let mut edge = |a: usize, b: usize| {
        adj[a].push(b);
        adj[b].push(a);
    };
    let top = block_index(ms);
    let bottom = block_index(ns);
    for x in 0..k {
        edge(top[x], p + x);
        edge(p + x, p + k + perm[x]);
        edge(p + k + x, p + 2 * k + bottom[x]);
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == n
}

/// All permutations of `k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else { break };
        let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

/// Unpruned reference: every permutation, each tested by breadth-first search.
pub fn connected_perms_bruteforce(ms: &[usize], ns: &[usize]) -> Vec<ConnectedPerm> {
    let k: usize = ms.iter().sum();
    if k != ns.iter().sum::<usize>() {
        return Vec::new();
    }
    permutations(k)
        .into_iter()
        .filter(|s| is_connected(ms, ns, s))
        .map(|perm| ConnectedPerm { ms: ms.to_vec(), ns: ns.to_vec(), perm })
        .collect()
}

struct Search<'a> {
    ms: &'a [usize],
    ns: &'a [usize],
    top: Vec<usize>,
    bottom: Vec<usize>,
    /// The top block whose last position this is, if any.
    closes: Vec<Option<usize>>,
    out: Vec<ConnectedPerm>,
}

impl Search<'_> {
    fn blocks(&self) -> usize {
        self.ms.len() + self.ns.len()
    }

    /// Some component other than the whole graph has no open positions left.
    fn sealed(&self, uf: &mut UnionFind, assigned: usize, used: &[bool]) -> bool {
        let p = self.ms.len();
        let mut open = vec![0usize; self.blocks()];
        for x in assigned..self.top.len() {
            open[uf.find(self.top[x])] += 1;
        }
        for (y, &u) in used.iter().enumerate() {
            if !u {
                open[uf.find(p + self.bottom[y])] += 1;
            }
        }
        let roots: Vec<usize> = (0..self.blocks()).map(|b| uf.find(b)).collect();
        let first = roots[0];
        let single = roots.iter().all(|&r| r == first);
        !single && roots.iter().any(|&r| open[r] == 0)
    }

    fn go(&mut self, perm: &mut Vec<usize>, used: &mut Vec<bool>, uf: &UnionFind) {
        let x = perm.len();
        let k = self.top.len();
        if x == k {
            let mut uf = uf.clone();
            let r = if uf.is_empty() { 0 } else { uf.find(0) };
            if (0..self.blocks()).all(|b| uf.find(b) == r) {
                self.out.push(ConnectedPerm { ms: self.ms.to_vec(), ns: self.ns.to_vec(), perm: perm.clone() });
            }
            return;
        }
        let p = self.ms.len();
        for y in 0..k {
            if used[y] {
                continue;
            }
            let mut next = uf.clone();
            next.union(self.top[x], p + self.bottom[y]);
            used[y] = true;
            perm.push(y);
            let prune = self.closes[x].is_some() && self.sealed(&mut next, x + 1, used);
            if !prune {
                self.go(perm, used, &next);
            }
            perm.pop();
            used[y] = false;
        }
    }
}

/// The connected permutations of `(ms, ns)`, generated position by position
/// with a component count kept in a union-find over blocks. A branch is cut
/// as soon as a top block closes a component that cannot grow any more.
pub fn connected_perms(ms: &[usize], ns: &[usize]) -> Vec<ConnectedPerm> {
    let k: usize = ms.iter().sum();
    if k != ns.iter().sum::<usize>() {
        return Vec::new();
    }
    let blocks = ms.len() + ns.len();
    if blocks >= 2 && ms.iter().chain(ns).any(|&m| m == 0) {
        return Vec::new();
    }
    let top = block_index(ms);
    let mut closes = vec![None; k];
    for (i, (o, &m)) in offsets(ms).iter().zip(ms).enumerate() {
        if m > 0 {
            closes[o + m - 1] = Some(i);
        }
    }
    let mut search = Search { ms, ns, top, bottom: block_index(ns), closes, out: Vec::new() };
    search.go(&mut Vec::with_capacity(k), &mut vec![false; k], &UnionFind::new(blocks));
    search.out
}

pub fn count_connected(ms: &[usize], ns: &[usize]) -> usize {
    connected_perms(ms, ns).len()
}

/// Every profile with at most `len` entries summing to at most `total`.
pub fn profiles(total: usize, len: usize) -> Vec<Profile> {
    fn rec(left: usize, len: usize, cur: &mut Profile, out: &mut Vec<Profile>) {
        out.push(cur.clone());
        if cur.len() == len {
            return;
        }
        for m in 0..=left {
            cur.push(m);
            rec(left - m, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, len, &mut Vec::new(), &mut out);
    out
}

/// One operation set of a collection: labelled elements with `inputs`
/// inputs and `outputs` outputs, and the adjacent transpositions acting on
/// each side.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bioperations {
    labels: Vec<String>,
    input_swaps: Vec<Vec<usize>>,
    output_swaps: Vec<Vec<usize>>,
}

/// A family of finite sets `Φ(a, m)` of bioperations with `a` inputs and
/// `m` outputs, acted on by the symmetric groups on both sides.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Collection {
    sets: BTreeMap<(usize, usize), Bioperations>,
}

fn check_coxeter(what: &str, n: usize, size: usize, swaps: &[Vec<usize>]) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidInput(format!("{what}: {m}")));
    if swaps.len() != n.saturating_sub(1) {
        return bad(format!("expected {} transpositions, got {}", n.saturating_sub(1), swaps.len()));
    }
    for (i, t) in swaps.iter().enumerate() {
        if t.len() != size || t.iter().any(|&v| v >= size) {
            return bad(format!("transposition {i} is not a table on {size} elements"));
        }
        if (0..size).any(|e| t[t[e]] != e) {
            return bad(format!("transposition {i} is not an involution"));
        }
    }
    for i in 0..swaps.len() {
        for j in i + 1..swaps.len() {
            let (a, b) = (&swaps[i], &swaps[j]);
            let holds = if j == i + 1 {
                (0..size).all(|e| a[b[a[e]]] == b[a[b[e]]])
            } else {
                (0..size).all(|e| a[b[e]] == b[a[e]])
            };
            if !holds {
                return bad(format!("transpositions {i} and {j} break the braid relations"));
            }
        }
    }
    Ok(())
}

/// Writes `pi` as a word in adjacent transpositions, first applied first.
fn word(pi: &[usize]) -> Vec<usize> {
    let mut w = pi.to_vec();
    let mut out = Vec::new();
    loop {
        let Some(k) = (0..w.len().saturating_sub(1)).find(|&k| w[k] > w[k + 1]) else { break };
        w.swap(k, k + 1);
        out.push(k);
    }
    out
}

impl Collection {
    pub fn new() -> Self {
        Collection::default()
    }

    /// Adds `labels` to `Φ(inputs, outputs)` with trivial actions.
    pub fn with_trivial(mut self, inputs: usize, outputs: usize, labels: &[&str]) -> Self {
        let n = labels.len();
        let id: Vec<usize> = (0..n).collect();
        self.sets.insert(
            (inputs, outputs),
            Bioperations {
                labels: labels.iter().map(|s| s.to_string()).collect(),
                input_swaps: vec![id.clone(); inputs.saturating_sub(1)],
                output_swaps: vec![id; outputs.saturating_sub(1)],
            },
        );
        self
    }

    /// Adds a set with explicit actions of the adjacent transpositions.
    pub fn with_actions(
        mut self,
        inputs: usize,
        outputs: usize,
        labels: Vec<String>,
        input_swaps: Vec<Vec<usize>>,
        output_swaps: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let size = labels.len();
        check_coxeter("input action", inputs, size, &input_swaps)?;
        check_coxeter("output action", outputs, size, &output_swaps)?;
        for t in &input_swaps {
            for u in &output_swaps {
                if (0..size).any(|e| t[u[e]] != u[t[e]]) {
                    return Err(Error::InvalidInput("input and output actions do not commute".into()));
                }
            }
        }
        self.sets.insert((inputs, outputs), Bioperations { labels, input_swaps, output_swaps });
        Ok(self)
    }

    pub fn size(&self, inputs: usize, outputs: usize) -> usize {
        self.sets.get(&(inputs, outputs)).map_or(0, |b| b.labels.len())
    }

    pub fn arities(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.sets.iter().filter(|(_, b)| !b.labels.is_empty()).map(|(&k, _)| k)
    }

    pub fn label(&self, inputs: usize, outputs: usize, e: usize) -> String {
        self.sets.get(&(inputs, outputs)).and_then(|b| b.labels.get(e).cloned()).unwrap_or_else(|| e.to_string())
    }

    fn swap_in(&self, a: usize, m: usize, k: usize, e: usize) -> usize {
        self.sets[&(a, m)].input_swaps[k][e]
    }

    fn swap_out(&self, a: usize, m: usize, k: usize, e: usize) -> usize {
        self.sets[&(a, m)].output_swaps[k][e]
    }

    /// The action of a pair of permutations, inputs then outputs.
    pub fn act(&self, a: usize, m: usize, inputs: &[usize], outputs: &[usize], e: usize) -> usize {
        let mut e = e;
        for t in word(inputs) {
            e = self.swap_in(a, m, t, e);
        }
        for t in word(outputs) {
            e = self.swap_out(a, m, t, e);
        }
        e
    }

    /// Elements with `outputs` outputs, as `(inputs, element)`.
    fn with_outputs(&self, outputs: usize) -> Vec<(usize, usize)> {
        self.arities()
            .filter(|&(_, m)| m == outputs)
            .flat_map(|(a, m)| (0..self.size(a, m)).map(move |e| (a, e)))
            .collect()
    }

    /// Elements with `inputs` inputs, as `(outputs, element)`.
    fn with_inputs(&self, inputs: usize) -> Vec<(usize, usize)> {
        self.arities()
            .filter(|&(a, _)| a == inputs)
            .flat_map(|(a, m)| (0..self.size(a, m)).map(move |e| (m, e)))
            .collect()
    }
}

/// The singleton family at one input and one output.
pub fn identity_bioperation() -> Collection {
    Collection::new().with_trivial(1, 1, &["id"])
}

/// A raw element of a vertical composite: a bioperation of the lower
/// collection on each top block, one of the upper collection on each bottom
/// block, the connected permutation joining them, and the arrangements of
/// the concatenated free inputs and outputs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VRaw {
    /// `(inputs, element)` of the lower bioperation on each top block.
    pub lower: Vec<(usize, usize)>,
    /// `(outputs, element)` of the upper bioperation on each bottom block.
    pub upper: Vec<(usize, usize)>,
    pub perm: Vec<usize>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

impl VRaw {
    pub fn arity(&self) -> (usize, usize) {
        (self.inputs.len(), self.outputs.len())
    }
}

pub struct VComposite {
    /// Element tuples joined by a connected permutation, before arrangements.
    pub raw_pairs: usize,
    pub classes: QuotientSet<VRaw>,
}

fn product<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for c in choices {
        out = out.into_iter().flat_map(|v| c.iter().map(move |x| [v.clone(), vec![x.clone()]].concat())).collect();
    }
    out
}

fn transposition(n: usize, k: usize) -> Vec<usize> {
    let mut t: Vec<usize> = (0..n).collect();
    t.swap(k, k + 1);
    t
}

/// Sends positions of the layout with blocks `i` and `i+1` exchanged to
/// the corresponding positions of the original layout.
fn block_swap(sizes: &[usize], i: usize) -> Vec<usize> {
    let off = offsets(sizes);
    let (a, b) = (sizes[i], sizes[i + 1]);
    let base = off[i];
    let total: usize = sizes.iter().sum();
    (0..total)
        .map(|x| {
            if x < base || x >= base + a + b {
                x
            } else if x < base + b {
                x + a
            } else {
                x - b
            }
        })
        .collect()
}

/// The vertical composite `Ψ ∘ Φ` along `ms` (outputs of the lower
/// operations) and `ns` (inputs of the upper ones). Classes are taken under
/// the symmetric actions on every bioperation and under reordering of
/// blocks with equal profile entries.
pub fn properad_vcompose(psi: &Collection, phi: &Collection, ms: &[usize], ns: &[usize]) -> Result<VComposite> {
    let k: usize = ms.iter().sum();
    if k != ns.iter().sum::<usize>() {
        return Err(Error::Mismatch(format!("profiles {ms:?} and {ns:?} have different totals")));
    }
    let perms = connected_perms(ms, ns);
    let lower = product(&ms.iter().map(|&m| phi.with_outputs(m)).collect::<Vec<_>>());
    let upper = product(&ns.iter().map(|&n| psi.with_inputs(n)).collect::<Vec<_>>());
    let raw_pairs = perms.len() * lower.len() * upper.len();
    let mut raws = Vec::new();
    for l in &lower {
        let ins: usize = l.iter().map(|x| x.0).sum();
        let in_perms = permutations(ins);
        for u in &upper {
            let outs: usize = u.iter().map(|x| x.0).sum();
            let out_perms = permutations(outs);
            for s in &perms {
                for i in &in_perms {
                    for o in &out_perms {
                        raws.push(VRaw {
                            lower: l.clone(),
                            upper: u.clone(),
                            perm: s.perm.clone(),
                            inputs: i.clone(),
                            outputs: o.clone(),
                        });
                    }
                }
            }
        }
    }
    let mut b = QuotientBuilder::with_cap("vertical composite", raws)?;
    let raws = b.raw().to_vec();
    for r in &raws {
        for t in relations(psi, phi, ms, ns, r) {
            b.relate(r, &t)?;
        }
    }
    Ok(VComposite { raw_pairs, classes: b.finish() })
}

fn relations(psi: &Collection, phi: &Collection, ms: &[usize], ns: &[usize], r: &VRaw) -> Vec<VRaw> {
    let mut out = Vec::new();
    let k = r.perm.len();
    let in_sizes: Vec<usize> = r.lower.iter().map(|x| x.0).collect();
    let out_sizes: Vec<usize> = r.upper.iter().map(|x| x.0).collect();
    let in_off = offsets(&in_sizes);
    let out_off = offsets(&out_sizes);
    let top_off = offsets(ms);
    let bottom_off = offsets(ns);
    for (i, &(a, e)) in r.lower.iter().enumerate() {
        let m = ms[i];
        for t in 0..a.saturating_sub(1) {
            let mut x = r.clone();
            x.lower[i].1 = phi.swap_in(a, m, t, e);
            out.push(VRaw { inputs: compose(&r.inputs, &transposition(r.inputs.len(), in_off[i] + t)), ..x });
        }
        for t in 0..m.saturating_sub(1) {
            let mut x = r.clone();
            x.lower[i].1 = phi.swap_out(a, m, t, e);
            out.push(VRaw { perm: compose(&r.perm, &transposition(k, top_off[i] + t)), ..x });
        }
    }
    for (j, &(b, e)) in r.upper.iter().enumerate() {
        let n = ns[j];
        for t in 0..n.saturating_sub(1) {
            let mut x = r.clone();
            x.upper[j].1 = psi.swap_in(n, b, t, e);
            out.push(VRaw { perm: compose(&transposition(k, bottom_off[j] + t), &r.perm), ..x });
        }
        for t in 0..b.saturating_sub(1) {
            let mut x = r.clone();
            x.upper[j].1 = psi.swap_out(n, b, t, e);
            out.push(VRaw { outputs: compose(&r.outputs, &transposition(r.outputs.len(), out_off[j] + t)), ..x });
        }
    }
    for i in 0..ms.len().saturating_sub(1) {
        if ms[i] == ms[i + 1] {
            let mut lower = r.lower.clone();
            lower.swap(i, i + 1);
            out.push(VRaw {
                lower,
                upper: r.upper.clone(),
                perm: compose(&r.perm, &block_swap(ms, i)),
                inputs: compose(&r.inputs, &block_swap(&in_sizes, i)),
                outputs: r.outputs.clone(),
            });
        }
    }
    for j in 0..ns.len().saturating_sub(1) {
        if ns[j] == ns[j + 1] {
            let mut upper = r.upper.clone();
            upper.swap(j, j + 1);
            out.push(VRaw {
                lower: r.lower.clone(),
                upper,
                perm: compose(&block_swap(ns, j), &r.perm),
                inputs: r.inputs.clone(),
                outputs: compose(&r.outputs, &block_swap(&out_sizes, j)),
            });
        }
    }
    out
}

fn discrete(x: &Collection, a: usize, m: usize) -> QuotientSet<usize> {
    QuotientSet::discrete((0..x.size(a, m)).collect())
}

/// `id ∘ Φ ≅ Φ` and `Φ ∘ id ≅ Φ` at every arity where `Φ` has elements.
pub fn unit_laws_check(x: &Collection) -> Result<Report> {
    let id = identity_bioperation();
    let mut left = LawCheck::new("id ∘ Φ ≅ Φ");
    let mut right = LawCheck::new("Φ ∘ id ≅ Φ");
    let arities: Vec<(usize, usize)> = x.arities().collect();
    for &(a, m) in &arities {
        let ones = vec![1; m];
        let c = properad_vcompose(&id, x, &[m], &ones)?;
        let comp = fiber_compare(&c.classes, (a, m), &discrete(x, a, m), |r| {
            let out = compose(&r.outputs, &r.perm);
            x.act(a, m, &r.inputs, &out, r.lower[0].1)
        });
        left.record_comparison(&format!("arity ({a}, {m})"), &comp);
        let ones = vec![1; a];
        let c = properad_vcompose(x, &id, &ones, &[a])?;
        let comp = fiber_compare(&c.classes, (a, m), &discrete(x, a, m), |r| {
            let ins = compose(&r.inputs, &invert(&r.perm));
            x.act(a, m, &ins, &r.outputs, r.upper[0].1)
        });
        right.record_comparison(&format!("arity ({a}, {m})"), &comp);
    }
    let mut report = Report::new();
    report.push(left);
    report.push(right);
    Ok(report)
}

/// Compares the classes of arity `at` against `tgt`.
fn fiber_compare(
    src: &QuotientSet<VRaw>,
    at: (usize, usize),
    tgt: &QuotientSet<usize>,
    f: impl Fn(&VRaw) -> usize,
) -> Comparison {
    let raws: Vec<VRaw> = src.raw().iter().filter(|r| r.arity() == at).cloned().collect();
    let mut b = QuotientBuilder::new(raws);
    let mut first = BTreeMap::new();
    let members = b.raw().to_vec();
    for (i, r) in members.iter().enumerate() {
        match first.entry(src.class_of_elem(r)) {
            std::collections::btree_map::Entry::Occupied(o) => b.relate_indices(*o.get(), i),
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(i);
            }
        }
    }
    compare(&b.finish(), tgt, |r| Ok(f(r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stated_counts() {
        assert_eq!(count_connected(&[1], &[1]), 1);
        assert_eq!(count_connected(&[1, 1], &[1, 1]), 0);
        assert_eq!(count_connected(&[2], &[1, 1]), 2);
        assert_eq!(count_connected(&[2, 1], &[1, 2]), 4);
        assert_eq!(connected_perms(&[1], &[1])[0].perm, vec![0]);
    }

    #[test]
    fn degenerate_profiles() {
        assert_eq!(connected_perms(&[], &[]).len(), 1);
        assert_eq!(count_connected(&[0], &[]), 1);
        assert_eq!(count_connected(&[0], &[0]), 0);
        assert_eq!(count_connected(&[2, 0], &[2]), 0);
        assert_eq!(count_connected(&[2], &[3]), 0);
    }

    #[test]
    fn bruteforce_agrees_on_small_profiles() {
        let ps = profiles(4, 3);
        for ms in &ps {
            for ns in &ps {
                assert_eq!(connected_perms(ms, ns), connected_perms_bruteforce(ms, ns), "{ms:?} {ns:?}");
            }
        }
    }

    #[test]
    fn permutations_are_lexicographic() {
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
    }

    #[test]
    fn word_decomposes() {
        for p in permutations(4) {
            let mut q: Vec<usize> = (0..4).collect();
            for t in word(&p) {
                q = compose(&transposition(4, t), &q);
            }
            assert_eq!(q, p);
        }
    }

    #[test]
    fn singleton_compositions() {
        let phi = Collection::new().with_trivial(1, 2, &["b"]);
        let psi = Collection::new().with_trivial(1, 1, &["c"]);
        let c = properad_vcompose(&psi, &phi, &[2], &[1, 1]).unwrap();
        assert_eq!(c.raw_pairs, 2);
        assert_eq!(c.classes.len(), 1);
        let d = properad_vcompose(&psi, &psi, &[1, 1], &[1, 1]).unwrap();
        assert_eq!(d.raw_pairs, 0);
        assert!(d.classes.is_empty());
        let id = identity_bioperation();
        let e = properad_vcompose(&id, &id, &[1], &[1]).unwrap();
        assert_eq!((e.raw_pairs, e.classes.len()), (1, 1));
        assert!(properad_vcompose(&id, &id, &[1], &[2]).is_err());
    }

    #[test]
    fn units_hold() {
        let swap = vec![vec![1, 0]];
        let x = Collection::new()
            .with_trivial(2, 1, &["m"])
            .with_trivial(1, 2, &["d"])
            .with_actions(2, 2, vec!["p".into(), "q".into()], swap.clone(), swap)
            .unwrap();
        let r = unit_laws_check(&x).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn broken_actions_are_rejected() {
        let r = Collection::new().with_actions(2, 1, vec!["a".into(), "b".into()], vec![vec![1, 1]], vec![]);
        assert!(r.is_err());
        let r = Collection::new().with_actions(2, 1, vec!["a".into()], vec![], vec![]);
        assert!(r.is_err());
    }
}
