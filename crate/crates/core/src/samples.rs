//! Seeded random finite data for property runs and the fixed suites.
//! Presheaves and profunctors are generated as quotients of free ones by
//! random congruences, so every finitely presented value can occur.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagrams::Variant;
use crate::fincat::{FinCategory, Morphism, SetFunctor, UnionFind, Variance};
use crate::operads::{class_count, ArityPresheaf, Support};
use crate::prof::{FiniteProfunctor, KleisliSample};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Objects `A`, `B` with an idempotent `e: A → A` and `f: A → B`,
/// `f∘e = f`.
pub fn idempotent_arrow() -> FinCategory {
    let objects = vec!["A".to_string(), "B".to_string()];
    let morphisms = vec![
        Morphism { name: "idA".into(), src: 0, tgt: 0 },
        Morphism { name: "idB".into(), src: 1, tgt: 1 },
        Morphism { name: "e".into(), src: 0, tgt: 0 },
        Morphism { name: "f".into(), src: 0, tgt: 1 },
    ];
    FinCategory::from_fn(objects, morphisms, vec![0, 1], |g, f| match (g, f) {
        (0 | 1, f) => f,
        (g, 0 | 1) => g,
        (2, 2) => 2,
        (3, 2) => 3,
        _ => unreachable!(),
    })
    .and_then(|c| c.validated())
    .expect("idempotent arrow")
}

/// The fixed family of base categories with at most two objects and at
/// most four morphisms.
pub fn small_categories() -> Vec<(&'static str, Arc<FinCategory>)> {
    let z2 = FinCategory::monoid(&["e", "t"], |a, b| a ^ b).expect("Z/2");
    let idem = FinCategory::monoid(&["e", "p"], |a, b| a.max(b)).expect("idempotent monoid");
    vec![
        ("terminal", FinCategory::terminal()),
        ("discrete2", FinCategory::discrete(2)),
        ("arrow", FinCategory::arrow()),
        ("parallel", FinCategory::parallel_pair()),
        ("iso", FinCategory::iso_pair()),
        ("z2", z2),
        ("idempotent", idem),
        ("idempotent-arrow", idempotent_arrow()),
    ]
    .into_iter()
    .map(|(n, c)| (n, Arc::new(c)))
    .collect()
}

/// Elements spread over fibers, with partial maps given on global indices.
struct Presentation {
    fiber_of: Vec<usize>,
    ops: Vec<Vec<Option<usize>>>,
}

impl Presentation {
    /// Smallest congruence containing `uf`: merged elements have merged
    /// images under every operation.
    fn close(&self, uf: &mut UnionFind) {
        loop {
            let mut changed = false;
            for op in &self.ops {
                for x in 0..op.len() {
                    let (Some(y), r) = (op[x], uf.find(x)) else { continue };
                    if let Some(yr) = op[r] {
                        changed |= uf.union(y, yr);
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// Random relations inside fibers, then closure; keeps adding
    /// relations while some fiber has more than `max` classes.
    fn random_quotient(&self, rng: &mut SampleRng, fibers: usize, relations: usize, max: usize) -> Vec<usize> {
        let n = self.fiber_of.len();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); fibers];
        for (x, &f) in self.fiber_of.iter().enumerate() {
            members[f].push(x);
        }
        let mut uf = UnionFind::new(n);
        for _ in 0..relations {
            let f = rng.gen_range(0..fibers);
            if members[f].len() >= 2 {
                let a = *members[f].choose(rng).expect("nonempty");
                let b = *members[f].choose(rng).expect("nonempty");
                uf.union(a, b);
            }
        }
        self.close(&mut uf);
        loop {
            let over = (0..fibers).find(|&f| {
                let mut roots: Vec<usize> = members[f].iter().map(|&x| uf.find(x)).collect();
                roots.sort_unstable();
                roots.dedup();
                roots.len() > max
            });
            let Some(f) = over else { break };
            let a = *members[f].choose(rng).expect("nonempty");
            let b = *members[f].choose(rng).expect("nonempty");
            uf.union(a, b);
            self.close(&mut uf);
        }
        // local index of each element's class within its fiber
        let mut local = vec![usize::MAX; n];
        let mut counts = vec![0usize; fibers];
        for x in 0..n {
            let r = uf.find(x);
            if local[r] == usize::MAX {
                local[r] = counts[self.fiber_of[x]];
                counts[self.fiber_of[x]] += 1;
            }
            local[x] = local[r];
        }
        local
    }
}

/// A random presheaf on `c` with at most `max` elements per object:
/// up to two free generators modulo a random congruence.
pub fn random_presheaf(rng: &mut SampleRng, c: &Arc<FinCategory>, max: usize) -> SetFunctor {
    let gens: Vec<usize> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..c.object_count())).collect();
    // element (k, b, i): the i-th morphism b → gens[k]
    let mut elems = Vec::new();
    for (k, &g) in gens.iter().enumerate() {
        for b in c.objects() {
            for i in 0..c.hom(b, g).len() {
                elems.push((k, b, i));
            }
        }
    }
    let index = |k: usize, b: usize, i: usize| elems.iter().position(|&e| e == (k, b, i)).expect("element");
    let ops = (0..c.morphism_count())
        .map(|m| {
            elems
                .iter()
                .map(|&(k, b, i)| {
                    (b == c.tgt(m)).then(|| {
                        let u = c.compose(c.hom(b, gens[k])[i], m).expect("composable");
                        index(k, c.src(m), c.hom_index(u))
                    })
                })
                .collect()
        })
        .collect();
    let pres = Presentation { fiber_of: elems.iter().map(|e| e.1).collect(), ops };
    let relations = rng.gen_range(0..3);
    let local = pres.random_quotient(rng, c.object_count(), relations, max);
    let mut sizes = vec![0; c.object_count()];
    for (x, e) in elems.iter().enumerate() {
        sizes[e.1] = sizes[e.1].max(local[x] + 1);
    }
    let mut maps: Vec<Vec<usize>> = (0..c.morphism_count()).map(|m| vec![0; sizes[c.tgt(m)]]).collect();
    for m in 0..c.morphism_count() {
        for (x, y) in pres.ops[m].iter().enumerate() {
            if let Some(y) = y {
                maps[m][local[x]] = local[*y];
            }
        }
    }
    SetFunctor::new(Arc::clone(c), Variance::Contravariant, sizes, maps).expect("quotient of a free presheaf")
}

/// A random profunctor `c ⇸ d` with at most `max` elements per pair of
/// objects: up to two free generators `C[c_k, -] × D[-, d_k]` modulo a
/// random congruence.
pub fn random_profunctor(
    rng: &mut SampleRng,
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    max: usize,
) -> FiniteProfunctor {
    let gens: Vec<(usize, usize)> = (0..rng.gen_range(0..=2))
        .map(|_| (rng.gen_range(0..c.object_count()), rng.gen_range(0..d.object_count())))
        .collect();
    // element (k, a, b, i, j): i-th morphism c_k → a, j-th morphism b → d_k
    let mut elems = Vec::new();
    for (k, &(ck, dk)) in gens.iter().enumerate() {
        for a in c.objects() {
            for b in d.objects() {
                for i in 0..c.hom(ck, a).len() {
                    for j in 0..d.hom(b, dk).len() {
                        elems.push((k, a, b, i, j));
                    }
                }
            }
        }
    }
    let index = |e: (usize, usize, usize, usize, usize)| elems.iter().position(|&x| x == e).expect("element");
    let n2 = d.object_count();
    let mut ops: Vec<Vec<Option<usize>>> = Vec::new();
    for u in 0..c.morphism_count() {
        ops.push(
            elems
                .iter()
                .map(|&(k, a, b, i, j)| {
                    (a == c.src(u)).then(|| {
                        let w = c.compose(u, c.hom(gens[k].0, a)[i]).expect("composable");
                        index((k, c.tgt(u), b, c.hom_index(w), j))
                    })
                })
                .collect(),
        );
    }
    for v in 0..d.morphism_count() {
        ops.push(
            elems
                .iter()
                .map(|&(k, a, b, i, j)| {
                    (b == d.tgt(v)).then(|| {
                        let w = d.compose(d.hom(b, gens[k].1)[j], v).expect("composable");
                        index((k, a, d.src(v), i, d.hom_index(w)))
                    })
                })
                .collect(),
        );
    }
    let pres = Presentation { fiber_of: elems.iter().map(|e| e.1 * n2 + e.2).collect(), ops };
    let relations = rng.gen_range(0..3);
    let local = pres.random_quotient(rng, c.object_count() * n2, relations, max);
    let mut sizes = vec![0; c.object_count() * n2];
    for (x, e) in elems.iter().enumerate() {
        let s = e.1 * n2 + e.2;
        sizes[s] = sizes[s].max(local[x] + 1);
    }
    let mut left: Vec<Vec<Vec<usize>>> =
        (0..c.morphism_count()).map(|u| (0..n2).map(|b| vec![0; sizes[c.src(u) * n2 + b]]).collect()).collect();
    let mut right: Vec<Vec<Vec<usize>>> =
        (0..d.morphism_count()).map(|v| c.objects().map(|a| vec![0; sizes[a * n2 + d.tgt(v)]]).collect()).collect();
    for (x, &(_, _, b, _, _)) in elems.iter().enumerate() {
        for u in 0..c.morphism_count() {
            if let Some(y) = pres.ops[u][x] {
                left[u][b][local[x]] = local[y];
            }
        }
    }
    for (x, &(_, a, _, _, _)) in elems.iter().enumerate() {
        for v in 0..d.morphism_count() {
            if let Some(y) = pres.ops[c.morphism_count() + v][x] {
                right[v][a][local[x]] = local[y];
            }
        }
    }
    FiniteProfunctor { src: Arc::clone(c), tgt: Arc::clone(d), sizes, left, right }
        .checked()
        .expect("quotient of a free profunctor")
}

/// The seeded Kleisli family: for each pair of small categories, a chain
/// `F: A ⇸ B`, `G: B ⇸ C` and a presheaf on `A`, values at most 2.
pub fn kleisli_samples(seed: u64, count: usize) -> Vec<KleisliSample> {
    let mut rng = rng(seed);
    let cats = small_categories();
    (0..count)
        .map(|_| {
            let a = &cats.choose(&mut rng).expect("categories").1;
            let b = &cats.choose(&mut rng).expect("categories").1;
            let c = &cats.choose(&mut rng).expect("categories").1;
            KleisliSample {
                f: random_profunctor(&mut rng, a, b, 2),
                g: random_profunctor(&mut rng, b, c, 2),
                x: random_presheaf(&mut rng, a, 2),
            }
        })
        .collect()
}

/// A random arity presheaf on arities `0..=n` with at most `max` elements
/// per arity: up to two free generators `?1[k, -]` modulo a random
/// congruence. Finitely supported when the class never raises arity,
/// truncated at `n` otherwise.
pub fn random_arity_presheaf(rng: &mut SampleRng, variant: Variant, n: usize, max: usize) -> ArityPresheaf {
    let class = variant.function_class();
    let gens: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..=n)).collect();
    let shapes: Vec<Vec<Vec<_>>> = (0..=n).map(|k| (0..=n).map(|p| class.functions(k, p)).collect()).collect();
    // element (g, p, i): the i-th shape gens[g] → p
    let mut elems = Vec::new();
    for (g, &k) in gens.iter().enumerate() {
        for p in 0..=n {
            for i in 0..shapes[k][p].len() {
                elems.push((g, p, i));
            }
        }
    }
    let index = |g: usize, p: usize, f: &crate::diagrams::FiniteFunction| {
        let i = shapes[gens[g]][p].iter().position(|h| h == f).expect("class is closed under composition");
        elems.iter().position(|&e| e == (g, p, i)).expect("element")
    };
    let mut moves = Vec::new();
    for row in &shapes {
        for fs in row {
            moves.extend(fs.iter().filter(|u| !u.is_identity()).cloned());
        }
    }
    let ops = moves
        .iter()
        .map(|u| {
            elems
                .iter()
                .map(|&(g, p, i)| {
                    (p == u.dom).then(|| index(g, u.cod, &u.after(&shapes[gens[g]][p][i]).expect("composable")))
                })
                .collect()
        })
        .collect();
    let pres = Presentation { fiber_of: elems.iter().map(|e| e.1).collect(), ops };
    let relations = rng.gen_range(0..3);
    let local = pres.random_quotient(rng, n + 1, relations, max);
    let mut sizes = vec![0; n + 1];
    for (x, e) in elems.iter().enumerate() {
        sizes[e.1] = sizes[e.1].max(local[x] + 1);
    }
    let mut tables: Vec<Vec<usize>> = moves.iter().map(|u| vec![0; sizes[u.dom]]).collect();
    for (m, table) in tables.iter_mut().enumerate() {
        for (x, y) in pres.ops[m].iter().enumerate() {
            if let Some(y) = y {
                table[local[x]] = local[*y];
            }
        }
    }
    let support = if (0..=n).all(|k| class_count(class, k, k + 1) == 0) { Support::Finite } else { Support::Truncated };
    let generators = moves.into_iter().zip(tables).collect();
    ArityPresheaf::from_generators(variant, n, support, sizes, generators).expect("quotient of a free presheaf")
}

/// Seeded arity presheaves on arities up to at most `n`, values at most
/// `max`, keeping only draws that `accept` admits.
pub fn arity_samples(
    seed: u64,
    variant: Variant,
    count: usize,
    n: usize,
    max: usize,
    accept: impl Fn(&ArityPresheaf) -> bool,
) -> Vec<ArityPresheaf> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count && tries < 200 * count.max(1) {
        tries += 1;
        let top = rng.gen_range(1..=n);
        let x = random_arity_presheaf(&mut rng, variant, top, max);
        if accept(&x) {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_categories_validate() {
        for (name, c) in small_categories() {
            assert!(crate::fincat::validate_category(&c).is_empty(), "{name}");
            assert!(c.object_count() <= 2 && c.morphism_count() <= 4, "{name}");
        }
    }

    #[test]
    fn random_data_is_functorial_and_bounded() {
        let mut r = rng(7);
        for (_, c) in small_categories() {
            for (_, d) in small_categories() {
                for _ in 0..3 {
                    let x = random_presheaf(&mut r, &c, 2);
                    assert!(x.validate().is_empty());
                    assert!(x.sizes.iter().all(|&s| s <= 2));
                    let p = random_profunctor(&mut r, &c, &d, 2);
                    assert!(p.validate().is_empty());
                    assert!(p.sizes.iter().all(|&s| s <= 2));
                }
            }
        }
    }

    #[test]
    fn random_arity_presheaves_validate() {
        let mut r = rng(11);
        for v in Variant::ALL {
            for _ in 0..5 {
                let x = random_arity_presheaf(&mut r, v, 3, 3);
                assert!(x.validate().is_empty(), "{v}");
                assert!(x.sizes().iter().all(|&s| s <= 3));
            }
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = kleisli_samples(3, 4);
        let b = kleisli_samples(3, 4);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.f.sizes, y.f.sizes);
            assert_eq!(x.g.right, y.g.right);
            assert_eq!(x.x.maps, y.x.maps);
        }
    }
}
