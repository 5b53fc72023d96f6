//! One line per acceptance criterion. Exits non-zero when any fails.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use opkit_core::diagrams::{self, Diagram, FiniteFunction, Variant};
use opkit_core::distlaw::{distlaw_suite, Explicit, SuiteSize};
use opkit_core::fincat::{coend, compare, BiFunctor, QuotientSet, SetFunctor};
use opkit_core::operads::json::arity_from_str;
use opkit_core::operads::{
    analytic_comp_check, compare_with_cokleisli, end_clone, monoid_check, subst, subst_cost, unit_laws_check,
    ArityPresheaf, SubstRaw,
};
use opkit_core::prof::{kleisli_laws_check, prof_laws_check};
use opkit_core::properads::{connected_perms, connected_perms_bruteforce, count_connected, profiles};
use opkit_core::samples::{arity_samples, kleisli_samples, random_presheaf, random_profunctor, rng, small_categories};
use opkit_core::sweep;

type Outcome = Result<String, String>;

const BUDGET: u128 = 20_000;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn figure() -> Outcome {
    let text = std::fs::read_to_string(data("figure.sd")).map_err(|e| e.to_string())?;
    let d = diagrams::parse(&text).map_err(|e| e.to_string())?;
    let f = diagrams::to_function(&d).map_err(|e| e.to_string())?;
    ensure(f.table == [1, 1, 0], || format!("got {f}"))?;
    Ok(f.to_string())
}

/// Membership in the six classes of the table, decided from the value table.
fn in_class(v: Variant, f: &FiniteFunction) -> bool {
    let t = &f.table;
    let injective = t.iter().collect::<BTreeSet<_>>().len() == t.len();
    let surjective = t.iter().collect::<BTreeSet<_>>().len() == f.cod;
    match (v.sigma, v.delta, v.epsilon) {
        (false, false, false) => f.dom == f.cod && t.iter().enumerate().all(|(i, &x)| i == x),
        (true, false, false) => injective && surjective,
        (true, true, true) => true,
        (false, true, true) => t.windows(2).all(|w| w[0] <= w[1]),
        (true, true, false) => surjective,
        (true, false, true) => injective,
        _ => unreachable!("not in the table"),
    }
}

fn all_functions(m: usize, n: usize) -> Vec<FiniteFunction> {
    let mut out = Vec::new();
    let total = n.pow(m as u32);
    for mut code in 0..total {
        let mut t = Vec::with_capacity(m);
        for _ in 0..m {
            t.push(code % n);
            code /= n;
        }
        out.push(FiniteFunction { dom: m, cod: n, table: t });
    }
    if m == 0 {
        out = vec![FiniteFunction { dom: 0, cod: n, table: vec![] }];
    }
    out
}

/// Functions denoted by diagrams built layer by layer from `id[n]`, with
/// every intermediate width at most `width`.
fn diagram_image(v: Variant, n: usize, width: usize) -> Result<BTreeSet<FiniteFunction>, String> {
    let mut gens: Vec<(Diagram, usize, usize)> = Vec::new();
    if v.sigma {
        gens.push((Diagram::Sigma, 2, 2));
    }
    if v.delta {
        gens.push((Diagram::Delta, 1, 2));
    }
    if v.epsilon {
        gens.push((Diagram::Epsilon, 1, 0));
    }
    let start = Diagram::Id(n);
    let mut seen: BTreeMap<FiniteFunction, Diagram> = BTreeMap::new();
    let f0 = diagrams::to_function(&start).map_err(|e| e.to_string())?;
    seen.insert(f0.clone(), start);
    let mut queue = VecDeque::from([f0]);
    while let Some(f) = queue.pop_front() {
        let d = seen[&f].clone();
        let w = f.dom;
        for (g, i, o) in &gens {
            if w < *i || w - i + o > width {
                continue;
            }
            for a in 0..=w - i {
                let layer = Diagram::horiz_all([Diagram::Id(a), g.clone(), Diagram::Id(w - i - a)]);
                let next = Diagram::vert(d.clone(), layer);
                diagrams::typecheck(&next, v).map_err(|e| format!("{next}: {e}"))?;
                let h = diagrams::to_function(&next).map_err(|e| e.to_string())?;
                if !seen.contains_key(&h) {
                    seen.insert(h.clone(), next);
                    queue.push_back(h);
                }
            }
        }
    }
    Ok(seen.into_keys().collect())
}

fn classification() -> Outcome {
    let mut at_three = Vec::new();
    for v in Variant::TABLE {
        for n in 0..=4 {
            let image = diagram_image(v, n, 4)?;
            for m in 0..=4 {
                let got: BTreeSet<FiniteFunction> = image.iter().filter(|f| f.dom == m).cloned().collect();
                let want: BTreeSet<FiniteFunction> =
                    all_functions(m, n).into_iter().filter(|f| in_class(v, f)).collect();
                ensure(got == want, || {
                    format!("{v} at {m},{n}: {} diagrams' functions, {} in the class", got.len(), want.len())
                })?;
                if m == 3 && n == 3 {
                    at_three.push(got.len());
                }
            }
        }
    }
    ensure(at_three == [1, 6, 27, 10, 6, 6], || format!("counts at 3,3: {at_three:?}"))?;
    Ok(format!("counts at 3,3 {at_three:?}"))
}

/// Orbits of the 24 bijections of 4 under exchange of the two binary
/// blocks and, when symmetric, swaps inside each block.
fn binary_square_oracle(symmetric: bool) -> usize {
    if !symmetric {
        return 1;
    }
    let perms = opkit_core::properads::permutations(4);
    let moves: Vec<[usize; 4]> = vec![[1, 0, 2, 3], [0, 1, 3, 2], [2, 3, 0, 1]];
    let mut seen = BTreeSet::new();
    let mut orbits = 0;
    for p in &perms {
        if seen.contains(p) {
            continue;
        }
        orbits += 1;
        let mut stack = vec![p.clone()];
        seen.insert(p.clone());
        while let Some(q) = stack.pop() {
            for mv in &moves {
                let r: Vec<usize> = mv.iter().map(|&i| q[i]).collect();
                if seen.insert(r.clone()) {
                    stack.push(r);
                }
            }
        }
    }
    orbits
}

fn substitution_counts() -> Outcome {
    let mut got = Vec::new();
    for (v, file) in [("empty", "binary.json"), ("sigma", "binary_sym.json")] {
        let text = std::fs::read_to_string(data(file)).map_err(|e| e.to_string())?;
        let x = arity_from_str(&text).map_err(|e| e.to_string())?;
        let q = subst(&x, &x, 4).map_err(|e| e.to_string())?;
        let oracle = binary_square_oracle(v == "sigma");
        ensure(q.sizes()[4] == oracle, || format!("{v}: {} classes, oracle {oracle}", q.sizes()[4]))?;
        got.push(q.sizes()[4]);
    }
    ensure(got == [1, 3], || format!("{got:?}"))?;
    Ok(format!("|(X•X)4| = {} for ∅, {} for σ", got[0], got[1]))
}

fn pairs(seed: u64, v: Variant, count: usize, k: usize) -> Vec<(ArityPresheaf, ArityPresheaf)> {
    let xs = arity_samples(seed, v, 10 * count, 3, 3, |_| true);
    xs.chunks(2)
        .filter_map(|w| match w {
            [y, x] if subst_cost(y, x, k) <= BUDGET => Some((y.clone(), x.clone())),
            _ => None,
        })
        .take(count)
        .collect()
}

fn cokleisli_agreement() -> Outcome {
    let mut total = 0;
    for v in Variant::MONAD {
        let ps = pairs(11, v, 20, 4);
        ensure(ps.len() == 20, || format!("{v}: only {} samples within budget", ps.len()))?;
        for (y, x) in &ps {
            let w = compare_with_cokleisli(y, x, 4).map_err(|e| format!("{v}: {e}"))?;
            ensure(w.is_empty(), || format!("{v}: {}", w.join("; ")))?;
            total += 1;
        }
    }
    Ok(format!("{total} pairs, no mismatches"))
}

fn analytic() -> Outcome {
    let mut total = 0;
    for v in [Variant::EMPTY, Variant::SIGMA] {
        let ps = pairs(12, v, 20, 9);
        ensure(ps.len() == 20, || format!("{v}: only {} samples within budget", ps.len()))?;
        let cases: Vec<_> = ps.iter().flat_map(|p| (0..=3).map(move |z| (p, z))).collect();
        for ((_, z), r) in cases.iter().zip(sweep::map(&cases, |&((y, x), z)| analytic_comp_check(y, x, z))) {
            ensure(r.passed(), || format!("{v} |z|={z}: {}", r.witnesses().join("; ")))?;
            total += 1;
        }
    }
    Ok(format!("{total} comparisons"))
}

fn clone_laws() -> Outcome {
    let e = end_clone(2, 2).map_err(|e| e.to_string())?;
    let r = monoid_check(&e, 2).map_err(|e| e.to_string())?;
    ensure(r.passed(), || r.to_string())?;
    let mu = e.multiplication(2).map_err(|e| e.to_string())?;
    let x = &e.carrier;
    let table = |g: usize| -> Vec<usize> { x.label(1, g).chars().map(|c| c.to_digit(10).unwrap() as usize).collect() };
    let mut entries = 0;
    for f in 0..x.size(1) {
        for g in 0..x.size(1) {
            let r = SubstRaw { m: 1, y: f, args: vec![(1, g)], shape: FiniteFunction::identity(1) };
            let got = mu.apply(x, &r).map(&table);
            let (ft, gt) = (table(f), table(g));
            let want: Vec<usize> = (0..2).map(|v| ft[gt[v]]).collect();
            ensure(got.as_ref() == Some(&want), || {
                format!("{}∘{} gave {got:?}, expected {want:?}", x.label(1, f), x.label(1, g))
            })?;
            entries += 1;
        }
    }
    ensure(entries == 16, || format!("{entries} unary entries"))?;
    Ok("monoid laws and the 4×4 unary table".into())
}

fn distributive_law() -> Outcome {
    let mut instances = 0;
    for v in Variant::MONAD {
        let r = distlaw_suite(&Explicit, v, 0, SuiteSize::default()).map_err(|e| e.to_string())?;
        ensure(r.checks.len() == 4, || format!("{v}: {} equations", r.checks.len()))?;
        ensure(r.passed(), || format!("{v}: {}", r.witnesses().join("; ")))?;
        ensure(r.checks.iter().any(|c| c.law.contains("η_Psh") && c.instances > 0), || {
            format!("{v}: no (λ-η_Psh) instances")
        })?;
        instances += r.checks.iter().map(|c| c.instances).sum::<usize>();
    }
    Ok(format!("{instances} instances over {} variants", Variant::MONAD.len()))
}

fn kleisli() -> Outcome {
    let mut instances = 0;
    for s in kleisli_samples(0, 12) {
        let r = kleisli_laws_check(&s);
        ensure(r.passed(), || r.witnesses().join("; "))?;
        instances += r.checks.iter().map(|c| c.instances).sum::<usize>();
    }
    Ok(format!("{instances} instances"))
}

fn properad_lambda() -> Outcome {
    let stated =
        [(vec![1], vec![1], 1), (vec![1, 1], vec![1, 1], 0), (vec![2], vec![1, 1], 2), (vec![2, 1], vec![1, 2], 4)];
    for (ms, ns, want) in &stated {
        let got = count_connected(ms, ns);
        ensure(got == *want, || format!("{ms:?} {ns:?}: {got}, expected {want}"))?;
        ensure(connected_perms_bruteforce(ms, ns).len() == *want, || format!("oracle disagrees on {ms:?} {ns:?}"))?;
    }
    let ps = profiles(5, 5);
    let mut pairs = 0;
    for ms in &ps {
        for ns in &ps {
            let (a, b) = (connected_perms(ms, ns), connected_perms_bruteforce(ms, ns));
            ensure(a == b, || format!("{ms:?} {ns:?}: {} enumerated, {} by the oracle", a.len(), b.len()))?;
            pairs += 1;
        }
    }
    Ok(format!("stated counts and {pairs} profile pairs"))
}

fn co_yoneda_and_units() -> Outcome {
    let mut r = rng(0);
    let mut instances = 0;
    for (name, c) in small_categories() {
        for _ in 0..3 {
            let x = random_presheaf(&mut r, &c, 2);
            for a in c.objects() {
                let y = SetFunctor::representable(Arc::clone(&c), a);
                let h = BiFunctor::product(&x, &y).map_err(|e| e.to_string())?;
                let q = coend(&h).map_err(|e| e.to_string())?;
                let target = QuotientSet::discrete((0..x.sizes[a]).collect());
                let cmp = compare(&q, &target, |&(o, e)| {
                    let ya = y.sizes[o];
                    let f = c.hom(a, o)[e % ya];
                    Ok(x.maps[f][e / ya])
                });
                ensure(cmp.is_bijection(), || format!("{name}: {}", cmp.failures.join("; ")))?;
                instances += 1;
            }
            let d = &small_categories()[instances % 3].1;
            let phi = random_profunctor(&mut r, &c, d, 2);
            let rep = prof_laws_check(&phi, &phi.dual(), &phi);
            for law in ["Id∘Φ ≅ Φ", "Φ∘Id ≅ Φ"] {
                let check = rep.get(law).ok_or_else(|| format!("no check {law}"))?;
                ensure(check.passed(), || format!("{name}: {law}: {}", check.witnesses.join("; ")))?;
            }
            instances += 2;
        }
    }
    for v in Variant::MONAD {
        for x in arity_samples(13, v, 20, 3, 3, |x| subst_cost(x, x, x.truncation()) <= BUDGET) {
            let rep = unit_laws_check(&x, x.truncation()).map_err(|e| format!("{v}: {e}"))?;
            ensure(rep.passed(), || format!("{v}: {}", rep.witnesses().join("; ")))?;
            instances += 1;
        }
    }
    Ok(format!("{instances} instances"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("figure semantics", Duration::from_secs(1), figure),
        ("classification of diagram semantics", Duration::from_secs(30), classification),
        ("substitution counts", Duration::from_secs(5), substitution_counts),
        ("substitution agrees with the co-Kleisli composite", Duration::from_secs(120), cokleisli_agreement),
        ("analytic composition", Duration::from_secs(120), analytic),
        ("clone laws", Duration::from_secs(30), clone_laws),
        ("distributive law equations", Duration::from_secs(180), distributive_law),
        ("Kleisli-structure equations", Duration::from_secs(60), kleisli),
        ("connected permutations", Duration::from_secs(60), properad_lambda),
        ("co-Yoneda and unit laws", Duration::from_secs(60), co_yoneda_and_units),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = t.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > *limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
