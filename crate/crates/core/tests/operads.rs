use opkit_core::diagrams::Variant;
use opkit_core::operads::{
    analytic_comp_check, compare_with_cokleisli, day_tensor, day_unit, subst_cost, tensor, unit_laws_check,
    ArityPresheaf,
};
use opkit_core::samples::arity_samples;

const BUDGET: u128 = 20_000;

fn pairs(seed: u64, v: Variant, count: usize, k: usize) -> Vec<(ArityPresheaf, ArityPresheaf)> {
    let xs = arity_samples(seed, v, 4 * count, 3, 3, |_| true);
    let mut out = Vec::new();
    for w in xs.chunks(2) {
        if let [y, x] = w {
            if subst_cost(y, x, k) <= BUDGET {
                out.push((y.clone(), x.clone()));
            }
        }
        if out.len() == count {
            break;
        }
    }
    out
}

#[test]
fn substitution_agrees_with_the_cokleisli_composite() {
    for v in Variant::MONAD {
        let t = std::time::Instant::now();
        let ps = pairs(1, v, 6, 4);
        for (y, x) in &ps {
            let w = compare_with_cokleisli(y, x, 4).unwrap();
            assert!(w.is_empty(), "{v}: {w:?}");
        }
        eprintln!("{v}: {} pairs in {:?}", ps.len(), t.elapsed());
    }
}

#[test]
fn unit_laws_per_variant() {
    for v in Variant::MONAD {
        for x in arity_samples(2, v, 6, 3, 3, |_| true) {
            let k = x.truncation();
            let r = unit_laws_check(&x, k).unwrap();
            assert!(r.passed(), "{v}\n{r}");
        }
    }
}

#[test]
fn analytic_composition() {
    for v in [Variant::EMPTY, Variant::SIGMA] {
        for (y, x) in pairs(3, v, 6, 9) {
            for z in 0..=3 {
                let r = analytic_comp_check(&y, &x, z);
                assert!(r.passed(), "{v}\n{r}");
            }
        }
    }
}

#[test]
fn day_unit_is_neutral() {
    for v in Variant::ALL {
        for x in arity_samples(4, v, 4, 3, 2, |_| true) {
            let k = x.truncation();
            let j = day_unit(v, k);
            let xj = day_tensor(&x, &j).unwrap();
            assert_eq!(&xj.sizes()[..=k.min(xj.sizes().len() - 1)], &x.sizes()[..=k.min(xj.sizes().len() - 1)], "{v}");
        }
    }
}

#[test]
fn tensor_is_cocontinuous_in_each_argument() {
    for v in Variant::ALL {
        let xs = arity_samples(5, v, 6, 2, 2, |x| x.truncation() == 2);
        for w in xs.chunks(3) {
            if let [a, b, c] = w {
                let k = 2;
                let lhs = tensor(v, &[&a.sum(b).unwrap(), c], k).unwrap();
                let l = tensor(v, &[a, c], k).unwrap();
                let r = tensor(v, &[b, c], k).unwrap();
                let sum: Vec<usize> = l.sizes().iter().zip(r.sizes()).map(|(x, y)| x + y).collect();
                assert_eq!(lhs.sizes(), &sum[..], "{v}");
            }
        }
    }
}

#[test]
fn substitution_is_associative() {
    use opkit_core::operads::subst_assoc_check;
    for v in Variant::MONAD {
        // without injective shapes the inner products reach arity N², so
        // those variants stay at N = 2
        let injective = v.function_class().functions(2, 1).is_empty();
        let (n, k) = if injective { (3, 4) } else { (2, 3) };
        let xs = arity_samples(6, v, 12, n, 3, |x| x.size(0) == 0);
        let t = std::time::Instant::now();
        let mut checked = 0;
        for w in xs.chunks(3) {
            if let [z, y, x] = w {
                if subst_cost(z, y, n * n) > BUDGET || subst_cost(y, x, n * n) > BUDGET {
                    continue;
                }
                let r = subst_assoc_check(z, y, x, k).unwrap();
                assert!(r.passed(), "{v}\n{r}");
                checked += 1;
            }
        }
        eprintln!("{v}: {checked} triples in {:?}", t.elapsed());
    }
}
