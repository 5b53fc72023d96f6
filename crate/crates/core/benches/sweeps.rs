use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use opkit_core::diagrams::Variant;
use opkit_core::operads::{compare_with_cokleisli, subst_cost, ArityPresheaf};
use opkit_core::samples::arity_samples;
use opkit_core::sweep;

fn pairs(v: Variant) -> Vec<(ArityPresheaf, ArityPresheaf)> {
    let xs = arity_samples(7, v, 64, 3, 3, |_| true);
    xs.chunks(2)
        .filter_map(|w| match w {
            [y, x] if subst_cost(y, x, 3) <= 5_000 => Some((y.clone(), x.clone())),
            _ => None,
        })
        .take(16)
        .collect()
}

fn cokleisli_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("cokleisli agreement");
    group.sample_size(10);
    for v in [Variant::EMPTY, Variant::SIGMA] {
        let ps = pairs(v);
        let run = |p: &(ArityPresheaf, ArityPresheaf)| compare_with_cokleisli(&p.0, &p.1, 3).map(|w| w.len());
        group.bench_with_input(BenchmarkId::new("sequential", v), &ps, |b, ps| {
            b.iter(|| sweep::map_sequential(ps, run))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", v), &ps, |b, ps| b.iter(|| sweep::map_parallel(ps, run)));
    }
    group.finish();
}

criterion_group!(benches, cokleisli_sweep);
criterion_main!(benches);
