use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rtva::diffcheck::{differential_test, equivalence_test, Words};
use rtva::transforms::dva1_to_counter_machine;
use rtva::{Machine, RunOptions};
use rtva_bench::{entry, exhaustive, unary};

fn deterministic_runs(c: &mut Criterion) {
    let mut g = c.benchmark_group("deterministic");
    let ugauss = entry("ugauss-dva2");
    for n in [100, 1000] {
        let w = unary(n);
        g.bench_with_input(BenchmarkId::new("ugauss-dva2", n), &w, |b, w| {
            b.iter(|| ugauss.machine.accepts(w, &RunOptions::default()).unwrap())
        });
    }
    let fib = entry("ufibonacci");
    let w = unary(1000);
    g.bench_function("ufibonacci/1000", |b| {
        b.iter(|| fib.machine.accepts(&w, &RunOptions::default()).unwrap())
    });
    g.finish();
}

fn nondeterministic_runs(c: &mut Criterion) {
    let mut g = c.benchmark_group("nondeterministic");
    g.sample_size(20);
    let pow = entry("pow-nbva2");
    let w = unary(300);
    g.bench_function("pow-nbva2/prefix-verdicts-300", |b| {
        b.iter(|| pow.machine.prefix_verdicts(&w, &RunOptions::default()).unwrap())
    });
    let subset = entry("subsetsum");
    let words = Words::Sampled {
        max_len: 24,
        count: 200,
        seed: 7,
    };
    let oracle = |w: &[&str]| subset.oracle_accepts(w);
    g.bench_function("subsetsum/200-sampled", |b| {
        b.iter(|| {
            differential_test(
                &subset.machine,
                &oracle,
                subset.alphabet(),
                &words,
                &RunOptions::default(),
            )
            .unwrap()
        })
    });
    g.finish();
}

fn differential(c: &mut Criterion) {
    let mut g = c.benchmark_group("differential");
    g.sample_size(10);
    let mpal = entry("mpal-dbva2");
    let words = exhaustive(&mpal, 8);
    let oracle = |w: &[&str]| mpal.oracle_accepts(w);
    g.bench_function("mpal-dbva2/len-8", |b| {
        b.iter(|| {
            differential_test(
                &mpal.machine,
                &oracle,
                mpal.alphabet(),
                &words,
                &RunOptions::default(),
            )
            .unwrap()
        })
    });
    let dva = entry("geqstar-dva2");
    let fam = entry("geqstar-fam");
    let words = exhaustive(&dva, 12);
    g.bench_function("geqstar-dva2-vs-fam/len-12", |b| {
        b.iter(|| {
            equivalence_test(
                &dva.machine,
                &fam.machine,
                dva.alphabet(),
                &words,
                &RunOptions::default(),
            )
            .unwrap()
        })
    });
    let lng = entry("lng-1");
    let (ctr, _) = dva1_to_counter_machine(lng.machine.as_vector().unwrap()).unwrap();
    let ctr = Machine::Counter(ctr);
    let words = exhaustive(&lng, 7);
    g.bench_function("lng-1-vs-counters/len-7", |b| {
        b.iter(|| {
            equivalence_test(&lng.machine, &ctr, lng.alphabet(), &words, &RunOptions::default()).unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, deterministic_runs, nondeterministic_runs, differential);
criterion_main!(benches);
