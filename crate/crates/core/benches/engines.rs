use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use glinf::affineweyl::{chi_bar, weights_of, Convention};
use glinf::characters::char_direct;
use glinf::emodule::action::Module;
use glinf::emodule::checks::{check_relations, Window};
use glinf::emodule::params::ParamSpec;
use glinf::emodule::spaces::FockTensor;
use glinf::partitions::TupleConstraint;
use rayon::ThreadPool;

fn pools() -> Vec<(&'static str, Option<ThreadPool>)> {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    vec![("1-thread", Some(single)), ("default", None)]
}

fn run<R: Send>(pool: &Option<ThreadPool>, f: impl FnOnce() -> R + Send) -> R {
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}

fn engines(c: &mut Criterion) {
    let cons = TupleConstraint::cyclic(vec![1, 0, 2], vec![0, 1, 1]).unwrap();
    let (eta, xi) = weights_of(&cons);
    let (pp, p) = (cons.p_prime().unwrap(), cons.p().unwrap());
    let spec = ParamSpec::generic(&[2, 3, 5, 7, 11], 2).unwrap();

    let mut g = c.benchmark_group("engines");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_with_input(BenchmarkId::new("char_direct", name), &pool, |b, pool| {
            b.iter(|| run(pool, || char_direct(black_box(&cons), 16)))
        });
        g.bench_with_input(BenchmarkId::new("chi_bar", name), &pool, |b, pool| {
            b.iter(|| run(pool, || chi_bar(pp, p, &eta, &xi, 30, Convention::Printed).unwrap()))
        });
        g.bench_with_input(BenchmarkId::new("check_relations", name), &pool, |b, pool| {
            b.iter(|| {
                run(pool, || {
                    // fresh module each time: the action caches would otherwise absorb the work
                    let m = Module::new(FockTensor::tensor(spec.clone()));
                    check_relations(&m, Window::new(4, 2).with_literal(None))
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, engines);
criterion_main!(benches);
