//! Sequential against rayon-parallel execution of the exhaustive sweeps.

use std::hint::black_box;
use std::sync::Arc;

use awfslab::algebra::make_lifting_function;
use awfslab::catgph::probe_rlp_against_monos;
use awfslab::gen::{category_corpus, functor_corpus, CorpusBounds};
use awfslab::lifting::{codiagonal, has_rlp, is_trivial_fibration_cat, j_cat, Choice};
use awfslab::ssset::{horns_up_to, to_terminal};
use awfslab::{Exec, SemiSimplicialSet};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn rlp_probe(c: &mut Criterion) {
    let f = codiagonal();
    let mut g = c.benchmark_group("rlp_against_monos");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_with_input(BenchmarkId::new(name, "4x4"), &exec, |b, &e| b.iter(|| black_box(probe_rlp_against_monos(&f, 4, 4, e))));
    }
    g.finish();
}

fn tfib_sweep(c: &mut Criterion) {
    let fs = functor_corpus(&category_corpus(CorpusBounds {
        max_objects: 2,
        max_morphisms: 3,
        max_endo: 1,
    }));
    let gens = j_cat();
    let mut g = c.benchmark_group("tfib_vs_rlp");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_with_input(BenchmarkId::new(name, fs.len()), &exec, |b, &e| {
            b.iter(|| e.map(&fs, |f| is_trivial_fibration_cat(f) == has_rlp(f, &gens, Exec::Sequential).holds))
        });
    }
    g.finish();
}

fn lifting_table(c: &mut Criterion) {
    let x = Arc::new(SemiSimplicialSet::codiscrete(&["a", "b", "c"], 2).unwrap());
    let f = to_terminal(&x);
    let gens = Arc::new(horns_up_to(2, 2).unwrap());
    let mut g = c.benchmark_group("make_lifting_function");
    for (name, exec) in EXECS {
        g.bench_with_input(BenchmarkId::new(name, "codiscrete3"), &exec, |b, &e| {
            b.iter(|| black_box(make_lifting_function(&f, gens.clone(), None, Choice::First, e).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, rlp_probe, tfib_sweep, lifting_table);
criterion_main!(benches);
