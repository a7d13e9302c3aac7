use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nilseq_core::automaton::{baum_sweet, from_prohibited_patterns, kernel, minimize, powers_acceptor, thue_morse};
use nilseq_core::ip::{contains_fs, power_generators};
use nilseq_core::sparsity::classify;
use nilseq_core::DigitWord;

fn automata(c: &mut Criterion) {
    let tm = thue_morse();
    let bs = baum_sweet();
    let p2 = powers_acceptor(2);
    c.bench_function("kernel/thue-morse", |b| b.iter(|| kernel(black_box(&tm)).unwrap()));
    c.bench_function("minimize/baum-sweet", |b| b.iter(|| minimize(black_box(&bs))));
    c.bench_function("classify/powers-of-two", |b| {
        b.iter(|| classify(black_box(&p2)).unwrap())
    });
    c.bench_function("classify/baum-sweet", |b| b.iter(|| classify(black_box(&bs)).unwrap()));
    let bfree = from_prohibited_patterns(2, &[DigitWord::parse(2, "11").unwrap()]).unwrap();
    let gen = power_generators(4, 1, 12).unwrap();
    c.bench_function("contains_fs/depth-12", |b| {
        b.iter(|| contains_fs(&bfree, black_box(&gen), 12).unwrap())
    });
}

criterion_group!(benches, automata);
criterion_main!(benches);
