use anet_core::instructions::{all_instructions, decompose_into_assignments, decompose_singular, Instruction};
use anet_core::semigroup::{close, close_incremental, greedy_cover, CoverConfig, GeneratorSet, UpdateMode};
use anet_core::universal::{compile_factor, CkdGenerators, CkdSymbol};
use anet_core::{Network, Params};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn closures(c: &mut Criterion) {
    // c, k and d generate all 6^6 maps of a single six-state node.
    let p = Params::new(1, 6).unwrap();
    let ckd = CkdGenerators::new(p, 1).unwrap();
    let base = [CkdSymbol::C, CkdSymbol::K, CkdSymbol::D].map(|s| ckd.network(s).clone()).to_vec();
    let gens = GeneratorSet::new(p, UpdateMode::Synchronous, base).unwrap();
    c.bench_function("closure_full_1_6", |b| b.iter(|| close(black_box(&gens), 1 << 20).unwrap().len()));

    let p = Params::new(2, 2).unwrap();
    let singular = all_instructions(p, true).unwrap();
    c.bench_function("incremental_singular_2_2", |b| {
        b.iter(|| {
            close_incremental(p, singular.iter().map(|i| i.network().clone()), 1 << 20)
                .unwrap()
                .len()
        })
    });
}

fn cover(c: &mut Criterion) {
    let p = Params::new(2, 2).unwrap();
    c.bench_function("greedy_cover_2_2", |b| {
        b.iter(|| greedy_cover(black_box(p), &CoverConfig::default()).unwrap().covered)
    });
}

fn decompositions(c: &mut Criterion) {
    let p = Params::new(3, 3).unwrap();
    // x1 <- 0 whenever x1 = 2.
    let ins = Instruction::new(
        0,
        Network::from_index_fn(p, |x| if x % 3 == 2 { x - 2 } else { x }).unwrap(),
    )
    .unwrap();
    c.bench_function("assignments_3_3", |b| b.iter(|| decompose_into_assignments(black_box(&ins)).unwrap().len()));

    // Reverse the order, with 0 and 1 merged.
    let low = Network::from_index_fn(p, |x| if x == 1 { 26 } else { 26 - x }).unwrap();
    c.bench_function("singular_3_3", |b| b.iter(|| decompose_singular(black_box(&low)).unwrap().len()));

    let p = Params::new(3, 2).unwrap();
    let h = CkdGenerators::factor(p).unwrap().replay(&[CkdSymbol::C, CkdSymbol::D, CkdSymbol::K, CkdSymbol::C]);
    c.bench_function("compile_factor_3_2", |b| b.iter(|| compile_factor(black_box(&h)).unwrap().len()));
}

criterion_group!(benches, closures, cover, decompositions);
criterion_main!(benches);
