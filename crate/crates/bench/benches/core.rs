use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use freeidx::graphs::{circle_graph, enumerate_covers};
use freeidx::index::{d_prim, d_simp, Budget};
use freeidx::randomwalk::{sample_word, WalkConfig};
use freeidx::whitehead::{is_primitive, minimize};
use freeidx::{AGraph, CyclicWord, Edge, Word};

fn bench_index(c: &mut Criterion) {
    let mut group = c.benchmark_group("index");
    for w in ["abAB", "aabbAB", "abaBAbAB", "aabABaBB"] {
        let cw = CyclicWord::parse(w, 2).unwrap();
        group.bench_with_input(BenchmarkId::new("d_prim", w), &cw, |b, cw| {
            b.iter(|| d_prim(black_box(cw), &Budget::unlimited()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("d_simp", w), &cw, |b, cw| {
            b.iter(|| d_simp(black_box(cw), &Budget::unlimited()).unwrap())
        });
    }
    group.finish();
}

fn bench_fold(c: &mut Criterion) {
    // a bouquet of loops at the base, one per sampled word
    let loops: Vec<Word> = (0..16).map(|i| sample_word(&WalkConfig::new(2, 64, i).unwrap()).unwrap().word).collect();
    let mut edges = Vec::new();
    let mut n = 1;
    for w in &loops {
        let len = w.len();
        for (i, x) in w.letters().iter().enumerate() {
            let from = if i == 0 { 0 } else { n + i - 1 };
            let to = if i + 1 == len { 0 } else { n + i };
            let (from, to) = if x.is_inverse() { (to, from) } else { (from, to) };
            edges.push(Edge { from, to, generator: x.generator() });
        }
        n += len - 1;
    }
    let g = AGraph::new(2, n, 0, edges).unwrap();
    c.bench_function("fold/bouquet_16x64", |b| b.iter(|| black_box(&g).fold()));
    let w = CyclicWord::parse("abaBAbABaabbABAB", 2).unwrap();
    c.bench_function("fold/circle_complete", |b| {
        b.iter(|| circle_graph(black_box(&w)).unwrap().complete_to_cover().unwrap())
    });
}

fn bench_whitehead(c: &mut Criterion) {
    let w = sample_word(&WalkConfig::new(3, 200, 9).unwrap()).unwrap().word;
    c.bench_function("whitehead/minimize_rank3_len200", |b| b.iter(|| minimize(black_box(&w)).unwrap()));
    let p = Word::parse("abAbbaBcaBBcAAb", 3).unwrap();
    c.bench_function("whitehead/is_primitive", |b| b.iter(|| is_primitive(black_box(&p)).unwrap()));
}

fn bench_covers(c: &mut Criterion) {
    let mut group = c.benchmark_group("covers");
    for d in [3usize, 4, 5] {
        group.bench_with_input(BenchmarkId::new("sims_rank2", d), &d, |b, &d| {
            b.iter(|| enumerate_covers(2, d).unwrap().len())
        });
    }
    group.finish();
}

fn bench_walk(c: &mut Criterion) {
    let cfg = WalkConfig::new(2, 100_000, 1).unwrap();
    c.bench_function("walk/sample_1e5", |b| b.iter(|| sample_word(black_box(&cfg)).unwrap()));
}

criterion_group!(benches, bench_index, bench_fold, bench_whitehead, bench_covers, bench_walk);
criterion_main!(benches);
