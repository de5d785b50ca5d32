//! Compares the rayon data-parallel paths against their sequential
//! equivalents on the two hot loops: theta-function sampling and the
//! per-eigenspace restriction blocks. Run with `cargo bench` (the default
//! `parallel` feature enables the rayon side of each pair).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use num_traits::Zero;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use theta_core::bits::BitVec;
use theta_core::invariants::{eigenspace_basis, k_invariant_cubics, restrict_to_eigenspace};
use theta_core::thetanum::{random_tau, sample_kummer, sample_kummer_seq};

fn bench_theta_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("theta_sampling");
    for (g, n) in [(2usize, 64usize), (3, 48), (4, 16)] {
        let tau = random_tau(g, 7).unwrap();
        group.bench_with_input(
            BenchmarkId::new("parallel", format!("g{g}_n{n}")),
            &n,
            |b, &n| {
                b.iter(|| black_box(sample_kummer(&tau, n, 11).unwrap()));
            },
        );
        group.bench_with_input(
            BenchmarkId::new("sequential", format!("g{g}_n{n}")),
            &n,
            |b, &n| {
                b.iter(|| black_box(sample_kummer_seq(&tau, n, 11).unwrap()));
            },
        );
    }
    group.finish();
}

fn restriction_block_weight(g: usize, eta: BitVec) -> usize {
    let cubics = k_invariant_cubics(g).unwrap();
    let basis = eigenspace_basis(&eta, g).unwrap();
    cubics
        .iter()
        .map(|f| {
            let r = restrict_to_eigenspace(f, &basis).unwrap();
            r.terms().filter(|(_, c)| !c.is_zero()).count()
        })
        .sum()
}

fn restriction_blocks_seq(g: usize) -> usize {
    BitVec::all(g)
        .skip(1)
        .map(|eta| restriction_block_weight(g, eta))
        .sum()
}

#[cfg(feature = "parallel")]
fn restriction_blocks_par(g: usize) -> usize {
    let etas: Vec<BitVec> = BitVec::all(g).skip(1).collect();
    etas.into_par_iter()
        .map(|eta| restriction_block_weight(g, eta))
        .sum()
}

fn bench_restriction_blocks(c: &mut Criterion) {
    let mut group = c.benchmark_group("restriction_blocks");
    for g in [4usize, 5] {
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", g), &g, |b, &g| {
            b.iter(|| black_box(restriction_blocks_par(g)));
        });
        group.bench_with_input(BenchmarkId::new("sequential", g), &g, |b, &g| {
            b.iter(|| black_box(restriction_blocks_seq(g)));
        });
    }
    group.finish();
}

fn bench_exact_backbone(c: &mut Criterion) {
    // single-threaded exact-arithmetic baselines worth tracking over time
    c.bench_function("chern_table_3_to_8", |b| {
        b.iter(|| black_box(theta_core::chow::chern_table(3, 8).unwrap()));
    });
    c.bench_function("quartic_basis_g5", |b| {
        b.iter(|| black_box(theta_core::invariants::quartic_basis(5).unwrap()));
    });
}

criterion_group!(
    benches,
    bench_theta_sampling,
    bench_restriction_blocks,
    bench_exact_backbone
);
criterion_main!(benches);
