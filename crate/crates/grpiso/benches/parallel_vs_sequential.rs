//! The same workloads under one worker and under the full pool. Build with
//! `--no-default-features` to time the purely sequential fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use grpiso::code::{code_equivalence, LinearCode};
use grpiso::coprime::iso_hae;
use grpiso::exec::with_workers;
use grpiso::group::{build_group, parse_descriptor, relabel_table, CayleyTable};
use grpiso::perm::Perm;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn table(d: &str) -> CayleyTable {
    build_group(&parse_descriptor(d).unwrap()).unwrap()
}

fn random_code(rng: &mut ChaCha8Rng, p: u64, d: usize, m: usize) -> LinearCode {
    let rows: Vec<Vec<u64>> = (0..d).map(|_| (0..m).map(|_| rng.gen_range(0..p)).collect()).collect();
    LinearCode::from_rows(p, &rows).unwrap()
}

fn worker_counts() -> Vec<usize> {
    let all = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    if all > 1 { vec![1, all] } else { vec![1, 2] }
}

fn bench_codes(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let c1 = random_code(&mut rng, 2, 3, 12);
    let mut images: Vec<usize> = (0..12).collect();
    images.rotate_left(5);
    let c2 = c1.permuted(&Perm::from_images(images).unwrap());
    let mut group = c.benchmark_group("code_equivalence_m12");
    for w in worker_counts() {
        group.bench_with_input(BenchmarkId::from_parameter(w), &w, |b, &w| {
            b.iter(|| with_workers(w, || code_equivalence(&c1, &c2).unwrap().size()))
        });
    }
    group.finish();
}

fn bench_coprime(c: &mut Criterion) {
    let g = table("semidirect(q=2,l=2,p=3,k=2,action=[[[2,0],[0,1]],[[1,0],[0,2]]])");
    let h = relabel_table(&g, 3).0;
    let mut group = c.benchmark_group("iso_hae_order36");
    for w in worker_counts() {
        group.bench_with_input(BenchmarkId::from_parameter(w), &w, |b, &w| {
            b.iter(|| with_workers(w, || iso_hae(&g, &h).unwrap().is_some()))
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_codes, bench_coprime
}
criterion_main!(benches);
