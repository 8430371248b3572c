use cosat::arith::{ilp_feasible, lp_feasible, Domain};
use cosat_bench::chain_system;
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn feasibility(c: &mut Criterion) {
    let mut group = c.benchmark_group("feasibility");
    for n in [2, 4, 6, 8] {
        let lp = chain_system(n, Domain::NonNegRational);
        group.bench_with_input(BenchmarkId::new("lp", n), &lp, |b, s| {
            b.iter(|| black_box(lp_feasible(s).unwrap()))
        });
        let ilp = chain_system(n, Domain::NonNegInteger);
        group.bench_with_input(BenchmarkId::new("ilp", n), &ilp, |b, s| {
            b.iter(|| black_box(ilp_feasible(s).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, feasibility);
criterion_main!(benches);
