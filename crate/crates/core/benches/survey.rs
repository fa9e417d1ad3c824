use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use thetawh::exec;
use thetawh::lattice::{CoverSpec, QForm};
use thetawh::rootdata::{Family, RootDatum};
use thetawh::theta::ThetaContext;

fn cover(f: Family, r: usize, n: i64) -> CoverSpec {
    CoverSpec::new(RootDatum::build(f, r).unwrap(), n, QForm::Short(1)).unwrap()
}

fn survey(c: &mut Criterion) {
    let mut g = c.benchmark_group("theta_context");
    g.sample_size(10);
    for (f, r, n) in [(Family::C, 3, 14), (Family::A, 5, 6), (Family::G, 2, 12)] {
        let id = format!("{f}{r}_n{n}");
        g.bench_with_input(BenchmarkId::new("sequential", &id), &(f, r, n), |b, &(f, r, n)| {
            b.iter(|| exec::with_jobs(Some(1), || ThetaContext::new(cover(f, r, n)).unwrap().upper()))
        });
        g.bench_with_input(BenchmarkId::new("parallel", &id), &(f, r, n), |b, &(f, r, n)| {
            b.iter(|| exec::with_jobs(None, || ThetaContext::new(cover(f, r, n)).unwrap().upper()))
        });
    }
    g.finish();
}

criterion_group!(benches, survey);
criterion_main!(benches);
