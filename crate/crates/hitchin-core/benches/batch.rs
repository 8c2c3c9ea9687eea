use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hitchin_core::batch::{verify, Mode, VerifyConfig};
use hitchin_core::CaseTag;

fn verify_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for case in [CaseTag::D22Ss, CaseTag::D31Sn] {
        for mode in [Mode::Sequential, Mode::Parallel] {
            let mut cfg = VerifyConfig::new(case, 200, 7);
            cfg.mode = mode;
            group.bench_with_input(BenchmarkId::new(format!("{mode:?}"), case), &cfg, |b, cfg| {
                b.iter(|| verify(cfg))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, verify_modes);
criterion_main!(benches);
