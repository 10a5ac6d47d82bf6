use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64 as C64;
use schur_compress::{compress, compress_sequential, PureQudit};

fn fixed_qudit(d: usize) -> PureQudit {
    let amps: Vec<C64> = (1..=d)
        .map(|i| C64::new(i as f64, ((i * 7) % 5) as f64 * 0.1))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    PureQudit::new(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

/// Parallel vs sequential cascade at sizes where the per-step registers are
/// large enough for the thread pool to matter. With `--no-default-features`
/// both sides run the same sequential code.
fn bench_cascade(c: &mut Criterion) {
    let mut group = c.benchmark_group("cascade");
    for &(d, n) in &[(3usize, 100usize), (4, 60), (5, 40), (6, 32)] {
        let phi = fixed_qudit(d);
        compress(&phi, n).unwrap(); // warm the isometry cache
        group.bench_with_input(BenchmarkId::new("parallel", format!("d{d}_n{n}")), &phi, |b, phi| {
            b.iter(|| compress(phi, n).unwrap())
        });
        group.bench_with_input(
            BenchmarkId::new("sequential", format!("d{d}_n{n}")),
            &phi,
            |b, phi| b.iter(|| compress_sequential(phi, n).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, bench_cascade);
criterion_main!(benches);
