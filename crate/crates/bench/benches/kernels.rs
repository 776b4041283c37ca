use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dilab_bench::{cauchy, grid, packet, sampled_packet, SIZES};
use dilab_core::besov::{besov_norm, DyadicPartition};
use dilab_core::index::{ExponentPair, WeightSpec};
use dilab_core::pde::{propagate_state, Equation};
use dilab_core::signal;
use dilab_core::stft::{self, NormSpec, StftOptions, Window, GABOR_A};
use std::hint::black_box;

fn sampling(c: &mut Criterion) {
    let f = packet();
    let mut g = c.benchmark_group("sample");
    for n in SIZES {
        let gr = grid(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &gr, |b, gr| b.iter(|| signal::sample(&f, gr).unwrap()));
    }
    g.finish();
}

fn stft_matrix(c: &mut Criterion) {
    let mut g = c.benchmark_group("stft");
    g.sample_size(20);
    for n in [256, 1024] {
        let f = sampled_packet(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| stft::stft(f, &Window::gaussian(), &StftOptions::for_dim(1)).unwrap())
        });
    }
    g.finish();
}

fn modulation_norms(c: &mut Criterion) {
    let specs = [
        NormSpec::new(ExponentPair::new(2.0, 2.0).unwrap(), WeightSpec::unweighted()),
        NormSpec::new(ExponentPair::new(f64::INFINITY, 1.0).unwrap(), WeightSpec::time(1.0)),
    ];
    let mut g = c.benchmark_group("mod_norm");
    g.sample_size(20);
    for n in SIZES {
        let f = sampled_packet(n);
        g.bench_with_input(BenchmarkId::new("continuous", n), &f, |b, f| {
            b.iter(|| stft::mod_norms_sampled(f, black_box(&specs), None).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("frame", n), &f, |b, f| {
            b.iter(|| stft::mod_norms_frame_sampled(f, black_box(&specs), GABOR_A).unwrap())
        });
    }
    g.finish();
}

fn besov(c: &mut Criterion) {
    let e = ExponentPair::new(2.0, 1.0).unwrap();
    let mut g = c.benchmark_group("besov_norm");
    for n in SIZES {
        let f = sampled_packet(n);
        let part = DyadicPartition::for_grid(&f.grid);
        g.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| b.iter(|| besov_norm(f, e, 0.5, &part).unwrap()));
    }
    g.finish();
}

fn propagation(c: &mut Criterion) {
    let mut g = c.benchmark_group("propagate");
    for eq in [Equation::Wave, Equation::Plate] {
        for n in SIZES {
            let data = cauchy(n, eq);
            g.bench_with_input(BenchmarkId::new(eq.to_string(), n), &data, |b, d| {
                b.iter(|| propagate_state(d, black_box(3.5)).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, sampling, stft_matrix, modulation_norms, besov, propagation);
criterion_main!(benches);
