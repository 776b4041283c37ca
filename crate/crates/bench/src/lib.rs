//! Benchmark fixtures shared by the criterion targets.

use dilab_core::pde::{CauchyData, Equation};
use dilab_core::signal::{self, AnalyticSignal, GridSpec, SampledSignal};

/// Sizes swept by the grid-size benchmarks.
pub const SIZES: [usize; 3] = [256, 1024, 4096];

/// Grid of `n` points on `[-8, 8)`.
pub fn grid(n: usize) -> GridSpec {
    GridSpec::new(1, n, 8.0).expect("valid grid")
}

/// Translated, modulated Gaussian packet.
pub fn packet() -> AnalyticSignal {
    signal::modulate(&signal::translate(&AnalyticSignal::gaussian(1), &[0.75]), &[1.5])
}

pub fn sampled_packet(n: usize) -> SampledSignal {
    signal::sample(&packet(), &grid(n)).expect("finite samples")
}

/// Gaussian initial displacement with zero velocity.
pub fn cauchy(n: usize, eq: Equation) -> CauchyData {
    let g = grid(n);
    let u0 = signal::sample(&AnalyticSignal::gaussian(1), &g).expect("finite samples");
    CauchyData::new(u0, SampledSignal::zeros(g), eq).expect("matching grids")
}
