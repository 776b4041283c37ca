//! Shared FFT plan cache.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

type PlanMap = HashMap<(usize, bool), Arc<dyn Fft<f64>>>;

fn cache() -> &'static Mutex<PlanMap> {
    static CACHE: OnceLock<Mutex<PlanMap>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Returns a (cached) plan of length `n`; `inverse` selects `e^{+2πi}`.
pub fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut map = cache().lock().expect("fft plan cache poisoned");
    map.entry((n, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

/// In-place unnormalized transform of every length-`n` row of `data`.
pub fn rows(data: &mut [Complex64], n: usize, inverse: bool) {
    plan(n, inverse).process(data);
}

/// In-place unnormalized 2-D transform of an `n × n` row-major array.
pub fn transform_2d(data: &mut [Complex64], n: usize, inverse: bool) {
    let p = plan(n, inverse);
    p.process(data);
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..n {
        for r in 0..n {
            col[r] = data[r * n + c];
        }
        p.process(&mut col);
        for r in 0..n {
            data[r * n + c] = col[r];
        }
    }
}
